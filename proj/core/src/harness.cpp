#include "gpwtdg/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gpwtdg/parallel.hpp"
#include "gpwtdg/plot.hpp"
#include "gpwtdg/quadrature.hpp"

namespace gpwtdg {

namespace {

constexpr double kConditionFitCutoff = 1e14;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc()) throw ConfigError("bad number in CSV: " + std::string(s));
  return v;
}

std::string default_label(const RunConfig& c) {
  std::ostringstream os;
  switch (c.problem) {
    case ProblemKind::Airy: os << "airy"; break;
    case ProblemKind::Weber: os << "weber"; break;
    case ProblemKind::Constant: os << "constant"; break;
  }
  os << "_k" << c.kappa << "_n" << c.n << "_q" << c.q << "_g" << c.gamma0 << "r"
     << c.gamma_exponent;
  return os.str();
}

ElementFunction exact_element_function(const ExactSolution& exact) {
  const double k2 = exact.kappa * exact.kappa;
  const CoefficientField field = exact.field;
  return [exact, field, k2](int, Point p) {
    WaveSample s;
    s.value = exact.value(p);
    s.gradient = exact.gradient(p);
    // exact solutions satisfy the equation, so lap u = -kappa^2 eps u
    s.laplacian = -k2 * field.value(p.x, p.y) * s.value;
    return s;
  };
}

}  // namespace

void RunConfig::validate() const {
  if (n < 1) throw ConfigError("n must be >= 1");
  if (q < 1) throw ConfigError("q must be >= 1");
  if (levels < 1) throw ConfigError("levels must be >= 1");
  if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
  if (quad_order < 0) throw ConfigError("quad order must be nonnegative");
  if (initial_cells < 1) throw ConfigError("initial cells must be >= 1");
  if (gamma0 < 0.0 || gamma_exponent < 0.0) throw ConfigError("gamma parameters must be >= 0");
}

ExactSolution RunConfig::exact() const {
  switch (problem) {
    case ProblemKind::Airy: return make_exact_airy(kappa);
    case ProblemKind::Weber: return make_exact_weber(kappa, weber_a);
    case ProblemKind::Constant: return make_exact_plane_wave(kappa, theta);
  }
  throw ConfigError("unknown problem kind");
}

DgParameters RunConfig::dg_parameters() const {
  DgParameters p;
  p.gamma0 = gamma0;
  p.gamma_exponent = gamma_exponent;
  return p;
}

L2Error compute_l2_error(const Mesh& mesh, const Eigen::VectorXcd& coefficients,
                         std::span<const GpwBasisSet> bases, const ExactSolution& exact,
                         int quad_degree_override) {
  if (bases.empty()) throw ConfigError("compute_l2_error: no basis sets");
  const int p = bases[0].size();
  const int q = bases[0].q();
  if (coefficients.size() != static_cast<int>(bases.size()) * p)
    throw ConfigError("compute_l2_error: coefficient size mismatch");

  // rule two degrees above the assembly choice, cached per distinct degree
  AssemblyOptions opts;
  opts.triangle_degree_override = quad_degree_override;
  std::vector<int> degree = volume_quadrature_degrees(mesh, bases, exact.kappa, q, opts);
  std::map<int, TriangleRule> rules;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    degree[k] += 2;
    if (!rules.count(degree[k])) rules.emplace(degree[k], triangle_rule(degree[k]));
  }

  std::vector<double> err2(mesh.num_elements(), 0.0), ref2(mesh.num_elements(), 0.0);
  parallel_for(mesh.num_elements(), [&](int k) {
    const TriangleRule& rule = rules.at(degree[k]);
    const auto v = mesh.element_vertices(k);
    const GpwBasisSet& basis = bases[k];
    for (int i = 0; i < rule.size(); ++i) {
      const Point pt = triangle_point(v, rule.nodes[i]);
      Complex uh(0.0, 0.0);
      for (int l = 0; l < p; ++l)
        uh += coefficients[k * p + l] * basis.function(l).evaluate(pt).value;
      const Complex ue = exact.value(pt);
      const double w = mesh.area(k) * rule.weights[i];
      err2[k] += w * std::norm(uh - ue);
      ref2[k] += w * std::norm(ue);
    }
  });

  double e2 = 0.0, r2 = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    e2 += err2[k];
    r2 += ref2[k];
  }
  if (!(r2 > 0.0)) throw ConfigError("compute_l2_error: exact solution has zero norm");
  return {std::sqrt(e2), std::sqrt(e2 / r2)};
}

double compute_dg_error(const Mesh& mesh, const Eigen::VectorXcd& coefficients,
                        std::span<const GpwBasisSet> bases, const ExactSolution& exact,
                        const DgParameters& params, const AssemblyOptions& options) {
  const ElementFunction uh = discrete_function(bases, coefficients);
  const ElementFunction ue = exact_element_function(exact);
  const ElementFunction diff = [uh, ue](int k, Point p) {
    const WaveSample a = uh(k, p), b = ue(k, p);
    WaveSample d;
    d.value = a.value - b.value;
    d.gradient = {a.gradient[0] - b.gradient[0], a.gradient[1] - b.gradient[1]};
    d.laplacian = a.laplacian - b.laplacian;
    return d;
  };
  const DgPlusTerms terms = dg_plus_seminorm_terms(mesh, diff, exact.field, exact.kappa, params,
                                                   bases.empty() ? 1 : bases[0].q(), options, bases);
  return std::sqrt(terms.dg_squared());
}

double fit_rate(const std::vector<ConvergenceRecord>& records) {
  const int levels = static_cast<int>(records.size());
  const int window = std::min(levels, std::max(3, levels - 1));
  std::vector<std::array<double, 2>> pts;
  for (int i = levels - window; i < levels; ++i) {
    const auto& r = records[i];
    if (!(r.rel_l2 > 0.0) || !std::isfinite(r.rel_l2)) continue;
    if (r.condition > kConditionFitCutoff) continue;  // conditioning-limited level
    pts.push_back({std::log(r.h), std::log(r.rel_l2)});
  }
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    sx += p[0];
    sy += p[1];
    sxx += p[0] * p[0];
    sxy += p[0] * p[1];
  }
  const double n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceStudy run_convergence(const RunConfig& config) {
  config.validate();
  const ExactSolution exact = config.exact();
  const CoefficientField& field = exact.field;
  const DgParameters params = config.dg_parameters();
  const int p = 2 * config.n + 1;

  AssemblyOptions options;
  if (config.quad_order > 0) {
    options.edge_points_override = config.quad_order;
    options.triangle_degree_override = 2 * config.quad_order;
  }

  const bool dirichlet_mode = config.boundary == BoundaryMode::Dirichlet;
  const DirichletPredicate classify =
      dirichlet_mode ? DirichletPredicate([](Point) { return true; }) : nullptr;

  std::optional<Mesh> mesh;
  if (!config.mesh_file.empty())
    mesh = load_mesh(config.mesh_file, classify);
  else
    mesh = build_structured_mesh({-1.0, -1.0, 1.0, 1.0},
                                 {config.initial_cells, config.initial_cells}, classify);

  RobinData robin = [&exact](Point pt, Vec2 normal) { return impedance_trace(exact, pt, normal); };
  DirichletData dirichlet = nullptr;
  if (dirichlet_mode) dirichlet = [&exact](Point pt) { return exact.value(pt); };

  ConvergenceStudy study;
  for (int level = 0; level < config.levels; ++level) {
    if (level > 0) mesh = refine_uniform(*mesh);

    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    const std::vector<GpwBasisSet> bases =
        build_all_bases(field, *mesh, config.kappa, config.n, config.q, options.threads);
    try {
      const BlockSystem system =
          assemble_system(*mesh, bases, field, config.kappa, params, robin, options, dirichlet);
      const auto t1 = Clock::now();
      const SolveReport report = solve_direct(system);

      ConvergenceRecord rec;
      rec.level = level;
      rec.h = mesh->h();
      rec.ndof = system.dimension();
      rec.c_over_h = std::sqrt(static_cast<double>(rec.ndof) / p);
      rec.rel_l2 = compute_l2_error(*mesh, report.solution, bases, exact,
                                    options.triangle_degree_override)
                       .rel;
      rec.dg_error = compute_dg_error(*mesh, report.solution, bases, exact, params, options);
      rec.condition = report.condition_estimate;
      if (!deterministic_mode()) {
        rec.assemble_seconds = std::chrono::duration<double>(t1 - t0).count();
        rec.solve_seconds = report.factor_seconds + report.solve_seconds;
      }
      study.records.push_back(rec);
    } catch (const AssemblyOverflow& err) {
      study.skipped_levels.emplace_back(level, err.what());
    } catch (const SolverError& err) {
      study.solver_failed = true;
      study.failure = err.what();
      break;
    }
  }
  study.fitted_rate = fit_rate(study.records);
  return study;
}

void write_csv(const std::vector<ConvergenceRecord>& records, std::ostream& out) {
  out << "level,h,ndof,c_over_h,rel_l2,dg_err,cond,assemble_s,solve_s\n";
  for (const auto& r : records) {
    out << r.level << ',' << format_double(r.h) << ',' << r.ndof << ','
        << format_double(r.c_over_h) << ',' << format_double(r.rel_l2) << ','
        << format_double(r.dg_error) << ',' << format_double(r.condition) << ','
        << format_double(r.assemble_seconds) << ',' << format_double(r.solve_seconds) << '\n';
  }
}

std::vector<ConvergenceRecord> read_csv(std::istream& in) {
  std::vector<ConvergenceRecord> records;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty CSV");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw ConfigError("CSV row with wrong column count");
    ConvergenceRecord r;
    r.level = static_cast<int>(parse_double(cells[0]));
    r.h = parse_double(cells[1]);
    r.ndof = static_cast<int>(parse_double(cells[2]));
    r.c_over_h = parse_double(cells[3]);
    r.rel_l2 = parse_double(cells[4]);
    r.dg_error = parse_double(cells[5]);
    r.condition = parse_double(cells[6]);
    r.assemble_seconds = parse_double(cells[7]);
    r.solve_seconds = parse_double(cells[8]);
    records.push_back(r);
  }
  return records;
}

void emit_outputs(const std::vector<std::pair<RunConfig, ConvergenceStudy>>& results,
                  const std::string& out_dir, const std::string& name) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + out_dir);

  std::vector<PlotSeries> series;
  for (const auto& [config, study] : results) {
    const std::string label = config.label.empty() ? default_label(config) : config.label;
    const fs::path csv_path = fs::path(out_dir) / (label + ".csv");
    std::ofstream csv(csv_path);
    if (!csv) throw ConfigError("cannot write " + csv_path.string());
    write_csv(study.records, csv);

    PlotSeries s;
    s.label = label;
    for (const auto& r : study.records) s.points.push_back({r.c_over_h, r.rel_l2});
    series.push_back(std::move(s));
  }

  const fs::path svg_path = fs::path(out_dir) / (name + ".svg");
  std::ofstream svg(svg_path);
  if (!svg) throw ConfigError("cannot write " + svg_path.string());
  PlotOptions plot;
  plot.title = name;
  write_loglog_svg(svg, series, plot);
}

std::vector<RunConfig> preset_sweep(const std::string& name) {
  auto grid = [](double kappa, ProblemKind kind, double gamma0, double r,
                 const std::string& tag) {
    std::vector<RunConfig> configs;
    for (int n = 1; n <= 4; ++n)
      for (int q : {1, 3, 4, 5}) {
        RunConfig c;
        c.problem = kind;
        c.kappa = kappa;
        c.n = n;
        c.q = q;
        c.gamma0 = gamma0;
        c.gamma_exponent = r;
        c.levels = 5;
        c.label = tag + "_n" + std::to_string(n) + "_q" + std::to_string(q);
        configs.push_back(c);
      }
    return configs;
  };
  if (name == "airy-gh3") return grid(15.0, ProblemKind::Airy, 1.0, 3.0, name);
  if (name == "airy-gh1") return grid(15.0, ProblemKind::Airy, 1.0, 1.0, name);
  if (name == "airy-g0") return grid(15.0, ProblemKind::Airy, 0.0, 0.0, name);
  if (name == "weber-gh3") return grid(50.0, ProblemKind::Weber, 1.0, 3.0, name);
  if (name == "airy-small") {
    RunConfig c;
    c.problem = ProblemKind::Airy;
    c.kappa = 15.0;
    c.n = 2;
    c.q = 3;
    c.gamma0 = 1.0;
    c.gamma_exponent = 3.0;
    c.levels = 3;
    c.label = "airy-small";
    return {c};
  }
  throw ConfigError("unknown preset: " + name);
}

}  // namespace gpwtdg
