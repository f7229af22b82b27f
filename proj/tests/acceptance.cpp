// Acceptance suite: runs every headline check at its stated tolerance and
// prints one pass/fail line per criterion. Exit code is the failure count.
// GPWTDG_ACCEPT_FULL=1 switches the Weber study to kappa = 50 (slow); the
// default is the kappa = 20 fast variant with the same rate bound.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gpwtdg/analytic.hpp"
#include "gpwtdg/assembly.hpp"
#include "gpwtdg/gpw.hpp"
#include "gpwtdg/harness.hpp"
#include "gpwtdg/quadrature.hpp"
#include "gpwtdg/solver.hpp"

using namespace gpwtdg;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %-34s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double slope_last(const std::vector<ConvergenceRecord>& records, int window) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = records.size() >= static_cast<size_t>(window) ? records.size() - window : 0;
       i < records.size(); ++i) {
    const double lx = std::log(records[i].h), ly = std::log(records[i].rel_l2);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool coercivity_holds(const BlockSystem& system, const BlockSystem& gram, double* worst) {
  const Eigen::SparseMatrix<Complex> m = system.to_sparse();
  const Eigen::SparseMatrix<Complex> g = gram.to_sparse();
  std::mt19937 rng(42);
  std::normal_distribution<double> dist;
  *worst = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXcd x(system.dimension());
    for (int i = 0; i < x.size(); ++i) x[i] = Complex(dist(rng), dist(rng));
    const double im = x.dot(m * x).imag();
    const double xgx = x.dot(g * x).real();
    if (im < 0.0 || im < (1.0 - 1e-6) * xgx) return false;
    if (xgx > 0.0) *worst = std::min(*worst, im / xgx);
  }
  return true;
}

// --- criteria -------------------------------------------------------------

void criterion_plane_wave_reduction() {
  const CoefficientField one = make_constant(1.0);
  double worst = 0.0;
  for (int n : {1, 2, 3}) {
    for (int q : {1, 2, 3, 4, 5}) {
      const GpwBasisSet basis = build_basis_set(one, {0.2, -0.7}, 0, 12.0, n, q);
      for (int l = 0; l < basis.size(); ++l) {
        const auto& coeffs = basis.function(l).coeffs();
        for (int i = 0; i <= coeffs.degree(); ++i)
          for (int j = 0; i + j <= coeffs.degree(); ++j)
            if (i + j >= 2) worst = std::max(worst, std::abs(coeffs.at(i, j)));
      }
    }
  }
  report(1, "plane-wave reduction", worst <= 1e-14, fmt("max |lambda_{>=2}| = %.2e", worst));
}

void criterion_residual_order() {
  const CoefficientField airy = make_airy_field();
  const std::vector<double> radii{0.2, 0.1, 0.05, 0.025};
  bool pass = true;
  std::string detail;
  for (int q : {3, 4}) {
    const Point c{0.2, -0.3};
    const GpwFunction gpw =
        build_gpw(airy, c, 4.0, q, 0.8, default_normalization(airy, c, 4.0));
    const ResidualOrderReport r = residual_order(gpw, airy, radii);
    if (r.exact || std::abs(r.slope - q) > 0.3) pass = false;
    detail += fmt("q=%d slope=%.2f ", q, r.slope);
  }
  report(2, "gpw residual order", pass, detail);
}

void criterion_recursion_spot_values() {
  const CoefficientField field("shifted-linear", kSmoothForever,
                               [](int dx, int dy, double x, double) {
                                 if (dx == 0 && dy == 0) return 2.0 + x;
                                 if (dx == 1 && dy == 0) return 1.0;
                                 return 0.0;
                               });
  const GpwFunction gpw =
      build_gpw(field, {0, 0}, 1.0, 3, 0.0, Complex(0, 1) * std::sqrt(2.0));
  const double e20 = std::abs(gpw.coeffs().at(2, 0));
  const double e30 = std::abs(gpw.coeffs().at(3, 0) - Complex(-1.0 / 6, 0));
  report(3, "recursion spot values", e20 <= 1e-12 && e30 <= 1e-12,
         fmt("|l20| = %.2e, |l30 + 1/6| = %.2e", e20, e30));
}

void criterion_form_equivalence() {
  const CoefficientField airy = make_airy_field();
  const double kappa = 5.0;
  const Mesh mesh = build_structured_mesh({-1, -1, 1, 1}, {4, 4});  // 32 elements
  const auto bases = build_all_bases(airy, mesh, kappa, 2, 3);
  DgParameters params;
  params.gamma0 = 1.0;
  params.gamma_exponent = 3.0;
  const auto g = [](Point p, Vec2) { return Complex(p.x, p.y); };

  AssemblyOptions opts;
  opts.quad_scale = 2.0;
  opts.variant = FormVariant::Primal;
  const auto primal = assemble_system(mesh, bases, airy, kappa, params, g, opts);
  opts.variant = FormVariant::AdjointIbp;
  const auto adjoint = assemble_system(mesh, bases, airy, kappa, params, g, opts);
  opts.variant = FormVariant::PrimalIbp;
  const auto primal_ibp = assemble_system(mesh, bases, airy, kappa, params, g, opts);

  const Eigen::SparseMatrix<Complex> a = primal.to_sparse();
  const double scale = a.norm();
  const double d1 = (a - adjoint.to_sparse()).norm() / scale;
  const double d2 = (a - primal_ibp.to_sparse()).norm() / scale;
  report(4, "assembly-form equivalence", d1 <= 1e-8 && d2 <= 1e-8,
         fmt("adjoint %.2e, primal-ibp %.2e", d1, d2));
}

void criterion_coercivity() {
  bool pass = true;
  double worst_ratio = 1e300;
  struct Setup {
    ProblemKind kind;
    double kappa;
    int n, q, cells;
  };
  const Setup setups[] = {{ProblemKind::Airy, 15.0, 2, 3, 2},
                          {ProblemKind::Airy, 5.0, 1, 2, 4},
                          {ProblemKind::Weber, 20.0, 2, 3, 2}};
  for (const auto& s : setups) {
    const CoefficientField field =
        s.kind == ProblemKind::Airy ? make_airy_field() : make_weber_field(5.0, s.kappa);
    const Mesh mesh = build_structured_mesh({-1, -1, 1, 1}, {s.cells, s.cells});
    const auto bases = build_all_bases(field, mesh, s.kappa, s.n, s.q);
    DgParameters params;
    params.gamma0 = 1.0;
    params.gamma_exponent = 3.0;
    const auto system = assemble_system(mesh, bases, field, s.kappa, params,
                                        [](Point, Vec2) { return Complex(0, 0); });
    const auto gram = assemble_dg_gram(mesh, bases, field, s.kappa, params);
    double ratio = 0.0;
    if (!coercivity_holds(system, gram, &ratio)) pass = false;
    worst_ratio = std::min(worst_ratio, ratio);
  }
  report(5, "coercivity Im(x*Mx) >= ||u||_DG^2", pass,
         fmt("min Im(x*Mx)/x*Gx = %.8f over 3 systems x 100 vectors", worst_ratio));
}

void criterion_trefftz_containment() {
  RunConfig config;
  config.problem = ProblemKind::Constant;
  config.kappa = 10.0;
  config.theta = 0.0;
  config.n = 1;
  config.q = 1;
  config.gamma0 = 0.0;
  config.gamma_exponent = 0.0;
  config.levels = 5;
  const ConvergenceStudy study = run_convergence(config);
  bool pass = study.records.size() == 5 && !study.solver_failed;
  double worst = 0.0;
  for (const auto& r : study.records) worst = std::max(worst, r.rel_l2);
  pass = pass && worst <= 1e-8;
  report(6, "trefftz containment", pass, fmt("max rel error over levels = %.2e", worst));
}

ConvergenceStudy airy_study(int n, int q, double gamma0, double r) {
  RunConfig config;
  config.problem = ProblemKind::Airy;
  config.kappa = 15.0;
  config.n = n;
  config.q = q;
  config.gamma0 = gamma0;
  config.gamma_exponent = r;
  config.levels = 5;
  return run_convergence(config);
}

void criterion_airy_convergence() {
  const ConvergenceStudy a = airy_study(2, 3, 1.0, 3.0);
  const ConvergenceStudy b = airy_study(3, 4, 1.0, 3.0);
  const bool pass = a.fitted_rate >= 2.5 && b.fitted_rate >= 3.5;
  report(7, "airy convergence (gamma = h^3)", pass,
         fmt("n=2,q=3 rate %.2f (>= 2.5); n=3,q=4 rate %.2f (>= 3.5)", a.fitted_rate,
             b.fitted_rate));
}

void criterion_gamma_sweep() {
  const ConvergenceStudy gh = airy_study(2, 3, 1.0, 1.0);
  const ConvergenceStudy g0 = airy_study(2, 3, 0.0, 0.0);
  const bool pass = gh.fitted_rate >= 2.5 && g0.fitted_rate >= 2.5;
  report(8, "gamma sweep robustness", pass,
         fmt("gamma=h rate %.2f; gamma=0 rate %.2f (both >= 2.5)", gh.fitted_rate,
             g0.fitted_rate));
}

void criterion_weber() {
  const bool full = []() {
    const char* s = std::getenv("GPWTDG_ACCEPT_FULL");
    return s && *s && std::string(s) != "0";
  }();
  RunConfig config;
  config.problem = ProblemKind::Weber;
  config.kappa = full ? 50.0 : 20.0;
  config.weber_a = 5.0;
  config.n = 2;
  config.q = 3;
  config.gamma0 = 1.0;
  config.gamma_exponent = 3.0;
  config.levels = full ? 6 : 5;
  const ConvergenceStudy study = run_convergence(config);
  const double rate = slope_last(study.records, 3);
  report(9, full ? "weber convergence (kappa = 50)" : "weber convergence (kappa = 20)",
         !study.solver_failed && rate >= 2.5, fmt("rate over last 3 levels %.2f (>= 2.5)", rate));
}

void criterion_linear_approximation() {
  const CoefficientField field("shifted-linear", kSmoothForever,
                               [](int dx, int dy, double x, double) {
                                 if (dx == 0 && dy == 0) return 2.0 + x;
                                 if (dx == 1 && dy == 0) return 1.0;
                                 return 0.0;
                               });
  // best L2([0,1]^2) approximation via normal equations with a tensor rule
  const Point center{0.5, 0.5};
  const std::vector<double> kappas{0.2, 0.1, 0.05};
  const std::function<Complex(Point)> targets[] = {
      [](Point) { return Complex(1, 0); }, [](Point p) { return Complex(p.x - 0.5, 0); },
      [](Point p) { return Complex(p.y - 0.5, 0); }};

  bool pass = true;
  std::string detail;
  for (int t = 0; t < 3; ++t) {
    std::vector<double> scaled;
    for (const double kt : kappas) {
      std::vector<GpwFunction> basis;
      const Complex N = default_normalization(field, center, kt);
      for (int l = 0; l < 5; ++l)
        basis.push_back(build_gpw(field, center, kt, 3, 2 * M_PI * l / 5, N));

      const EdgeRule gauss = gauss_edge(24);
      const int m = gauss.size();
      Eigen::MatrixXcd values(5, m * m);
      Eigen::VectorXcd fv(m * m);
      Eigen::VectorXd w(m * m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const Point p{gauss.nodes[i], gauss.nodes[j]};
          const int idx = i * m + j;
          fv[idx] = targets[t](p);
          w[idx] = gauss.weights[i] * gauss.weights[j];
          for (int l = 0; l < 5; ++l) values(l, idx) = basis[l].evaluate(p).value;
        }
      const Eigen::MatrixXcd gram = values.conjugate() * w.asDiagonal() * values.transpose();
      const Eigen::VectorXcd rhs = values.conjugate() * w.asDiagonal() * fv;
      const Eigen::VectorXcd coeff = gram.completeOrthogonalDecomposition().solve(rhs);
      const Eigen::VectorXcd fit = values.transpose() * coeff;
      double err2 = 0.0;
      for (int idx = 0; idx < m * m; ++idx) err2 += w[idx] * std::norm(fv[idx] - fit[idx]);
      scaled.push_back(std::sqrt(err2) / (kt * kt));
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    if (*hi / *lo >= 2.0) pass = false;
    detail += fmt("f%d ratio %.2f ", t, *hi / *lo);
  }
  report(10, "linear-polynomial approximation", pass, detail);
}

void criterion_special_functions() {
  const AiryValues v = airy_ai(0.0);
  const double ai_err = std::abs(v.ai - 0.3550280538878172);
  const double aip_err = std::abs(v.aip + 0.2588194037928068);

  // |s| <= 4 keeps the solution products below ~1e6, where an absolute 1e-9
  // on the Wronskian is attainable in double precision
  const WeberOde odd(5.0, 0.0, 1.0);
  const WeberOde even(5.0, 1.0, 0.0);
  double wronskian_err = 0.0;
  for (double s = -4.0; s <= 4.0; s += 0.2) {
    const OdeValues o = odd.eval(s), e = even.eval(s);
    wronskian_err = std::max(wronskian_err, std::abs(e.w * o.wp - e.wp * o.w - 1.0));
  }

  double pde_err = 0.0;
  const ExactSolution solutions[] = {make_exact_airy(15.0), make_exact_weber(50.0, 5.0),
                                     make_exact_plane_wave(10.0, 0.4)};
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(-0.95, 0.95);
  for (const auto& u : solutions) {
    const double k2 = u.kappa * u.kappa;
    for (int trial = 0; trial < 20; ++trial) {
      const Point p{coord(rng), coord(rng)};
      const double step = 1e-5;
      const Complex lap = (u.value({p.x + step, p.y}) + u.value({p.x - step, p.y}) +
                           u.value({p.x, p.y + step}) + u.value({p.x, p.y - step}) -
                           4.0 * u.value(p)) /
                          (step * step);
      const Complex residual = lap + k2 * u.field.value(p.x, p.y) * u.value(p);
      const double scale = std::max(1.0, std::abs(u.value(p))) * k2;
      pde_err = std::max(pde_err, std::abs(residual) / scale);
    }
  }
  report(11, "special functions",
         ai_err <= 1e-10 && aip_err <= 1e-10 && wronskian_err <= 1e-9 && pde_err <= 1e-6,
         fmt("Ai %.1e, Ai' %.1e, wronskian %.1e, pde %.1e", ai_err, aip_err, wronskian_err,
             pde_err));
}

void criterion_determinism() {
  setenv("GPWTDG_THREADS", "1", 1);
  const std::vector<RunConfig> preset = preset_sweep("airy-small");
  std::ostringstream a, b;
  write_csv(run_convergence(preset[0]).records, a);
  write_csv(run_convergence(preset[0]).records, b);
  unsetenv("GPWTDG_THREADS");
  report(12, "single-threaded determinism", a.str() == b.str() && !a.str().empty(),
         fmt("%zu identical bytes", a.str().size()));
}

}  // namespace

int main() {
  criterion_plane_wave_reduction();
  criterion_residual_order();
  criterion_recursion_spot_values();
  criterion_form_equivalence();
  criterion_coercivity();
  criterion_trefftz_containment();
  criterion_airy_convergence();
  criterion_gamma_sweep();
  criterion_weber();
  criterion_linear_approximation();
  criterion_special_functions();
  criterion_determinism();
  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "OK" : "FAILED", failures);
  return failures;
}
