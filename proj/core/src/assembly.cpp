#include "gpwtdg/assembly.hpp"

#include <cassert>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

#include "gpwtdg/parallel.hpp"
#include "gpwtdg/quadrature.hpp"

namespace gpwtdg {

double DgParameters::gamma(double h_K) const {
  return gamma0 == 0.0 ? 0.0 : gamma0 * std::pow(h_K, gamma_exponent);
}

void DgParameters::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("alpha, beta must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (gamma0 < 0.0 || gamma_exponent < 0.0)
    throw std::invalid_argument("gamma0 and its exponent must be nonnegative");
}

BlockSystem::BlockSystem(int num_elements, int block_size)
    : num_elements_(num_elements), block_size_(block_size) {
  rhs_ = Eigen::VectorXcd::Zero(dimension());
}

Eigen::MatrixXcd& BlockSystem::add_block(int row_element, int col_element) {
  auto [it, fresh] = blocks_.try_emplace({row_element, col_element});
  if (fresh) it->second = Eigen::MatrixXcd::Zero(block_size_, block_size_);
  return it->second;
}

Eigen::MatrixXcd& BlockSystem::block(int row_element, int col_element) {
  auto it = blocks_.find({row_element, col_element});
  if (it == blocks_.end()) throw std::out_of_range("no such block");
  return it->second;
}

const Eigen::MatrixXcd* BlockSystem::find_block(int row_element, int col_element) const {
  auto it = blocks_.find({row_element, col_element});
  return it == blocks_.end() ? nullptr : &it->second;
}

Eigen::SparseMatrix<Complex> BlockSystem::to_sparse() const {
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(blocks_.size() * block_size_ * block_size_);
  for (const auto& [key, b] : blocks_)
    for (int i = 0; i < block_size_; ++i)
      for (int j = 0; j < block_size_; ++j)
        triplets.emplace_back(dof(key.first, i), dof(key.second, j), b(i, j));
  Eigen::SparseMatrix<Complex> m(dimension(), dimension());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

void BlockSystem::dump_matrix(std::ostream& out) const {
  for (const auto& [key, b] : blocks_)
    for (int i = 0; i < block_size_; ++i)
      for (int j = 0; j < block_size_; ++j)
        out << dof(key.first, i) << ' ' << dof(key.second, j) << ' ' << b(i, j).real() << ' '
            << b(i, j).imag() << '\n';
}

void BlockSystem::dump_dof_map(std::ostream& out) const {
  for (int k = 0; k < num_elements_; ++k)
    for (int l = 0; l < block_size_; ++l) out << k << ' ' << l << ' ' << dof(k, l) << '\n';
}

namespace {

constexpr Complex kI(0.0, 1.0);

// ceiling on phase-driven quadrature orders: beyond this the integrand has
// left the range double precision can resolve at all
constexpr int kPhasePointsCap = 220;
constexpr int kPhaseDegreeCap = 220;

struct EdgeQuad {
  std::vector<Point> points;
  Eigen::VectorXd weights;  // include the edge length
};

EdgeQuad edge_quad(const Mesh& mesh, const Edge& e, const EdgeRule& rule) {
  EdgeQuad q;
  const Point a = mesh.vertex(e.v0), b = mesh.vertex(e.v1);
  const int m = rule.size();
  q.points.resize(m);
  q.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    q.points[i] = edge_point(a, b, rule.nodes[i]);
    q.weights[i] = e.length * rule.weights[i];
  }
  return q;
}

struct VolumeQuad {
  std::vector<Point> points;
  Eigen::VectorXd weights;  // include the element area
};

VolumeQuad volume_quad(const Mesh& mesh, int k, const TriangleRule& rule) {
  VolumeQuad q;
  const auto v = mesh.element_vertices(k);
  const int m = rule.size();
  q.points.resize(m);
  q.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    q.points[i] = triangle_point(v, rule.nodes[i]);
    q.weights[i] = mesh.area(k) * rule.weights[i];
  }
  return q;
}

// Basis traces on edge nodes, rows = basis functions.
struct EdgeTraces {
  Eigen::MatrixXcd value;
  Eigen::MatrixXcd dn;
};

EdgeTraces edge_traces(const GpwBasisSet& basis, const EdgeQuad& q, Vec2 n) {
  const int p = basis.size(), m = static_cast<int>(q.points.size());
  EdgeTraces t{Eigen::MatrixXcd(p, m), Eigen::MatrixXcd(p, m)};
  for (int l = 0; l < p; ++l)
    for (int i = 0; i < m; ++i) {
      const WaveSample s = basis.function(l).evaluate(q.points[i]);
      t.value(l, i) = s.value;
      t.dn(l, i) = s.gradient[0] * n[0] + s.gradient[1] * n[1];
    }
  return t;
}

struct VolumeEvals {
  Eigen::MatrixXcd value, gx, gy, residual;  // residual = lap + kappa^2 eps value
  Eigen::VectorXd eps;
};

VolumeEvals volume_evals(const GpwBasisSet& basis, const VolumeQuad& q,
                         const CoefficientField& field, double kappa) {
  const int p = basis.size(), m = static_cast<int>(q.points.size());
  VolumeEvals ev{Eigen::MatrixXcd(p, m), Eigen::MatrixXcd(p, m), Eigen::MatrixXcd(p, m),
                 Eigen::MatrixXcd(p, m), Eigen::VectorXd(m)};
  for (int i = 0; i < m; ++i) ev.eps[i] = field.value(q.points[i].x, q.points[i].y);
  const double k2 = kappa * kappa;
  for (int l = 0; l < p; ++l)
    for (int i = 0; i < m; ++i) {
      const WaveSample s = basis.function(l).evaluate(q.points[i]);
      ev.value(l, i) = s.value;
      ev.gx(l, i) = s.gradient[0];
      ev.gy(l, i) = s.gradient[1];
      ev.residual(l, i) = s.laplacian + k2 * ev.eps[i] * s.value;
    }
  return ev;
}

// B(i_test, j_trial) += coef * sum_n w_n conj(Test(i,n)) Trial(j,n)
void accumulate(Eigen::MatrixXcd& B, Complex coef, const Eigen::MatrixXcd& test,
                const Eigen::MatrixXcd& trial, const Eigen::VectorXd& w) {
  B.noalias() += coef * (test.conjugate() * w.asDiagonal() * trial.transpose());
}

enum Factor { kValue = 0, kDn = 1 };

struct EdgeTerm {
  Factor test;
  Factor trial;
  Complex coef;
};

// Sign convention: jump [w] = (w+ - w-) n_e, average {w} = (w+ + w-)/2; a
// basis function traces to zero from the element it does not live on.
std::vector<EdgeTerm> interior_terms(FormVariant variant, double sign_test, double sign_trial,
                                     const DgParameters& p, double kappa) {
  const double ss = sign_test * sign_trial;
  std::vector<EdgeTerm> terms;
  terms.push_back({kDn, kDn, -p.beta / (kI * kappa) * ss});
  terms.push_back({kValue, kValue, kI * kappa * p.alpha * ss});
  switch (variant) {
    case FormVariant::Primal:
      terms.push_back({kValue, kDn, Complex(-0.5 * sign_test)});
      terms.push_back({kDn, kValue, Complex(-0.5 * sign_trial)});
      break;
    case FormVariant::AdjointIbp:
      terms.push_back({kDn, kValue, Complex(0.5 * sign_test)});
      terms.push_back({kValue, kDn, Complex(-0.5 * sign_test)});
      break;
    case FormVariant::PrimalIbp:
      terms.push_back({kValue, kDn, Complex(0.5 * sign_trial)});
      terms.push_back({kDn, kValue, Complex(-0.5 * sign_trial)});
      break;
  }
  return terms;
}

std::vector<EdgeTerm> robin_terms(FormVariant variant, const DgParameters& p, double kappa) {
  std::vector<EdgeTerm> terms;
  terms.push_back({kDn, kDn, -p.delta / (kI * kappa)});
  terms.push_back({kValue, kValue, kI * kappa * (1.0 - p.delta)});
  switch (variant) {
    case FormVariant::Primal:
      terms.push_back({kDn, kValue, Complex(-p.delta)});   // u dn(conj v)
      terms.push_back({kValue, kDn, Complex(-p.delta)});   // dn(u) conj v
      break;
    case FormVariant::AdjointIbp:
      terms.push_back({kDn, kValue, Complex(1.0 - p.delta)});
      terms.push_back({kValue, kDn, Complex(-p.delta)});
      break;
    case FormVariant::PrimalIbp:
      terms.push_back({kDn, kValue, Complex(-p.delta)});
      terms.push_back({kValue, kDn, Complex(1.0 - p.delta)});
      break;
  }
  return terms;
}

std::vector<EdgeTerm> dirichlet_terms(FormVariant variant, const DgParameters& p, double kappa) {
  std::vector<EdgeTerm> terms;
  terms.push_back({kValue, kValue, kI * kappa * p.alpha});
  switch (variant) {
    case FormVariant::Primal:
      terms.push_back({kValue, kDn, Complex(-1.0)});
      terms.push_back({kDn, kValue, Complex(-1.0)});
      break;
    case FormVariant::AdjointIbp:
      terms.push_back({kValue, kDn, Complex(-1.0)});
      break;
    case FormVariant::PrimalIbp:
      terms.push_back({kDn, kValue, Complex(-1.0)});
      break;
  }
  return terms;
}

const Eigen::MatrixXcd& pick(const EdgeTraces& t, Factor f) {
  return f == kValue ? t.value : t.dn;
}

void apply_terms(Eigen::MatrixXcd& B, const std::vector<EdgeTerm>& terms, const EdgeTraces& test,
                 const EdgeTraces& trial, const Eigen::VectorXd& w) {
  for (const auto& t : terms) accumulate(B, t.coef, pick(test, t.test), pick(trial, t.trial), w);
}

struct QuadPlan {
  std::vector<const EdgeRule*> edge;        // per edge
  std::vector<const TriangleRule*> volume;  // per element
  std::map<int, EdgeRule> edge_rules;
  std::map<int, TriangleRule> tri_rules;
};

std::vector<double> phase_bounds(const Mesh& mesh, std::span<const GpwBasisSet> bases) {
  std::vector<double> phase(mesh.num_elements(), 0.0);
  if (bases.empty()) return phase;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    double radius = 0.0;
    for (const Point v : mesh.element_vertices(k))
      radius = std::max(radius, distance(v, mesh.centroid(k)));
    phase[k] = bases[k].phase_bound(radius);
  }
  return phase;
}

// The integrands are exponentials of complex polynomials: the default orders
// must resolve the plain kappa*h oscillation and the bound on |P| variation
// over the element (which dominates on coarse meshes, where the recursion
// produces large high-order coefficients).
QuadPlan make_quad_plan(const Mesh& mesh, std::span<const GpwBasisSet> bases, double kappa, int q,
                        const AssemblyOptions& o) {
  QuadPlan plan;
  const std::vector<double> phase = phase_bounds(mesh, bases);

  std::vector<int> edge_points(mesh.num_edges());
  const std::vector<int> tri_degree = volume_quadrature_degrees(mesh, bases, kappa, q, o);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    double h = mesh.diameter(edge.plus);
    double ph = phase[edge.plus];
    if (!edge.boundary()) {
      h = std::max(h, mesh.diameter(edge.minus));
      ph = std::max(ph, phase[edge.minus]);
    }
    // basis products swing by up to 4x the single-function phase bound; the
    // cap bounds cost where coarse-mesh tables defeat double precision anyway
    const int phase_points =
        std::min(static_cast<int>(std::ceil(1.3 * ph)) + 10, kPhasePointsCap);
    const int m = o.edge_points_override > 0
                      ? o.edge_points_override
                      : std::max(default_edge_points(kappa, h, q), phase_points);
    edge_points[e] = std::max(1, static_cast<int>(std::ceil(m * o.quad_scale)));
  }
  for (int m : edge_points)
    if (!plan.edge_rules.count(m)) plan.edge_rules.emplace(m, gauss_edge(m));
  for (int d : tri_degree)
    if (!plan.tri_rules.count(d)) plan.tri_rules.emplace(d, triangle_rule(d));
  plan.edge.resize(mesh.num_edges());
  plan.volume.resize(mesh.num_elements());
  for (int e = 0; e < mesh.num_edges(); ++e) plan.edge[e] = &plan.edge_rules.at(edge_points[e]);
  for (int k = 0; k < mesh.num_elements(); ++k) plan.volume[k] = &plan.tri_rules.at(tri_degree[k]);
  return plan;
}

void check_bases(const Mesh& mesh, std::span<const GpwBasisSet> bases) {
  if (static_cast<int>(bases.size()) != mesh.num_elements())
    throw std::invalid_argument("need exactly one basis set per element");
  for (int k = 0; k < mesh.num_elements(); ++k) {
    if (bases[k].element() != k) throw std::invalid_argument("basis set order mismatch");
    if (bases[k].size() != bases[0].size() || bases[k].q() != bases[0].q())
      throw std::invalid_argument("mixed basis parameters are not supported");
  }
}

struct EdgeLocal {
  Eigen::MatrixXcd diag_plus;
  Eigen::MatrixXcd diag_minus;
  Eigen::VectorXcd rhs_plus;
};

enum class AssembleKind { Form, Gram };

BlockSystem assemble_impl(const Mesh& mesh, std::span<const GpwBasisSet> bases,
                          const CoefficientField& field, double kappa, const DgParameters& params,
                          const AssemblyOptions& options, AssembleKind kind,
                          const RobinData* robin_data, const DirichletData* dirichlet_data) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  params.validate();
  check_bases(mesh, bases);
  const int p = bases[0].size();
  const int q = bases[0].q();
  const double k2 = kappa * kappa;

  BlockSystem system(mesh.num_elements(), p);
  for (int k = 0; k < mesh.num_elements(); ++k) system.add_block(k, k);
  for (const Edge& e : mesh.edges())
    if (!e.boundary()) {
      system.add_block(e.plus, e.minus);
      system.add_block(e.minus, e.plus);
    }

  const QuadPlan plan = make_quad_plan(mesh, bases, kappa, q, options);
  std::vector<EdgeLocal> locals(mesh.num_edges());

  parallel_for(
      mesh.num_edges(),
      [&](int ei) {
        const Edge& e = mesh.edge(ei);
        const EdgeQuad quad = edge_quad(mesh, e, *plan.edge[ei]);
        EdgeLocal& local = locals[ei];
        const EdgeTraces plus = edge_traces(bases[e.plus], quad, e.normal);

        if (!e.boundary()) {
          const EdgeTraces minus = edge_traces(bases[e.minus], quad, e.normal);
          const EdgeTraces* sides[2] = {&plus, &minus};
          const double signs[2] = {1.0, -1.0};
          Eigen::MatrixXcd B[2][2];
          for (int S = 0; S < 2; ++S)
            for (int T = 0; T < 2; ++T) {
              B[S][T] = Eigen::MatrixXcd::Zero(p, p);
              std::vector<EdgeTerm> terms;
              if (kind == AssembleKind::Form) {
                terms = interior_terms(options.variant, signs[S], signs[T], params, kappa);
              } else {
                terms.push_back({kDn, kDn, Complex(params.beta / kappa * signs[S] * signs[T])});
                terms.push_back(
                    {kValue, kValue, Complex(kappa * params.alpha * signs[S] * signs[T])});
              }
              apply_terms(B[S][T], terms, *sides[S], *sides[T], quad.weights);
            }
          local.diag_plus = std::move(B[0][0]);
          local.diag_minus = std::move(B[1][1]);
          system.block(e.plus, e.minus) = std::move(B[0][1]);
          system.block(e.minus, e.plus) = std::move(B[1][0]);
          return;
        }

        Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(p, p);
        std::vector<EdgeTerm> terms;
        if (kind == AssembleKind::Form) {
          terms = e.kind == EdgeKind::Robin ? robin_terms(options.variant, params, kappa)
                                            : dirichlet_terms(options.variant, params, kappa);
        } else if (e.kind == EdgeKind::Robin) {
          terms.push_back({kDn, kDn, Complex(params.delta / kappa)});
          terms.push_back({kValue, kValue, Complex(kappa * (1.0 - params.delta))});
        } else {
          terms.push_back({kValue, kValue, Complex(kappa * params.alpha)});
        }
        apply_terms(B, terms, plus, plus, quad.weights);
        local.diag_plus = std::move(B);

        if (kind == AssembleKind::Form) {
          local.rhs_plus = Eigen::VectorXcd::Zero(p);
          const int m = static_cast<int>(quad.points.size());
          if (e.kind == EdgeKind::Robin && robin_data && *robin_data) {
            // data functional for du/dn + ik u = ik g: the ik factor keeps
            // B(u, v) = F(v) consistent with that scaling of g
            for (int n = 0; n < m; ++n) {
              const Complex g = (*robin_data)(quad.points[n], e.normal);
              for (int i = 0; i < p; ++i)
                local.rhs_plus[i] +=
                    quad.weights[n] * g *
                    (-params.delta * std::conj(plus.dn(i, n)) +
                     kI * kappa * (1.0 - params.delta) * std::conj(plus.value(i, n)));
            }
          } else if (e.kind == EdgeKind::Dirichlet && dirichlet_data && *dirichlet_data) {
            for (int n = 0; n < m; ++n) {
              const Complex g = (*dirichlet_data)(quad.points[n]);
              for (int i = 0; i < p; ++i)
                local.rhs_plus[i] +=
                    quad.weights[n] * g *
                    (kI * kappa * params.alpha * std::conj(plus.value(i, n)) -
                     std::conj(plus.dn(i, n)));
            }
          }
        }
      },
      options.threads);

  parallel_for(
      mesh.num_elements(),
      [&](int k) {
        const VolumeQuad quad = volume_quad(mesh, k, *plan.volume[k]);
        const VolumeEvals ev = volume_evals(bases[k], quad, field, kappa);
        Eigen::MatrixXcd& B = system.block(k, k);
        const double gamma_k = params.gamma(mesh.diameter(k));

        if (kind == AssembleKind::Form) {
          switch (options.variant) {
            case FormVariant::Primal: {
              accumulate(B, Complex(1.0), ev.gx, ev.gx, quad.weights);
              accumulate(B, Complex(1.0), ev.gy, ev.gy, quad.weights);
              const Eigen::VectorXd we = quad.weights.cwiseProduct(ev.eps);
              accumulate(B, Complex(-k2), ev.value, ev.value, we);
              break;
            }
            case FormVariant::AdjointIbp:
              accumulate(B, Complex(-1.0), ev.residual, ev.value, quad.weights);
              break;
            case FormVariant::PrimalIbp:
              accumulate(B, Complex(-1.0), ev.value, ev.residual, quad.weights);
              break;
          }
          if (gamma_k != 0.0)
            accumulate(B, kI * gamma_k / k2, ev.residual, ev.residual, quad.weights);
        } else {
          if (gamma_k != 0.0)
            accumulate(B, Complex(gamma_k / k2), ev.residual, ev.residual, quad.weights);
        }

        // Merge this element's edge contributions in a fixed order so the
        // result is independent of the worker count.
        for (const int ei : mesh.element_edges(k)) {
          const Edge& e = mesh.edge(ei);
          const EdgeLocal& local = locals[ei];
          if (e.plus == k) {
            B += local.diag_plus;
            if (local.rhs_plus.size() > 0)
              system.rhs().segment(system.dof(k, 0), p) += local.rhs_plus;
          } else {
            B += local.diag_minus;
          }
        }
      },
      options.threads);

  for (const auto& [key, b] : system.blocks())
    if (!b.allFinite())
      throw AssemblyOverflow("non-finite entries in block (" + std::to_string(key.first) + ", " +
                             std::to_string(key.second) + "): basis values exceed double range");
  if (!system.rhs().allFinite()) throw AssemblyOverflow("non-finite right-hand side");
  return system;
}

}  // namespace

BlockSystem assemble_system(const Mesh& mesh, std::span<const GpwBasisSet> bases,
                            const CoefficientField& field, double kappa,
                            const DgParameters& params, const RobinData& robin_data,
                            const AssemblyOptions& options, const DirichletData& dirichlet_data) {
  return assemble_impl(mesh, bases, field, kappa, params, options, AssembleKind::Form,
                       &robin_data, &dirichlet_data);
}

BlockSystem assemble_alternative(const Mesh& mesh, std::span<const GpwBasisSet> bases,
                                 const CoefficientField& field, double kappa,
                                 const DgParameters& params, const RobinData& robin_data,
                                 FormVariant variant, const AssemblyOptions& options) {
  AssemblyOptions o = options;
  o.variant = variant;
  return assemble_system(mesh, bases, field, kappa, params, robin_data, o);
}

BlockSystem assemble_dg_gram(const Mesh& mesh, std::span<const GpwBasisSet> bases,
                             const CoefficientField& field, double kappa,
                             const DgParameters& params, const AssemblyOptions& options) {
  return assemble_impl(mesh, bases, field, kappa, params, options, AssembleKind::Gram, nullptr,
                       nullptr);
}

std::vector<int> volume_quadrature_degrees(const Mesh& mesh, std::span<const GpwBasisSet> bases,
                                           double kappa, int q, const AssemblyOptions& o) {
  const std::vector<double> phase = phase_bounds(mesh, bases);
  std::vector<int> degree(mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    // resolve the kappa*h oscillation with margin, and 4x the phase bound for
    // products of basis functions (Gauss degree ~ 0.64x the phase variation)
    const int phase_degree =
        std::min(static_cast<int>(std::ceil(2.6 * phase[k])) + 10, kPhaseDegreeCap);
    const int d = o.triangle_degree_override > 0
                      ? o.triangle_degree_override
                      : std::max({default_triangle_degree(kappa, mesh.diameter(k), q),
                                  static_cast<int>(std::ceil(1.7 * kappa * mesh.diameter(k))) + 10,
                                  phase_degree});
    degree[k] = std::max(1, static_cast<int>(std::ceil(d * o.quad_scale)));
  }
  return degree;
}

ElementFunction discrete_function(std::span<const GpwBasisSet> bases,
                                  const Eigen::VectorXcd& coefficients) {
  const int p = bases.empty() ? 0 : bases[0].size();
  if (static_cast<int>(bases.size()) * p != coefficients.size())
    throw std::invalid_argument("coefficient vector does not match the basis");
  std::vector<const GpwBasisSet*> ptrs;
  ptrs.reserve(bases.size());
  for (const auto& b : bases) ptrs.push_back(&b);
  return [ptrs, p, coefficients](int element, Point pt) {
    const GpwBasisSet& basis = *ptrs[element];
    WaveSample out;
    for (int l = 0; l < p; ++l) {
      const Complex c = coefficients[element * p + l];
      if (c == Complex(0.0, 0.0)) continue;
      const WaveSample s = basis.function(l).evaluate(pt);
      out.value += c * s.value;
      out.gradient[0] += c * s.gradient[0];
      out.gradient[1] += c * s.gradient[1];
      out.laplacian += c * s.laplacian;
    }
    return out;
  };
}

double DgPlusTerms::dg_squared() const {
  return jump_normal_deriv + jump_value + robin_normal_deriv + robin_value + dirichlet_value +
         volume_residual;
}

double DgPlusTerms::dg_plus_squared() const {
  if (!volume_value.has_value())
    throw std::logic_error("gamma = 0: the gamma^(-1/2) volume term of the DG+ norm is undefined");
  return dg_squared() + avg_value + avg_gradient + robin_value_weighted + dirichlet_normal_deriv +
         *volume_value;
}

DgPlusTerms dg_plus_seminorm_terms(const Mesh& mesh, const ElementFunction& u,
                                   const CoefficientField& field, double kappa,
                                   const DgParameters& params, int basis_order,
                                   const AssemblyOptions& options,
                                   std::span<const GpwBasisSet> bases) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  params.validate();
  const QuadPlan plan = make_quad_plan(mesh, bases, kappa, basis_order, options);
  const double k2 = kappa * kappa;
  DgPlusTerms terms;
  if (params.gamma0 > 0.0) terms.volume_value = 0.0;

  for (int ei = 0; ei < mesh.num_edges(); ++ei) {
    const Edge& e = mesh.edge(ei);
    const EdgeQuad quad = edge_quad(mesh, e, *plan.edge[ei]);
    for (size_t n = 0; n < quad.points.size(); ++n) {
      const double w = quad.weights[n];
      const WaveSample sp = u(e.plus, quad.points[n]);
      const Complex dnp = sp.gradient[0] * e.normal[0] + sp.gradient[1] * e.normal[1];
      if (e.boundary()) {
        if (e.kind == EdgeKind::Robin) {
          terms.robin_normal_deriv += w * params.delta / kappa * std::norm(dnp);
          terms.robin_value += w * kappa * (1.0 - params.delta) * std::norm(sp.value);
          terms.robin_value_weighted += w * kappa / params.delta * std::norm(sp.value);
        } else {
          terms.dirichlet_value += w * kappa * params.alpha * std::norm(sp.value);
          terms.dirichlet_normal_deriv +=
              w / (kappa * params.alpha * params.alpha) * std::norm(dnp);
        }
        continue;
      }
      const WaveSample sm = u(e.minus, quad.points[n]);
      const Complex dnm = sm.gradient[0] * e.normal[0] + sm.gradient[1] * e.normal[1];
      terms.jump_normal_deriv += w * params.beta / kappa * std::norm(dnp - dnm);
      terms.jump_value += w * kappa * params.alpha * std::norm(sp.value - sm.value);
      terms.avg_value += w * kappa / params.beta * std::norm(0.5 * (sp.value + sm.value));
      terms.avg_gradient += w / (kappa * params.alpha) *
                            (std::norm(0.5 * (sp.gradient[0] + sm.gradient[0])) +
                             std::norm(0.5 * (sp.gradient[1] + sm.gradient[1])));
    }
  }

  for (int k = 0; k < mesh.num_elements(); ++k) {
    const VolumeQuad quad = volume_quad(mesh, k, *plan.volume[k]);
    const double gamma_k = params.gamma(mesh.diameter(k));
    for (size_t n = 0; n < quad.points.size(); ++n) {
      const double w = quad.weights[n];
      const WaveSample s = u(k, quad.points[n]);
      const double eps = field.value(quad.points[n].x, quad.points[n].y);
      terms.volume_residual +=
          w * gamma_k / k2 * std::norm(s.laplacian + k2 * eps * s.value);
      if (terms.volume_value) *terms.volume_value += w * k2 / gamma_k * std::norm(s.value);
    }
  }
  return terms;
}

}  // namespace gpwtdg
