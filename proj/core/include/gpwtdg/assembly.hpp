#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gpwtdg/coefficient.hpp"
#include "gpwtdg/geometry.hpp"
#include "gpwtdg/gpw.hpp"

namespace gpwtdg {

/// Penalty parameters on the mesh skeleton. alpha, beta, delta default to the
/// classical UWVF choice 1/2; the volume stabilization weight is
/// gamma = gamma0 * h_K^r per element.
struct DgParameters {
  double alpha = 0.5;
  double beta = 0.5;
  double delta = 0.5;
  double gamma0 = 0.0;
  double gamma_exponent = 0.0;  // r

  double gamma(double h_K) const;
  void validate() const;
};

enum class FormVariant {
  Primal,      // volume grad-grad form
  AdjointIbp,  // grad-grad integrated by parts onto the test function
  PrimalIbp,   // grad-grad integrated by parts onto the trial function
};

struct AssemblyOptions {
  FormVariant variant = FormVariant::Primal;
  int edge_points_override = 0;      // 0: max(10, 2(q+2), ceil(kappa h)+6)
  int triangle_degree_override = 0;  // 0: same formula as a degree
  double quad_scale = 1.0;           // >1 elevates all default orders
  int threads = 0;                   // 0: hardware / GPWTDG_THREADS
};

/// Complex block-sparse matrix with p x p blocks keyed by (element, element)
/// plus the right-hand side. Blocks exist only for an element and its edge
/// neighbors. Global dof of (element k, direction l) is k*p + l.
class BlockSystem {
 public:
  BlockSystem(int num_elements, int block_size);

  int num_elements() const { return num_elements_; }
  int block_size() const { return block_size_; }
  int dimension() const { return num_elements_ * block_size_; }
  int dof(int element, int l) const { return element * block_size_ + l; }

  /// Inserts a zero block; must be called before parallel fills.
  Eigen::MatrixXcd& add_block(int row_element, int col_element);
  Eigen::MatrixXcd& block(int row_element, int col_element);
  const Eigen::MatrixXcd* find_block(int row_element, int col_element) const;
  const std::map<std::pair<int, int>, Eigen::MatrixXcd>& blocks() const { return blocks_; }

  Eigen::VectorXcd& rhs() { return rhs_; }
  const Eigen::VectorXcd& rhs() const { return rhs_; }

  Eigen::SparseMatrix<Complex> to_sparse() const;

  /// Coordinate text dump "row col re im" and the (element, direction) ->
  /// global index sidecar.
  void dump_matrix(std::ostream& out) const;
  void dump_dof_map(std::ostream& out) const;

 private:
  int num_elements_;
  int block_size_;
  std::map<std::pair<int, int>, Eigen::MatrixXcd> blocks_;
  Eigen::VectorXcd rhs_;
};

using RobinData = std::function<Complex(Point, Vec2 outward_normal)>;
using DirichletData = std::function<Complex(Point)>;

/// Raised when assembled entries are not finite: on coarse elements at large
/// kappa the basis exponentials can exceed the double range.
class AssemblyOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Assembles the stabilized sesquilinear form including the volume penalty
/// (i/kappa^2) gamma (lap u + kappa^2 eps u) conj(lap v + kappa^2 eps v), with
/// matrix entries M[(K,i),(K',j)] = B(phi_{K',j}, phi_{K,i}) (test conjugated)
/// and rhs F(phi_{K,i}). The dirichlet_data extension adds the inhomogeneous
/// Dirichlet terms to the rhs.
BlockSystem assemble_system(const Mesh& mesh, std::span<const GpwBasisSet> bases,
                            const CoefficientField& field, double kappa,
                            const DgParameters& params, const RobinData& robin_data,
                            const AssemblyOptions& options = {},
                            const DirichletData& dirichlet_data = nullptr);

/// Same form through one of the integration-by-parts routes; mathematically
/// identical to the primal assembly, used as a cross-check.
BlockSystem assemble_alternative(const Mesh& mesh, std::span<const GpwBasisSet> bases,
                                 const CoefficientField& field, double kappa,
                                 const DgParameters& params, const RobinData& robin_data,
                                 FormVariant variant, const AssemblyOptions& options = {});

/// Gram matrix of the mesh-dependent DG norm: x^* G x = ||u_x||_DG^2.
/// Hermitian positive semidefinite by construction.
BlockSystem assemble_dg_gram(const Mesh& mesh, std::span<const GpwBasisSet> bases,
                             const CoefficientField& field, double kappa,
                             const DgParameters& params, const AssemblyOptions& options = {});

/// Piecewise function view used by norm evaluation: sample on a given element
/// (points on edges are evaluated from both sides).
using ElementFunction = std::function<WaveSample(int element, Point)>;

ElementFunction discrete_function(std::span<const GpwBasisSet> bases,
                                  const Eigen::VectorXcd& coefficients);

/// Squared terms of the DG and DG+ norms. volume_value (the gamma^{-1/2}
/// term) is absent when gamma == 0.
struct DgPlusTerms {
  double jump_normal_deriv = 0.0;     // 1/k ||beta^(1/2) [dn u]||^2,    E_I
  double jump_value = 0.0;            // k ||alpha^(1/2) [u]||^2,        E_I
  double robin_normal_deriv = 0.0;    // 1/k ||delta^(1/2) dn u||^2,     E_R
  double robin_value = 0.0;           // k ||(1-delta)^(1/2) u||^2,      E_R
  double dirichlet_value = 0.0;       // k ||alpha^(1/2) u||^2,          E_D
  double volume_residual = 0.0;       // 1/k^2 ||gamma^(1/2) L u||^2
  double avg_value = 0.0;             // k ||beta^(-1/2) {u}||^2,        E_I
  double avg_gradient = 0.0;          // 1/k ||alpha^(-1/2) {grad u}||^2, E_I
  double robin_value_weighted = 0.0;  // k ||delta^(-1/2) u||^2,         E_R
  double dirichlet_normal_deriv = 0.0;  // 1/k ||alpha^(-1) dn u||^2,    E_D
  std::optional<double> volume_value;   // k^2 ||gamma^(-1/2) u||^2

  double dg_squared() const;
  /// Throws when the gamma^{-1/2} term is requested but gamma == 0.
  double dg_plus_squared() const;
};

DgPlusTerms dg_plus_seminorm_terms(const Mesh& mesh, const ElementFunction& u,
                                   const CoefficientField& field, double kappa,
                                   const DgParameters& params, int basis_order,
                                   const AssemblyOptions& options = {},
                                   std::span<const GpwBasisSet> bases = {});

/// Per-element volume quadrature degrees the assembler would pick (the
/// kappa*h floor plus the basis phase bound). Error quadrature builds on it.
std::vector<int> volume_quadrature_degrees(const Mesh& mesh, std::span<const GpwBasisSet> bases,
                                           double kappa, int q,
                                           const AssemblyOptions& options = {});

}  // namespace gpwtdg
