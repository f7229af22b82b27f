#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gpwtdg/analytic.hpp"
#include "gpwtdg/assembly.hpp"
#include "gpwtdg/solver.hpp"

namespace gpwtdg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ProblemKind { Airy, Weber, Constant };
enum class BoundaryMode { Robin, Dirichlet };

struct RunConfig {
  ProblemKind problem = ProblemKind::Airy;
  double kappa = 15.0;
  double weber_a = 5.0;  // Weber only
  double theta = 0.0;    // plane-wave direction, Constant only
  int n = 2;
  int q = 3;
  double gamma0 = 1.0;
  double gamma_exponent = 3.0;
  int levels = 5;
  int quad_order = 0;          // overrides edge points; triangle degree = 2x
  std::string mesh_file;       // optional initial mesh; else structured
  int initial_cells = 2;       // m x m crisscross of [-1,1]^2
  BoundaryMode boundary = BoundaryMode::Robin;
  std::string label;

  void validate() const;
  ExactSolution exact() const;
  DgParameters dg_parameters() const;
};

struct ConvergenceRecord {
  int level = 0;
  double h = 0.0;
  int ndof = 0;
  double c_over_h = 0.0;  // sqrt(ndof / p)
  double rel_l2 = 0.0;
  double dg_error = 0.0;
  double condition = 0.0;
  double assemble_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRecord> records;
  double fitted_rate = 0.0;  // NaN when fewer than two usable levels
  bool solver_failed = false;
  std::string failure;
  /// Levels whose assembly overflowed double range (coarse mesh at large
  /// kappa); they carry no record and the sweep continues.
  std::vector<std::pair<int, std::string>> skipped_levels;
};

/// Runs the refinement sweep: per level build mesh + bases, assemble, solve,
/// measure errors. A solver failure stops the sweep and returns the partial
/// records; an assembly overflow skips just that level. The fitted rate is
/// the least-squares slope of log error vs log h over the last max(3,
/// levels-1) levels, skipping levels whose condition estimate exceeds 1e14.
ConvergenceStudy run_convergence(const RunConfig& config);

struct L2Error {
  double abs = 0.0;
  double rel = 0.0;
};

/// Element-wise quadrature of |u_h - u|^2 and |u|^2; the rule is two degrees
/// above the assembly default.
L2Error compute_l2_error(const Mesh& mesh, const Eigen::VectorXcd& coefficients,
                         std::span<const GpwBasisSet> bases, const ExactSolution& exact,
                         int quad_degree_override = 0);

/// DG norm of u_h - u evaluated with exact traces; the volume residual term
/// uses u_h alone (the exact solution satisfies the equation).
double compute_dg_error(const Mesh& mesh, const Eigen::VectorXcd& coefficients,
                        std::span<const GpwBasisSet> bases, const ExactSolution& exact,
                        const DgParameters& params, const AssemblyOptions& options = {});

double fit_rate(const std::vector<ConvergenceRecord>& records);

/// CSV columns: level,h,ndof,c_over_h,rel_l2,dg_err,cond,assemble_s,solve_s.
/// Numbers are shortest round-trip representations; in deterministic mode the
/// timing columns are written as 0 so repeated runs are byte-identical.
void write_csv(const std::vector<ConvergenceRecord>& records, std::ostream& out);
std::vector<ConvergenceRecord> read_csv(std::istream& in);

/// Writes <label>.csv per config and a combined <name>.svg under out_dir.
void emit_outputs(const std::vector<std::pair<RunConfig, ConvergenceStudy>>& results,
                  const std::string& out_dir, const std::string& name);

/// Named presets: airy-gh3, airy-gh1, airy-g0, weber-gh3 (parameter grids of
/// the convergence experiments) and airy-small (single fast config).
std::vector<RunConfig> preset_sweep(const std::string& name);

}  // namespace gpwtdg
