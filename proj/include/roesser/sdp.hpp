#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace roesser {

/// One affine symmetric block x -> F0 + sum_j x_j F_j. Matrices are dense
/// row-major dim x dim; only variables with a nonzero coefficient are stored.
struct LmiBlock {
  std::size_t dim = 0;
  std::vector<double> constant;
  std::vector<std::size_t> vars;
  std::vector<std::vector<double>> coeffs;
  std::string label;

  void add_term(std::size_t var, std::vector<double> coeff);
  /// F0 + sum_j x_j F_j
  std::vector<double> evaluate(std::span<const double> x) const;
};

/// Maximize t subject to F_b(x) - t I >= 0 for every block, ||x|| <= x_radius.
struct LmiProblem {
  std::size_t num_vars = 0;
  std::vector<LmiBlock> blocks;
  std::vector<std::string> var_names;
  /// Euclidean bound on x. Homogeneous problems are unbounded without it.
  double x_radius = 1e6;

  /// Throws InvalidArgument on malformed data or asymmetric coefficients.
  void validate() const;
};

enum class SdpStatus { Feasible, Infeasible, Indeterminate };
std::string_view to_string(SdpStatus s) noexcept;

struct SdpOptions {
  double feas_tol = 1e-8;
  /// Stop when (upper bound - t) <= max(gap_tol, rel_gap_tol * |t|).
  double gap_tol = 1e-9;
  double rel_gap_tol = 1e-9;
  std::size_t max_iterations = 500;
  double path_factor = 0.2;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::Indeterminate;
  std::vector<double> x;
  double margin = 0.0;
  /// Certified upper bound on the optimal margin from the barrier dual point.
  double upper_bound = 0.0;
  std::size_t iterations = 0;
  bool verified = false;
  std::string diagnostic;
};

/// Log-det barrier path-following method on the margin problem.
SdpSolution solve_margin(const LmiProblem& p, const SdpOptions& opts = {});

/// Independent re-check: every F_b(x) - (t - slack) I is positive definite,
/// slack = 1e-12 * (1 + |t|).
bool verify_solution(const LmiProblem& p, std::span<const double> x, double t);

/// Smallest eigenvalue over all blocks of F_b(x).
double min_block_eigenvalue(const LmiProblem& p, std::span<const double> x);

/// Sparse text dump: '#' header lines, then "block var row col value" per
/// upper-triangular nonzero, var 0 being the constant term and var j >= 1
/// the coefficient of x_j.
void write_problem(const LmiProblem& p, std::ostream& out);
LmiProblem read_problem(std::istream& in);

}  // namespace roesser
