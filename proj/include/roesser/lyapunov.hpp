#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "roesser/linalg.hpp"
#include "roesser/model.hpp"
#include "roesser/sdp.hpp"
#include "roesser/transfer.hpp"

namespace roesser {

/// Basis of the Lyapunov polynomial: delta^i or (delta / (1 + delta))^i.
enum class Basis { Monomial, Moebius };
std::string_view to_string(Basis b) noexcept;

/// b_i(delta) for a finite delta.
Complex basis_value(Basis basis, Complex delta, std::size_t power);

/// P(delta) = herm_part(sum_i P_i b_i(delta)), coefficients P_0 ... P_nu.
struct PolynomialLyapunov {
  std::vector<CMatrix> coeffs;
  Basis basis = Basis::Monomial;

  std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  /// At infinity the Moebius basis tends to 1; the monomial form is only
  /// defined there when every P_i with i >= 1 vanishes.
  CMatrix evaluate(const ExtendedPoint& delta) const;
};

/// Q(delta) = sum_{k<=eta, l<=gamma} Q_kl delta^k conj(delta)^l.
struct BilateralPolynomial {
  std::size_t eta = 0;
  std::size_t gamma = 0;
  std::vector<CMatrix> coeffs;  // (eta+1) x (gamma+1), row-major in k

  BilateralPolynomial(std::size_t eta, std::size_t gamma, std::size_t dim);
  CMatrix& at(std::size_t k, std::size_t l) { return coeffs[k * (gamma + 1) + l]; }
  const CMatrix& at(std::size_t k, std::size_t l) const { return coeffs[k * (gamma + 1) + l]; }
  CMatrix evaluate(Complex delta) const;
};

/// Coefficients (r00, r10, r11) of one region.
struct SteinCoefficients {
  double r00 = 0.0;
  double r10 = 0.0;
  double r11 = 0.0;

  static SteinCoefficients from(const RegionDescriptor& r) noexcept { return {r.r00, r.r10, r.r11}; }
};

/// r00 P + r10 (M* P + P M) + r11 M* P M.
CMatrix stein_form(const SteinCoefficients& c, const CMatrix& m, const CMatrix& p);

/// Stein/Lyapunov form of A22 with the coefficients of region 2.
CMatrix stein_a22(const RoesserModel& m, const CMatrix& y);

/// Stein/Lyapunov form of M(delta) with P(delta) and the coefficients of
/// region 1. Throws PoleHit.
CMatrix stein_m(const RoesserModel& m, const PolynomialLyapunov& p, const ExtendedPoint& delta);

/// Monomial reduction on the boundary of D2: delta conj(delta) = 1 for Shift,
/// conj(delta) = -delta for Derivative. Returns P_0 ... P_nu with
/// herm_part(sum P_i delta^i) == herm_part(Q(delta)) on the boundary.
std::vector<CMatrix> reduce_bilateral(const BilateralPolynomial& q, DimensionKind kind2);

/// [Re H, -Im H; Im H, Re H] as a dense row-major real matrix.
std::vector<double> real_embedding(const CMatrix& h);

/// Decision-variable layout of the Lyapunov LMIs: Y (Hermitian k2 x k2),
/// then P_0 (Hermitian), then P_1 ... P_nu (general complex).
class LyapunovLayout {
 public:
  LyapunovLayout(std::size_t k1, std::size_t k2, std::size_t degree, Basis basis);

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t y_vars() const noexcept { return k2_ * k2_; }
  std::size_t degree() const noexcept { return degree_; }
  Basis basis() const noexcept { return basis_; }
  std::vector<std::string> var_names() const;

  /// Unit matrices: contribution of variable j to Y (j < y_vars()) or to the
  /// coefficient P_power.
  CMatrix y_unit(std::size_t j) const;
  std::pair<std::size_t, CMatrix> p_unit(std::size_t j) const;

  CMatrix unpack_y(std::span<const double> x) const;
  PolynomialLyapunov unpack_p(std::span<const double> x) const;

  /// Zero-pads a solution of this layout to the layout of degree + extra.
  std::vector<double> pad(std::span<const double> x, std::size_t extra) const;

 private:
  std::size_t k1_, k2_, degree_;
  Basis basis_;
  std::size_t num_vars_;
};

/// eps = 1e-6 * (1 + max block norm)
double default_eps(const RoesserModel& m);

/// Sampled LMI system: Y >= eps, -stein_a22(Y) >= eps, and at every sample
/// P(delta) >= eps, -stein_m(delta) >= eps; complex Hermitian blocks enter
/// through their real embedding (directly when all their data are real).
/// A last scalar block 1 - tr Y - mean tr P(delta_s) fixes the scale of the
/// otherwise homogeneous system. Monomial bases skip the infinity sample.
/// Throws PoleHit at a sample, InvalidArgument for a Moebius basis with a
/// shift second dimension.
LmiProblem assemble_lmi(const RoesserModel& m, std::size_t degree, Basis basis,
                        std::span<const BoundaryPoint> samples, double eps);

}  // namespace roesser
