#pragma once

#include <span>
#include <vector>

#include "roesser/linalg.hpp"
#include "roesser/model.hpp"

namespace roesser {

/// A sample of a stability-region boundary together with the sweep parameter
/// (angle in radians) that produced it.
struct BoundaryPoint {
  ExtendedPoint point;
  double source_angle = 0.0;

  static BoundaryPoint at(Complex z, double angle = 0.0) { return {ExtendedPoint::finite(z), angle}; }
  static BoundaryPoint infinity(double angle = 0.0) { return {ExtendedPoint::infinity(), angle}; }
};

/// M(delta) = A11 + A12 (I - delta A22)^-1 delta A21; at infinity the limit
/// A11 - A12 A22^-1 A21. Throws PoleHit if the inner matrix is singular.
CMatrix m_delta(const RoesserModel& m, const ExtendedPoint& delta);
inline CMatrix m_delta(const RoesserModel& m, const BoundaryPoint& delta) {
  return m_delta(m, delta.point);
}

/// Evaluates D_M + C_M (I - Delta A_M)^-1 Delta B_M with Delta the block
/// diagonal of delta_i I. Coordinates at infinity impose the limiting
/// algebraic constraint on their state block.
class LftEvaluator {
 public:
  explicit LftEvaluator(const NdRoesserModel& m);

  CMatrix operator()(std::span<const ExtendedPoint> deltas) const;
  std::size_t parameter_count() const noexcept { return sizes_.size(); }

 private:
  LftPartition part_;
  std::vector<std::size_t> sizes_;  // k_2 ... k_n
};

CMatrix nd_m_delta(const NdRoesserModel& m, std::span<const BoundaryPoint> deltas);

/// Boundary samples of the stability region of the given kind.
/// Shift: delta_k = exp(i 2 pi k / N). Derivative: delta = i tan(phi_k) with
/// phi_k = -pi/2 + pi k / N for k = 1..N-1, plus the infinity sample.
std::vector<BoundaryPoint> boundary_samples(DimensionKind kind, std::size_t n,
                                            bool include_infinity = true);

}  // namespace roesser
