#include "roesser/transfer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "roesser/errors.hpp"

namespace roesser {

CMatrix m_delta(const RoesserModel& m, const ExtendedPoint& delta) {
  const std::size_t k2 = m.k2();
  try {
    if (delta.infinite) {
      const CMatrix x = solve(m.a22(), m.a21());
      return m.a11() - m.a12() * x;
    }
    CMatrix inner = CMatrix::identity(k2) - delta.value * m.a22();
    const CMatrix x = solve(inner, delta.value * m.a21());
    return m.a11() + m.a12() * x;
  } catch (const SingularMatrix& e) {
    if (delta.infinite) throw PoleHit("M(delta) at infinity: A22 is singular");
    throw PoleHit("M(delta): I - delta*A22 is singular at delta = (" +
                  std::to_string(delta.value.real()) + ", " + std::to_string(delta.value.imag()) +
                  ")");
  }
}

LftEvaluator::LftEvaluator(const NdRoesserModel& m) : part_(nd_partition(m)) {
  for (std::size_t i = 1; i < m.n(); ++i) sizes_.push_back(m.block_size(i));
}

CMatrix LftEvaluator::operator()(std::span<const ExtendedPoint> deltas) const {
  if (deltas.size() != sizes_.size()) {
    throw DimensionMismatch("nd_m_delta: expected " + std::to_string(sizes_.size()) +
                            " parameters, got " + std::to_string(deltas.size()));
  }
  const std::size_t rest = part_.a.rows();
  const std::size_t k1 = part_.d.rows();
  // Row block i: x_i - delta_i (A_i. w + B_i x1) = 0, or A_i. w + B_i x1 = 0 at infinity.
  CMatrix e(rest, rest);
  CMatrix f(rest, k1);
  std::size_t r0 = 0;
  for (std::size_t blk = 0; blk < sizes_.size(); ++blk) {
    const ExtendedPoint& d = deltas[blk];
    for (std::size_t a = r0; a < r0 + sizes_[blk]; ++a) {
      if (d.infinite) {
        for (std::size_t c = 0; c < rest; ++c) e(a, c) = part_.a(a, c);
        for (std::size_t c = 0; c < k1; ++c) f(a, c) = -part_.b(a, c);
      } else {
        for (std::size_t c = 0; c < rest; ++c) e(a, c) = -d.value * part_.a(a, c);
        e(a, a) += 1.0;
        for (std::size_t c = 0; c < k1; ++c) f(a, c) = d.value * part_.b(a, c);
      }
    }
    r0 += sizes_[blk];
  }
  try {
    const CMatrix w = solve(e, f);
    return part_.d + part_.c * w;
  } catch (const SingularMatrix&) {
    throw PoleHit("nd_m_delta: LFT is not well-posed at the requested point");
  }
}

CMatrix nd_m_delta(const NdRoesserModel& m, std::span<const BoundaryPoint> deltas) {
  std::vector<ExtendedPoint> pts;
  pts.reserve(deltas.size());
  for (const auto& d : deltas) pts.push_back(d.point);
  return LftEvaluator(m)(pts);
}

std::vector<BoundaryPoint> boundary_samples(DimensionKind kind, std::size_t n,
                                            bool include_infinity) {
  std::vector<BoundaryPoint> pts;
  pts.reserve(n);
  const double pi = std::numbers::pi;
  if (kind == DimensionKind::Shift) {
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = 2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
      pts.push_back(BoundaryPoint::at(std::polar(1.0, theta), theta));
    }
    return pts;
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double phi = -0.5 * pi + pi * static_cast<double>(k) / static_cast<double>(n);
    // tan is exactly zero at the midpoint only if we special-case it.
    const double w = (2 * k == n) ? 0.0 : std::tan(phi);
    pts.push_back(BoundaryPoint::at(Complex{0.0, w}, phi));
  }
  if (include_infinity) pts.push_back(BoundaryPoint::infinity(0.5 * pi));
  return pts;
}

}  // namespace roesser
