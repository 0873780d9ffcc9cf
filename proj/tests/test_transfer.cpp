#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "roesser/errors.hpp"
#include "roesser/transfer.hpp"
#include "support.hpp"

using namespace roesser;
using namespace testing_support;

TEST(Transfer, AtZeroIsA11) {
  std::mt19937_64 rng(21);
  const RoesserModel m(random_real(rng, 2, 2), random_real(rng, 2, 3), random_real(rng, 3, 2),
                       random_real(rng, 3, 3), DimensionKind::Shift, DimensionKind::Shift);
  EXPECT_EQ(m_delta(m, BoundaryPoint::at(0.0)), m.a11());
}

TEST(Transfer, ScalarS1AtOne) {
  const RoesserModel s1 = scalar_model(0.5, 0.3, 0.3, 0.5);
  const Complex v = m_delta(s1, BoundaryPoint::at(1.0))(0, 0);
  // independent rational evaluation a + b c z / (1 - d z)
  const Complex z = 1.0;
  EXPECT_NEAR(std::abs(v - (0.5 + 0.09 * z / (1.0 - 0.5 * z))), 0.0, 1e-15);
  EXPECT_NEAR(v.real(), 0.68, 1e-15);
}

TEST(Transfer, PoleHit) {
  const RoesserModel m = scalar_model(0.5, 0.3, 0.3, 0.5);
  EXPECT_THROW(m_delta(m, BoundaryPoint::at(2.0)), PoleHit);
  const RoesserModel sing = scalar_model(0.5, 0.3, 0.3, 0.0, DimensionKind::Shift, DimensionKind::Derivative);
  EXPECT_THROW(m_delta(sing, BoundaryPoint::infinity()), PoleHit);
}

TEST(Transfer, InfinityLimit) {
  std::mt19937_64 rng(22);
  const RoesserModel m(random_real(rng, 2, 2), random_real(rng, 2, 2), random_real(rng, 2, 2),
                       random_real(rng, 2, 2), DimensionKind::Derivative, DimensionKind::Derivative);
  const CMatrix inf = m_delta(m, BoundaryPoint::infinity());
  const CMatrix far = m_delta(m, BoundaryPoint::at(Complex(0.0, 1e8)));
  EXPECT_LT(max_abs_diff(inf, far), 1e-6);
  EXPECT_LT(max_abs_diff(inf, m.a11() - m.a12() * solve(m.a22(), m.a21())), 1e-14);
}

TEST(Transfer, ConjugateSymmetry) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> th(0.0, 2.0 * std::numbers::pi);
  const RoesserModel m(random_real(rng, 3, 3), random_real(rng, 3, 2), random_real(rng, 2, 3),
                       random_real(rng, 2, 2, 0.4), DimensionKind::Shift, DimensionKind::Shift);
  for (int t = 0; t < 200; ++t) {
    const Complex z = std::polar(1.0, th(rng));
    const CMatrix a = m_delta(m, BoundaryPoint::at(std::conj(z)));
    const CMatrix b = conjugate(m_delta(m, BoundaryPoint::at(z)));
    EXPECT_LT(max_abs_diff(a, b), 1e-12);
  }
}

TEST(Transfer, LipschitzAlongSweep) {
  std::mt19937_64 rng(24);
  const RoesserModel m(random_real(rng, 2, 2), random_real(rng, 2, 2), random_real(rng, 2, 2),
                       random_real(rng, 2, 2, 0.3), DimensionKind::Shift, DimensionKind::Shift);
  // |dM/dz| <= |A12| |A21| / (1 - |A22|)^2 with induced inf-norms
  auto norm_inf = [](const CMatrix& x) {
    double best = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < x.cols(); ++j) s += std::abs(x(i, j));
      best = std::max(best, s);
    }
    return best;
  };
  const double a22 = norm_inf(m.a22());
  ASSERT_LT(a22, 1.0);
  const double lip = norm_inf(m.a12()) * norm_inf(m.a21()) / ((1.0 - a22) * (1.0 - a22));
  const auto pts = boundary_samples(DimensionKind::Shift, 512);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& p = pts[k];
    const auto& q = pts[(k + 1) % pts.size()];
    const double h = std::abs(p.point.value - q.point.value);
    EXPECT_LE(max_abs_diff(m_delta(m, p), m_delta(m, q)), 10.0 * lip * h);
  }
}

TEST(Transfer, BoundarySamples) {
  const auto s = boundary_samples(DimensionKind::Shift, 16);
  ASSERT_EQ(s.size(), 16u);
  for (const auto& p : s) EXPECT_NEAR(std::abs(p.point.value), 1.0, 1e-12);
  EXPECT_EQ(s[0].point.value, Complex(1.0));

  const auto d = boundary_samples(DimensionKind::Derivative, 16);
  ASSERT_EQ(d.size(), 16u);  // 15 finite + infinity
  int infinite = 0;
  for (const auto& p : d) {
    if (p.point.infinite) {
      ++infinite;
    } else {
      EXPECT_EQ(p.point.value.real(), 0.0);
    }
  }
  EXPECT_EQ(infinite, 1);
  EXPECT_EQ(d[7].point.value, Complex(0.0));  // midpoint phi = 0
  EXPECT_EQ(boundary_samples(DimensionKind::Derivative, 16, false).size(), 15u);
}

TEST(Transfer, NdTwoDimsAgreesWithMDelta) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> th(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> w(-20.0, 20.0);
  for (int model = 0; model < 10; ++model) {
    const auto k2 = model % 2 ? DimensionKind::Shift : DimensionKind::Derivative;
    const RoesserModel m(random_real(rng, 2, 2), random_real(rng, 2, 3), random_real(rng, 3, 2),
                         random_real(rng, 3, 3, 0.3), DimensionKind::Shift, k2);
    const NdRoesserModel nd(m);
    for (int t = 0; t < 100; ++t) {
      const BoundaryPoint p = k2 == DimensionKind::Shift ? BoundaryPoint::at(std::polar(1.0, th(rng)))
                                                         : BoundaryPoint::at(Complex(0.0, w(rng)));
      const std::vector<BoundaryPoint> pts{p};
      EXPECT_LT(max_abs_diff(nd_m_delta(nd, pts), m_delta(m, p)), 1e-14);
    }
    if (k2 == DimensionKind::Derivative) {
      const std::vector<BoundaryPoint> pts{BoundaryPoint::infinity()};
      EXPECT_LT(max_abs_diff(nd_m_delta(nd, pts), m_delta(m, BoundaryPoint::infinity())), 1e-12);
    }
  }
}

TEST(Transfer, NdAtZeroIsA11) {
  std::mt19937_64 rng(26);
  std::vector<std::vector<CMatrix>> blocks(3, std::vector<CMatrix>(3));
  const std::size_t sz[] = {2, 1, 2};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) blocks[i][j] = random_real(rng, sz[i], sz[j]);
  const NdRoesserModel m(blocks, std::vector<DimensionKind>(3, DimensionKind::Shift));
  const std::vector<BoundaryPoint> zero{BoundaryPoint::at(0.0), BoundaryPoint::at(0.0)};
  EXPECT_EQ(nd_m_delta(m, zero), blocks[0][0]);
}

// Scalar 3D model: eliminate x2, x3 from
//   x2 = d2 (a21 x1 + a22 x2 + a23 x3),  x3 = d3 (a31 x1 + a32 x2 + a33 x3)
// by Cramer's rule and substitute into a11 x1 + a12 x2 + a13 x3.
TEST(Transfer, NdScalarThreeDimsMatchesCramerElimination) {
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> th(0.0, 2.0 * std::numbers::pi);
  for (int model = 0; model < 20; ++model) {
    double a[3][3];
    std::vector<std::vector<CMatrix>> blocks(3, std::vector<CMatrix>(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        a[i][j] = (i > 0 && j > 0 ? 0.45 : 1.0) * u(rng);
        blocks[i][j] = CMatrix{{a[i][j]}};
      }
    const NdRoesserModel m(blocks, std::vector<DimensionKind>(3, DimensionKind::Shift));
    for (int t = 0; t < 20; ++t) {
      const Complex d2 = std::polar(1.0, th(rng));
      const Complex d3 = std::polar(1.0, th(rng));
      // [1 - d2 a22, -d2 a23; -d3 a32, 1 - d3 a33] [x2; x3] = [d2 a21; d3 a31]
      const Complex m11 = 1.0 - d2 * a[1][1], m12 = -d2 * a[1][2];
      const Complex m21 = -d3 * a[2][1], m22 = 1.0 - d3 * a[2][2];
      const Complex r1 = d2 * a[1][0], r2 = d3 * a[2][0];
      const Complex det = m11 * m22 - m12 * m21;
      const Complex x2 = (r1 * m22 - m12 * r2) / det;
      const Complex x3 = (m11 * r2 - r1 * m21) / det;
      const Complex expect = a[0][0] + a[0][1] * x2 + a[0][2] * x3;
      const std::vector<BoundaryPoint> pts{BoundaryPoint::at(d2), BoundaryPoint::at(d3)};
      EXPECT_LT(std::abs(nd_m_delta(m, pts)(0, 0) - expect), 1e-12);
    }
  }
}

TEST(Transfer, NdWrongPointCount) {
  std::vector<std::vector<CMatrix>> blocks(3, std::vector<CMatrix>(3, CMatrix{{0.1}}));
  const NdRoesserModel m(blocks, std::vector<DimensionKind>(3, DimensionKind::Shift));
  const std::vector<BoundaryPoint> one{BoundaryPoint::at(1.0)};
  EXPECT_THROW(nd_m_delta(m, one), DimensionMismatch);
}
