#include <gtest/gtest.h>

#include <random>

#include "roesser/errors.hpp"
#include "roesser/linalg.hpp"
#include "support.hpp"

using namespace roesser;
using namespace testing_support;

namespace {
const Complex I{0.0, 1.0};
}

TEST(Linalg, ConjTransposeScalar) {
  const CMatrix x{{I}};
  EXPECT_EQ(conj_transpose(x)(0, 0), -I);
}

TEST(Linalg, ConjTransposeFixesRealSymmetric) {
  const CMatrix x{{1.0, 2.0}, {2.0, 5.0}};
  EXPECT_EQ(conj_transpose(x), x);
}

TEST(Linalg, ConjTransposeInvolution) {
  std::mt19937_64 rng(1);
  const CMatrix x = random_complex(rng, 3, 4);
  const CMatrix t = conj_transpose(x);
  EXPECT_EQ(t.rows(), 4u);
  EXPECT_EQ(conj_transpose(t), x);
}

TEST(Linalg, HermPartExamples) {
  EXPECT_EQ(herm_part(CMatrix{{1.0 + I}})(0, 0), Complex(2.0));
  const CMatrix h{{2.0, 1.0 + I}, {1.0 - I, -3.0}};
  EXPECT_EQ(herm_part(h), Complex(2.0) * h);
  EXPECT_EQ(herm_part(CMatrix{{0.0, 1.0}, {0.0, 0.0}}), (CMatrix{{0.0, 1.0}, {1.0, 0.0}}));
  EXPECT_THROW(herm_part(CMatrix(2, 3)), DimensionMismatch);
}

TEST(Linalg, HermPartIsExactlyHermitian) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const CMatrix x = random_complex(rng, 5, 5);
    const CMatrix h = herm_part(x);
    EXPECT_EQ(conj_transpose(h), h);
    const auto ev = eig_hermitian(h);
    double sum = 0.0;
    for (double v : ev) sum += v;
    Complex tr = 0.0;
    for (std::size_t i = 0; i < 5; ++i) tr += x(i, i);
    EXPECT_NEAR(sum, 2.0 * tr.real(), 1e-10 * (1.0 + std::abs(tr)));
  }
}

TEST(Linalg, SolveExamples) {
  std::mt19937_64 rng(3);
  const CMatrix b = random_complex(rng, 3, 2);
  EXPECT_LT(max_abs_diff(solve(CMatrix::identity(3), b), b), 1e-15);
  EXPECT_EQ(solve(CMatrix{{2.0}}, CMatrix{{1.0}})(0, 0), Complex(0.5));
  EXPECT_THROW(solve(CMatrix{{0.0}}, CMatrix{{1.0}}), SingularMatrix);
  EXPECT_THROW(solve(CMatrix(2, 2), CMatrix(3, 1)), DimensionMismatch);
}

TEST(Linalg, SolveRoundTrip) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    CMatrix a = random_complex(rng, 6, 6);
    for (std::size_t i = 0; i < 6; ++i) a(i, i) += 4.0;  // well conditioned
    const CMatrix b = random_complex(rng, 6, 3);
    EXPECT_LT(max_abs_diff(a * solve(a, b), b), 1e-9);
  }
}

TEST(Linalg, RejectsNonFiniteEntries) {
  EXPECT_THROW(CMatrix(1, 1, {Complex(std::nan(""), 0.0)}), InvalidArgument);
  EXPECT_THROW(CMatrix(1, 1, {Complex(0.0, INFINITY)}), InvalidArgument);
}

TEST(Linalg, EigGeneralExamples) {
  const auto e1 = eig_general(CMatrix{{0.0, 1.0}, {1.0, 0.0}});
  EXPECT_LT(multiset_distance(e1, {1.0, -1.0}), 1e-12);
  const double s5 = std::sqrt(5.0);
  const auto e2 = eig_general(CMatrix{{0.0, 1.0}, {1.0, 1.0}});
  EXPECT_LT(multiset_distance(e2, {(1.0 + s5) / 2.0, (1.0 - s5) / 2.0}), 1e-12);
}

TEST(Linalg, EigGeneralMatchesCharacteristicPolynomialRoots) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const CMatrix x = random_complex(rng, 5, 5);
    const auto ev = eig_general(x);
    const auto roots = poly_roots(char_poly(x));
    EXPECT_LT(multiset_distance(ev, roots), 1e-6);
  }
}

TEST(Linalg, EigGeneralResidual) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 40; ++t) {
    const CMatrix x = random_real(rng, 7, 7);
    for (const Complex l : eig_general(x)) {
      // one step of inverse iteration with a slightly perturbed shift
      CMatrix s = x;
      CMatrix shifted = x;
      const Complex mu = l + Complex(1e-9, 1e-9) * x.max_abs();
      for (std::size_t i = 0; i < 7; ++i) {
        s(i, i) -= l;
        shifted(i, i) -= mu;
      }
      CMatrix b(7, 1);
      for (std::size_t i = 0; i < 7; ++i) b(i, 0) = 1.0 + 0.1 * double(i);
      const CMatrix v = solve(shifted, b);
      const CMatrix r = s * v;
      double nv = 0.0, nr = 0.0;
      for (std::size_t i = 0; i < 7; ++i) {
        nv += std::norm(v(i, 0));
        nr += std::norm(r(i, 0));
      }
      EXPECT_LE(std::sqrt(nr / nv), 1e-7 * x.max_abs());
    }
  }
}

TEST(Linalg, EigGeneralHandlesDefectiveAndZero) {
  EXPECT_LT(multiset_distance(eig_general(CMatrix{{2.0, 1.0}, {0.0, 2.0}}), {2.0, 2.0}), 1e-7);
  EXPECT_LT(multiset_distance(eig_general(CMatrix(3, 3)), {0.0, 0.0, 0.0}), 1e-15);
}

TEST(Linalg, EigHermitianExamples) {
  const auto a = eig_hermitian(CMatrix{{3.0, 0.0}, {0.0, -1.0}});
  ASSERT_EQ(a.size(), 2u);
  EXPECT_DOUBLE_EQ(a[0], -1.0);
  EXPECT_DOUBLE_EQ(a[1], 3.0);
  const auto b = eig_hermitian(CMatrix{{0.0, I}, {-I, 0.0}});
  EXPECT_NEAR(b[0], -1.0, 1e-14);
  EXPECT_NEAR(b[1], 1.0, 1e-14);
  EXPECT_THROW(eig_hermitian(CMatrix{{0.0, 1.0}, {0.0, 0.0}}), NotHermitian);
}

TEST(Linalg, EigHermitianAgreesWithEigGeneral) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const CMatrix h = herm_part(random_complex(rng, 6, 6));
    const auto eh = eig_hermitian(h);
    auto eg = eig_general(h);
    std::vector<double> re;
    for (auto z : eg) re.push_back(z.real());
    std::sort(re.begin(), re.end());
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(eh[i], re[i], 1e-8);
    EXPECT_TRUE(std::is_sorted(eh.begin(), eh.end()));
  }
}

TEST(Linalg, PositiveDefiniteExamples) {
  EXPECT_TRUE(is_positive_definite(CMatrix::identity(3), 0.5));
  EXPECT_FALSE(is_positive_definite(CMatrix::identity(3), 1.5));
  EXPECT_FALSE(is_positive_definite(CMatrix{{1.0, 2.0}, {2.0, 1.0}}, 0.0));
  EXPECT_THROW(is_positive_definite(CMatrix{{1.0, 2.0}, {0.0, 1.0}}, 0.0), NotHermitian);
}

TEST(Linalg, PositiveDefiniteMonotoneInMargin) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const CMatrix h = herm_part(random_complex(rng, 4, 4));
    bool prev = true;
    for (double m = -10.0; m <= 10.0; m += 0.25) {
      const bool cur = is_positive_definite(h, m);
      EXPECT_FALSE(cur && !prev);
      prev = cur;
    }
  }
}

TEST(Linalg, HermitianFlagTolerance) {
  CMatrix h{{1.0, 2.0}, {2.0, 1.0}};
  EXPECT_TRUE(is_hermitian(h));
  h(0, 1) += 1e-13;
  EXPECT_TRUE(is_hermitian(h));
  h(0, 1) += 1e-9;
  EXPECT_FALSE(is_hermitian(h));
}
