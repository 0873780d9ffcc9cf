#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "roesser/linalg.hpp"
#include "roesser/model.hpp"

namespace testing_support {

using roesser::CMatrix;
using roesser::Complex;

inline CMatrix random_real(std::mt19937_64& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = scale * u(rng);
  return m;
}

inline CMatrix random_complex(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Complex{u(rng), u(rng)};
  return m;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

/// Characteristic polynomial coefficients c_0..c_n of det(lI - X) (c_n = 1)
/// by the Faddeev-LeVerrier recursion.
inline std::vector<Complex> char_poly(const CMatrix& x) {
  const std::size_t n = x.rows();
  std::vector<Complex> c(n + 1);
  c[n] = 1.0;
  CMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = X M_{k-1} + c_{n-k+1} I
    CMatrix next = x * m;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = next;
    const CMatrix xm = x * m;
    Complex tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += xm(i, i);
    c[n - k] = -tr / static_cast<double>(k);
  }
  return c;
}

inline Complex poly_eval(const std::vector<Complex>& c, Complex z) {
  Complex r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * z + c[i];
  return r;
}

/// Durand-Kerner simultaneous iteration on a monic polynomial, then Newton
/// polishing.
inline std::vector<Complex> poly_roots(const std::vector<Complex>& c) {
  const std::size_t n = c.size() - 1;
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, std::abs(c[i]));
  const double radius = 1.0 + bound;
  std::vector<Complex> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::polar(0.5 * radius, 0.4 + 2.0 * M_PI * i / n);
  for (int it = 0; it < 5000; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex den = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      if (std::abs(den) == 0.0) den = 1e-300;
      const Complex step = poly_eval(c, z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * radius) break;
  }
  std::vector<Complex> dc(n);
  for (std::size_t i = 1; i <= n; ++i) dc[i - 1] = c[i] * static_cast<double>(i);
  for (auto& r : z) {
    for (int k = 0; k < 3; ++k) {
      const Complex d = poly_eval(dc, r);
      if (std::abs(d) < 1e-200) break;
      r -= poly_eval(c, r) / d;
    }
  }
  return z;
}

/// Smallest max-distance over all pairings of two multisets (n <= 8).
inline double multiset_distance(std::vector<Complex> a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size() && worst < best; ++i)
      worst = std::max(worst, std::abs(a[perm[i]] - b[i]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline roesser::RoesserModel scalar_model(double a, double b, double c, double d,
                                          roesser::DimensionKind k1 = roesser::DimensionKind::Shift,
                                          roesser::DimensionKind k2 = roesser::DimensionKind::Shift) {
  return roesser::RoesserModel(CMatrix{{a}}, CMatrix{{b}}, CMatrix{{c}}, CMatrix{{d}}, k1, k2);
}

}  // namespace testing_support
