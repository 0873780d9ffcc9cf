#include "roesser/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "roesser/errors.hpp"

namespace roesser {

namespace {

void require_finite(std::span<const Complex> entries) {
  for (const auto& z : entries) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvalidArgument("matrix entry is not finite");
    }
  }
}

void require_square(const CMatrix& x, const char* op) {
  if (!x.is_square()) {
    throw DimensionMismatch(std::string(op) + ": matrix is " + std::to_string(x.rows()) + "x" +
                            std::to_string(x.cols()) + ", expected square");
  }
}

void require_hermitian(const CMatrix& x, const char* op) {
  require_square(x, op);
  if (!is_hermitian(x)) throw NotHermitian(std::string(op) + ": input is not Hermitian");
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionMismatch("CMatrix: entry count does not match rows*cols");
  }
  require_finite(data_);
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionMismatch("CMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  require_finite(data_);
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::from_real(std::size_t rows, std::size_t cols, std::span<const double> entries) {
  if (entries.size() != rows * cols) {
    throw DimensionMismatch("CMatrix::from_real: entry count does not match rows*cols");
  }
  std::vector<Complex> data(entries.begin(), entries.end());
  return CMatrix(rows, cols, std::move(data));
}

double CMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool CMatrix::is_real(double tol) const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [tol](const Complex& z) { return std::abs(z.imag()) <= tol; });
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Complex s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("matrix product: " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " times " + std::to_string(b.rows()) +
                            "x" + std::to_string(b.cols()));
  }
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

CMatrix conj_transpose(const CMatrix& x) {
  CMatrix r(x.cols(), x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) r(j, i) = std::conj(x(i, j));
  return r;
}

CMatrix conjugate(const CMatrix& x) {
  CMatrix r(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) r(i, j) = std::conj(x(i, j));
  return r;
}

CMatrix herm_part(const CMatrix& x) {
  require_square(x, "herm_part");
  const std::size_t n = x.rows();
  CMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    r(i, i) = Complex{2.0 * x(i, i).real(), 0.0};
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = x(i, j) + std::conj(x(j, i));
      r(i, j) = v;
      r(j, i) = std::conj(v);
    }
  }
  return r;
}

bool is_hermitian(const CMatrix& x) {
  if (!x.is_square()) return false;
  const double tol = 1e-12 * (1.0 + x.max_abs());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = i; j < x.cols(); ++j)
      if (std::abs(x(i, j) - std::conj(x(j, i))) > tol) return false;
  return true;
}

CMatrix solve(const CMatrix& a, const CMatrix& b) {
  require_square(a, "solve");
  if (a.rows() != b.rows()) throw DimensionMismatch("solve: rows(A) != rows(B)");
  const std::size_t n = a.rows();
  const std::size_t m = b.cols();
  const double threshold = 1e-14 * a.max_abs();
  CMatrix lu = a;
  CMatrix x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best <= threshold || best == 0.0) {
      throw SingularMatrix("solve: pivot " + std::to_string(best) + " below threshold at column " +
                           std::to_string(k));
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      for (std::size_t j = 0; j < m; ++j) std::swap(x(k, j), x(piv, j));
    }
    const Complex inv = 1.0 / lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = lu(i, k) * inv;
      if (f == Complex{}) continue;
      lu(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      for (std::size_t j = 0; j < m; ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t j = 0; j < m; ++j) {
      Complex s = x(kk, j);
      for (std::size_t c = kk + 1; c < n; ++c) s -= lu(kk, c) * x(c, j);
      x(kk, j) = s / lu(kk, kk);
    }
  }
  return x;
}

namespace {

// Householder reduction to upper Hessenberg form, in place.
void reduce_to_hessenberg(CMatrix& h) {
  const std::size_t n = h.rows();
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm2 += std::norm(h(i, k));
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    const Complex x0 = h(k + 1, k);
    const Complex phase = std::abs(x0) == 0.0 ? Complex{1.0, 0.0} : x0 / std::abs(x0);
    const Complex alpha = -phase * norm;
    std::fill(v.begin(), v.end(), Complex{});
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    if (vnorm2 == 0.0) continue;
    // H <- (I - 2 v v*/|v|^2) H (I - 2 v v*/|v|^2)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
      s *= 2.0 / vnorm2;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= v[i] * s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex s{};
      for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
      s *= 2.0 / vnorm2;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = Complex{};
  }
}

struct Givens {
  double c;
  Complex s;
};

// G = [c s; -conj(s) c] maps (a, b) to (r, 0).
Givens make_givens(Complex a, Complex b) {
  const double abs_a = std::abs(a);
  const double abs_b = std::abs(b);
  if (abs_b == 0.0) return {1.0, Complex{}};
  if (abs_a == 0.0) return {0.0, Complex{1.0, 0.0}};
  const double r = std::hypot(abs_a, abs_b);
  return {abs_a / r, (a / abs_a) * std::conj(b) / r};
}

Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex half_diff = 0.5 * (a - d);
  const Complex disc = std::sqrt(half_diff * half_diff + b * c);
  const Complex mean = 0.5 * (a + d);
  const Complex l1 = mean + disc;
  const Complex l2 = mean - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

std::vector<Complex> eig_general(const CMatrix& x) {
  require_square(x, "eig_general");
  const std::size_t n = x.rows();
  std::vector<Complex> eig;
  eig.reserve(n);
  if (n == 0) return eig;
  CMatrix h = x;
  reduce_to_hessenberg(h);

  const double eps = std::numeric_limits<double>::epsilon();
  const std::size_t cap = 100 * n;
  std::size_t total = 0;
  std::size_t since_deflation = 0;
  std::vector<Givens> rot(n);

  std::size_t hi = n - 1;
  while (true) {
    if (hi == 0) {
      eig.push_back(h(0, 0));
      break;
    }
    std::size_t lo = hi;
    while (lo > 0) {
      const double scale = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      const double sub = std::abs(h(lo, lo - 1));
      if (sub <= eps * scale || sub < std::numeric_limits<double>::min()) {
        h(lo, lo - 1) = Complex{};
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig.push_back(h(hi, hi));
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++total > cap) {
      throw NoConvergence("eig_general: QR iteration cap of " + std::to_string(cap) + " exceeded");
    }
    ++since_deflation;

    Complex mu;
    if (since_deflation % 11 == 10) {
      // exceptional shift to break cycles
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1)) +
           (hi >= lo + 2 ? 0.4375 * std::abs(h(hi - 1, hi - 2)) : 0.0);
    } else {
      mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    for (std::size_t k = lo; k <= hi; ++k) h(k, k) -= mu;
    for (std::size_t k = lo; k < hi; ++k) {
      const Givens g = make_givens(h(k, k), h(k + 1, k));
      rot[k] = g;
      for (std::size_t j = k; j <= hi; ++j) {
        const Complex a = h(k, j);
        const Complex b = h(k + 1, j);
        h(k, j) = g.c * a + g.s * b;
        h(k + 1, j) = -std::conj(g.s) * a + g.c * b;
      }
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const Givens g = rot[k];
      const std::size_t last = std::min(k + 1, hi);
      for (std::size_t i = lo; i <= last; ++i) {
        const Complex a = h(i, k);
        const Complex b = h(i, k + 1);
        h(i, k) = g.c * a + std::conj(g.s) * b;
        h(i, k + 1) = -g.s * a + g.c * b;
      }
    }
    for (std::size_t k = lo; k <= hi; ++k) h(k, k) += mu;
  }
  std::reverse(eig.begin(), eig.end());
  return eig;
}

std::vector<double> eig_hermitian(const CMatrix& x) {
  require_hermitian(x, "eig_hermitian");
  const std::size_t n = x.rows();
  CMatrix a = x;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = Complex{a(i, i).real(), 0.0};
  const double scale = std::max(x.max_abs(), std::numeric_limits<double>::min());
  const double target = 1e-15 * scale;
  constexpr int kMaxSweeps = 60;

  auto off_max = [&]() {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
  };

  int sweep = 0;
  while (off_max() > target) {
    if (++sweep > kMaxSweeps) throw NoConvergence("eig_hermitian: Jacobi sweep cap exceeded");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 0.1 * target) continue;
        const Complex phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // V = diag(1, conj(phase)) * [c s; -s c] acts on columns p, q.
        const Complex v_pp = c;
        const Complex v_pq = s;
        const Complex v_qp = -s * std::conj(phase);
        const Complex v_qq = c * std::conj(phase);
        for (std::size_t i = 0; i < n; ++i) {
          const Complex aip = a(i, p);
          const Complex aiq = a(i, q);
          a(i, p) = aip * v_pp + aiq * v_qp;
          a(i, q) = aip * v_pq + aiq * v_qq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const Complex apj = a(p, j);
          const Complex aqj = a(q, j);
          a(p, j) = std::conj(v_pp) * apj + std::conj(v_qp) * aqj;
          a(q, j) = std::conj(v_pq) * apj + std::conj(v_qq) * aqj;
        }
        a(p, q) = Complex{};
        a(q, p) = Complex{};
        a(p, p) = Complex{a(p, p).real(), 0.0};
        a(q, q) = Complex{a(q, q).real(), 0.0};
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

bool is_positive_definite(const CMatrix& x, double margin) {
  require_hermitian(x, "is_positive_definite");
  const std::size_t n = x.rows();
  CMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = x(j, j).real() - margin;
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = x(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return true;
}

double smallest_singular_value(const CMatrix& x) {
  const CMatrix gram = conj_transpose(x) * x;
  CMatrix sym = 0.5 * herm_part(gram);
  const auto ev = eig_hermitian(sym);
  return ev.empty() ? 0.0 : std::sqrt(std::max(ev.front(), 0.0));
}

CMatrix block_diag(const std::vector<CMatrix>& blocks) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  CMatrix r(rows, cols);
  std::size_t r0 = 0;
  std::size_t c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) r(r0 + i, c0 + j) = b(i, j);
    r0 += b.rows();
    c0 += b.cols();
  }
  return r;
}

}  // namespace roesser
