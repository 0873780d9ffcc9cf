#include "roesser/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "roesser/errors.hpp"
#include "roesser/parallel.hpp"

namespace roesser {

std::string_view to_string(Basis b) noexcept {
  return b == Basis::Moebius ? "moebius" : "monomial";
}

Complex basis_value(Basis basis, Complex delta, std::size_t power) {
  Complex base = delta;
  if (basis == Basis::Moebius) {
    const Complex den = 1.0 + delta;
    if (std::abs(den) == 0.0) throw PoleHit("moebius basis is singular at delta = -1");
    base = delta / den;
  }
  Complex r{1.0, 0.0};
  for (std::size_t i = 0; i < power; ++i) r *= base;
  return r;
}

CMatrix PolynomialLyapunov::evaluate(const ExtendedPoint& delta) const {
  if (coeffs.empty()) throw InvalidArgument("PolynomialLyapunov has no coefficients");
  const std::size_t k = coeffs.front().rows();
  CMatrix sum(k, k);
  if (delta.infinite) {
    if (basis == Basis::Monomial) {
      for (std::size_t i = 1; i < coeffs.size(); ++i) {
        if (coeffs[i].max_abs() != 0.0)
          throw InvalidArgument("monomial Lyapunov polynomial of positive degree is unbounded at infinity");
      }
      return herm_part(coeffs.front());
    }
    // delta / (1 + delta) -> 1
    for (const auto& c : coeffs) sum += c;
    return herm_part(sum);
  }
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    sum += basis_value(basis, delta.value, i) * coeffs[i];
  }
  return herm_part(sum);
}

BilateralPolynomial::BilateralPolynomial(std::size_t eta_, std::size_t gamma_, std::size_t dim)
    : eta(eta_), gamma(gamma_), coeffs((eta_ + 1) * (gamma_ + 1), CMatrix(dim, dim)) {}

CMatrix BilateralPolynomial::evaluate(Complex delta) const {
  const std::size_t k = coeffs.front().rows();
  CMatrix sum(k, k);
  const Complex dc = std::conj(delta);
  Complex pk{1.0, 0.0};
  for (std::size_t a = 0; a <= eta; ++a) {
    Complex pl{1.0, 0.0};
    for (std::size_t b = 0; b <= gamma; ++b) {
      sum += (pk * pl) * at(a, b);
      pl *= dc;
    }
    pk *= delta;
  }
  return sum;
}

CMatrix stein_form(const SteinCoefficients& c, const CMatrix& m, const CMatrix& p) {
  if (!m.is_square() || !p.is_square() || m.rows() != p.rows()) {
    throw DimensionMismatch("stein_form: M is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", P is " + std::to_string(p.rows()) + "x" +
                            std::to_string(p.cols()));
  }
  const CMatrix mh = conj_transpose(m);
  CMatrix out = Complex{c.r00} * p;
  if (c.r10 != 0.0) {
    const CMatrix pm = p * m;
    out += Complex{c.r10} * (mh * p + pm);
  }
  if (c.r11 != 0.0) out += Complex{c.r11} * (mh * p * m);
  // exact Hermitian symmetry; rounding in the products leaves ~1 ulp skew
  return Complex{0.5} * herm_part(out);
}

CMatrix stein_a22(const RoesserModel& m, const CMatrix& y) {
  return stein_form(SteinCoefficients::from(m.region2()), m.a22(), y);
}

CMatrix stein_m(const RoesserModel& m, const PolynomialLyapunov& p, const ExtendedPoint& delta) {
  return stein_form(SteinCoefficients::from(m.region1()), m_delta(m, delta), p.evaluate(delta));
}

std::vector<CMatrix> reduce_bilateral(const BilateralPolynomial& q, DimensionKind kind2) {
  const std::size_t k = q.coeffs.front().rows();
  const std::size_t nu = kind2 == DimensionKind::Shift ? std::max(q.eta, q.gamma) : q.eta + q.gamma;
  std::vector<CMatrix> p(nu + 1, CMatrix(k, k));
  for (std::size_t a = 0; a <= q.eta; ++a) {
    for (std::size_t b = 0; b <= q.gamma; ++b) {
      const CMatrix& c = q.at(a, b);
      if (kind2 == DimensionKind::Shift) {
        // delta conj(delta) = 1; herm(Q conj(delta)^i) = herm(Q* delta^i)
        if (a >= b) {
          p[a - b] += c;
        } else {
          p[b - a] += conj_transpose(c);
        }
      } else {
        // conj(delta) = -delta
        p[a + b] += Complex{b % 2 == 0 ? 1.0 : -1.0} * c;
      }
    }
  }
  return p;
}

std::vector<double> real_embedding(const CMatrix& h) {
  const std::size_t n = h.rows();
  const std::size_t d = 2 * n;
  std::vector<double> out(d * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < h.cols(); ++j) {
      const double re = h(i, j).real();
      const double im = h(i, j).imag();
      out[i * d + j] = re;
      out[i * d + n + j] = -im;
      out[(n + i) * d + j] = im;
      out[(n + i) * d + n + j] = re;
    }
  }
  return out;
}

namespace {

std::size_t hermitian_vars(std::size_t k) { return k * k; }

// j-th unit Hermitian matrix: diagonal entries, then Re/Im of each upper entry.
CMatrix hermitian_unit(std::size_t k, std::size_t j) {
  CMatrix u(k, k);
  if (j < k) {
    u(j, j) = 1.0;
    return u;
  }
  std::size_t idx = j - k;
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = r + 1; c < k; ++c) {
      if (idx == 0) {
        u(r, c) = 1.0;
        u(c, r) = 1.0;
        return u;
      }
      if (idx == 1) {
        u(r, c) = Complex{0.0, 1.0};
        u(c, r) = Complex{0.0, -1.0};
        return u;
      }
      idx -= 2;
    }
  }
  throw InvalidArgument("hermitian_unit: index out of range");
}

void hermitian_names(std::size_t k, const std::string& sym, std::vector<std::string>& out) {
  auto pos = [](std::size_t r, std::size_t c) {
    return "(" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")";
  };
  for (std::size_t i = 0; i < k; ++i) out.push_back(sym + pos(i, i));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = r + 1; c < k; ++c) {
      out.push_back("Re" + sym + pos(r, c));
      out.push_back("Im" + sym + pos(r, c));
    }
  }
}

CMatrix hermitian_from(std::size_t k, std::span<const double> x) {
  CMatrix h(k, k);
  std::size_t v = 0;
  for (std::size_t i = 0; i < k; ++i) h(i, i) = x[v++];
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = r + 1; c < k; ++c) {
      h(r, c) = Complex{x[v], x[v + 1]};
      h(c, r) = Complex{x[v], -x[v + 1]};
      v += 2;
    }
  }
  return h;
}

}  // namespace

LyapunovLayout::LyapunovLayout(std::size_t k1, std::size_t k2, std::size_t degree, Basis basis)
    : k1_(k1), k2_(k2), degree_(degree), basis_(basis) {
  if (k1 == 0 || k2 == 0) throw DimensionMismatch("LyapunovLayout: block sizes must be positive");
  num_vars_ = hermitian_vars(k2) + hermitian_vars(k1) + degree * 2 * k1 * k1;
}

std::vector<std::string> LyapunovLayout::var_names() const {
  std::vector<std::string> names;
  names.reserve(num_vars_);
  hermitian_names(k2_, "Y", names);
  hermitian_names(k1_, "P0", names);
  for (std::size_t p = 1; p <= degree_; ++p) {
    const std::string sym = "P" + std::to_string(p);
    for (std::size_t r = 0; r < k1_; ++r) {
      for (std::size_t c = 0; c < k1_; ++c) {
        const std::string pos = "(" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")";
        names.push_back("Re" + sym + pos);
        names.push_back("Im" + sym + pos);
      }
    }
  }
  return names;
}

CMatrix LyapunovLayout::y_unit(std::size_t j) const {
  if (j >= y_vars()) throw InvalidArgument("y_unit: not a Y variable");
  return hermitian_unit(k2_, j);
}

std::pair<std::size_t, CMatrix> LyapunovLayout::p_unit(std::size_t j) const {
  if (j < y_vars() || j >= num_vars_) throw InvalidArgument("p_unit: not a P variable");
  std::size_t idx = j - y_vars();
  if (idx < hermitian_vars(k1_)) return {0, hermitian_unit(k1_, idx)};
  idx -= hermitian_vars(k1_);
  const std::size_t per = 2 * k1_ * k1_;
  const std::size_t power = 1 + idx / per;
  idx %= per;
  CMatrix u(k1_, k1_);
  u(idx / 2 / k1_, (idx / 2) % k1_) = idx % 2 == 0 ? Complex{1.0, 0.0} : Complex{0.0, 1.0};
  return {power, u};
}

CMatrix LyapunovLayout::unpack_y(std::span<const double> x) const {
  if (x.size() != num_vars_) throw DimensionMismatch("unpack_y: wrong vector length");
  return hermitian_from(k2_, x.subspan(0, y_vars()));
}

PolynomialLyapunov LyapunovLayout::unpack_p(std::span<const double> x) const {
  if (x.size() != num_vars_) throw DimensionMismatch("unpack_p: wrong vector length");
  PolynomialLyapunov p;
  p.basis = basis_;
  std::size_t v = y_vars();
  p.coeffs.push_back(hermitian_from(k1_, x.subspan(v, hermitian_vars(k1_))));
  v += hermitian_vars(k1_);
  for (std::size_t q = 1; q <= degree_; ++q) {
    CMatrix c(k1_, k1_);
    for (std::size_t r = 0; r < k1_; ++r) {
      for (std::size_t s = 0; s < k1_; ++s) {
        c(r, s) = Complex{x[v], x[v + 1]};
        v += 2;
      }
    }
    p.coeffs.push_back(std::move(c));
  }
  return p;
}

std::vector<double> LyapunovLayout::pad(std::span<const double> x, std::size_t extra) const {
  if (x.size() != num_vars_) throw DimensionMismatch("pad: wrong vector length");
  std::vector<double> out(x.begin(), x.end());
  out.resize(num_vars_ + extra * 2 * k1_ * k1_, 0.0);
  return out;
}

double default_eps(const RoesserModel& m) { return 1e-6 * (1.0 + m.max_block_norm()); }

namespace {

// A Hermitian block whose data are all real enters directly; otherwise
// through the real embedding.
struct HermitianBlockBuilder {
  CMatrix constant;
  std::vector<std::size_t> vars;
  std::vector<CMatrix> coeffs;

  LmiBlock build(std::string label) const {
    bool real = constant.is_real();
    for (const auto& c : coeffs) real = real && c.is_real();
    auto convert = [real](const CMatrix& h) {
      if (!real) return real_embedding(h);
      std::vector<double> out;
      out.reserve(h.rows() * h.cols());
      for (const auto& e : h.entries()) out.push_back(e.real());
      return out;
    };
    LmiBlock b;
    b.dim = real ? constant.rows() : 2 * constant.rows();
    b.constant = convert(constant);
    b.label = std::move(label);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (coeffs[i].max_abs() == 0.0) continue;
      b.add_term(vars[i], convert(coeffs[i]));
    }
    return b;
  }
};

std::string point_label(const BoundaryPoint& s) {
  if (s.point.infinite) return "inf";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", s.point.value.real(), s.point.value.imag());
  return buf;
}

}  // namespace

LmiProblem assemble_lmi(const RoesserModel& m, std::size_t degree, Basis basis,
                        std::span<const BoundaryPoint> samples, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("assemble_lmi: eps must be positive");
  if (basis == Basis::Moebius && m.kind2() != DimensionKind::Derivative) {
    throw InvalidArgument("the moebius basis requires a derivative second dimension");
  }
  const LyapunovLayout layout(m.k1(), m.k2(), degree, basis);
  const std::size_t k1 = m.k1();
  const std::size_t k2 = m.k2();

  LmiProblem prob;
  prob.num_vars = layout.num_vars();
  prob.var_names = layout.var_names();
  // The Lyapunov inequalities are homogeneous; the normalization block below
  // bounds the scale, the ball only keeps the dual bound finite.
  prob.x_radius = 1e3;

  const SteinCoefficients c1 = SteinCoefficients::from(m.region1());
  const SteinCoefficients c2 = SteinCoefficients::from(m.region2());
  const CMatrix neg_eps2 = Complex{-eps} * CMatrix::identity(k2);
  const CMatrix neg_eps1 = Complex{-eps} * CMatrix::identity(k1);

  HermitianBlockBuilder ypos{neg_eps2, {}, {}};
  HermitianBlockBuilder ystein{neg_eps2, {}, {}};
  for (std::size_t j = 0; j < layout.y_vars(); ++j) {
    const CMatrix u = layout.y_unit(j);
    ypos.vars.push_back(j);
    ypos.coeffs.push_back(u);
    ystein.vars.push_back(j);
    ystein.coeffs.push_back(Complex{-1.0} * stein_form(c2, m.a22(), u));
  }
  prob.blocks.push_back(ypos.build("Y"));
  prob.blocks.push_back(ystein.build("stein22"));

  // A monomial polynomial has no finite value at infinity.
  std::vector<BoundaryPoint> used;
  for (const auto& s : samples) {
    if (s.point.infinite && basis == Basis::Monomial) continue;
    used.push_back(s);
  }

  std::vector<std::pair<LmiBlock, LmiBlock>> per_sample(used.size());
  std::vector<std::vector<double>> traces(used.size());
  std::vector<std::string> errors(used.size());
  std::vector<std::pair<std::size_t, CMatrix>> units;
  for (std::size_t j = layout.y_vars(); j < layout.num_vars(); ++j) units.push_back(layout.p_unit(j));

  parallel_for(used.size(), [&](std::size_t s) {
    try {
      const CMatrix mm = m_delta(m, used[s].point);
      HermitianBlockBuilder ppos{neg_eps1, {}, {}};
      HermitianBlockBuilder pstein{neg_eps1, {}, {}};
      for (std::size_t u = 0; u < units.size(); ++u) {
        const auto& [power, unit] = units[u];
        const Complex b = used[s].point.infinite ? Complex{1.0} : basis_value(basis, used[s].point.value, power);
        const CMatrix e = herm_part(b * unit);
        const std::size_t var = layout.y_vars() + u;
        double tr = 0.0;
        for (std::size_t i = 0; i < k1; ++i) tr += e(i, i).real();
        traces[s].push_back(tr);
        ppos.vars.push_back(var);
        ppos.coeffs.push_back(e);
        pstein.vars.push_back(var);
        pstein.coeffs.push_back(Complex{-1.0} * stein_form(c1, mm, e));
      }
      const std::string lbl = point_label(used[s]);
      per_sample[s] = {ppos.build("P@" + lbl), pstein.build("stein@" + lbl)};
    } catch (const Error& e) {
      errors[s] = e.what();
    }
  });
  for (std::size_t s = 0; s < used.size(); ++s) {
    if (!errors[s].empty()) throw PoleHit("assemble_lmi at delta = " + point_label(used[s]) + ": " + errors[s]);
  }
  for (auto& [a, b] : per_sample) {
    prob.blocks.push_back(std::move(a));
    prob.blocks.push_back(std::move(b));
  }

  // 1 - tr Y - mean_s tr P(delta_s) >= t
  std::vector<double> ell(layout.num_vars(), 0.0);
  for (std::size_t j = 0; j < layout.y_vars(); ++j) ell[j] = j < k2 ? 1.0 : 0.0;
  for (const auto& tr : traces) {
    for (std::size_t u = 0; u < tr.size(); ++u)
      ell[layout.y_vars() + u] += tr[u] / static_cast<double>(std::max<std::size_t>(used.size(), 1));
  }
  LmiBlock norm;
  norm.dim = 1;
  norm.constant = {1.0};
  norm.label = "normalization";
  for (std::size_t j = 0; j < ell.size(); ++j) {
    if (ell[j] != 0.0) norm.add_term(j, {-ell[j]});
  }
  prob.blocks.push_back(std::move(norm));
  return prob;
}

}  // namespace roesser
