#include "roesser/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "roesser/errors.hpp"
#include "roesser/linalg.hpp"

namespace roesser {

void LmiBlock::add_term(std::size_t var, std::vector<double> coeff) {
  if (coeff.size() != dim * dim) throw DimensionMismatch("LmiBlock::add_term: wrong matrix size");
  vars.push_back(var);
  coeffs.push_back(std::move(coeff));
}

std::vector<double> LmiBlock::evaluate(std::span<const double> x) const {
  std::vector<double> out = constant;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const double xv = x[vars[k]];
    if (xv == 0.0) continue;
    const auto& f = coeffs[k];
    for (std::size_t e = 0; e < out.size(); ++e) out[e] += xv * f[e];
  }
  return out;
}

void LmiProblem::validate() const {
  if (blocks.empty()) throw InvalidArgument("LMI problem has no blocks");
  if (num_vars == 0) throw InvalidArgument("LMI problem has no variables");
  if (!(x_radius > 0.0)) throw InvalidArgument("x_radius must be positive");
  auto check_sym = [](const std::vector<double>& m, std::size_t d, const std::string& what) {
    double scale = 0.0;
    for (double v : m) {
      if (!std::isfinite(v)) throw InvalidArgument(what + ": non-finite entry");
      scale = std::max(scale, std::abs(v));
    }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (std::abs(m[i * d + j] - m[j * d + i]) > 1e-12 * (1.0 + scale))
          throw InvalidArgument(what + ": matrix is not symmetric");
  };
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    const std::string where = "block " + std::to_string(b);
    if (blk.dim == 0) throw InvalidArgument(where + ": zero dimension");
    if (blk.constant.size() != blk.dim * blk.dim) throw InvalidArgument(where + ": bad constant");
    if (blk.vars.size() != blk.coeffs.size()) throw InvalidArgument(where + ": term mismatch");
    check_sym(blk.constant, blk.dim, where);
    for (std::size_t k = 0; k < blk.vars.size(); ++k) {
      if (blk.vars[k] >= num_vars) throw InvalidArgument(where + ": variable index out of range");
      if (blk.coeffs[k].size() != blk.dim * blk.dim)
        throw InvalidArgument(where + ": bad coefficient size");
      check_sym(blk.coeffs[k], blk.dim, where);
    }
  }
}

std::string_view to_string(SdpStatus s) noexcept {
  switch (s) {
    case SdpStatus::Feasible:
      return "feasible";
    case SdpStatus::Infeasible:
      return "infeasible";
    case SdpStatus::Indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

namespace {

// In-place lower Cholesky of a dense row-major n x n matrix.
bool cholesky_lower(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    a[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / ljj;
    }
    for (std::size_t k = j + 1; k < n; ++k) a[j * n + k] = 0.0;
  }
  return true;
}

void invert_lower(const std::vector<double>& l, std::vector<double>& inv, std::size_t n) {
  inv.assign(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    inv[j * n + j] = 1.0 / l[j * n + j];
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s += l[i * n + k] * inv[k * n + j];
      inv[i * n + j] = -s / l[i * n + i];
    }
  }
}

void cholesky_solve(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
    b[i] = s / l[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l[k * n + i] * b[k];
    b[i] = s / l[i * n + i];
  }
}

double frobenius(const std::vector<double>& m) {
  double s = 0.0;
  for (double v : m) s += v * v;
  return std::sqrt(s);
}

class BarrierSolver {
 public:
  BarrierSolver(const LmiProblem& p, const SdpOptions& o)
      : p_(p), o_(o), n_(p.num_vars), chol_(p.blocks.size()), trial_chol_(p.blocks.size()) {
    for (const auto& b : p.blocks) barrier_degree_ += static_cast<double>(b.dim);
    barrier_degree_ += 1.0;  // ball
  }

  SdpSolution run() {
    SdpSolution sol;
    std::vector<double> x(n_, 0.0);
    double f0_norm = 0.0;
    for (const auto& b : p_.blocks) f0_norm = std::max(f0_norm, frobenius(b.constant));
    double t = -(1.0 + f0_norm);
    double logdet = 0.0;
    if (!factor(x, t, chol_, logdet)) {
      sol.diagnostic = "could not construct a strictly feasible starting point";
      return sol;
    }
    double tau = barrier_degree_ / std::max(1.0, std::abs(t));
    std::size_t iterations = 0;
    double ub = std::numeric_limits<double>::infinity();
    bool breakdown = false;
    bool stalled = false;

    while (true) {
      // Centering on psi(z) = -tau t - sum logdet S_b - log(R^2 - |x|^2).
      while (iterations < o_.max_iterations) {
        if (!newton_direction(x, t, tau)) {
          breakdown = true;
          break;
        }
        const double slope = dot_grad_dir_;
        if (-slope * 0.5 <= 1e-10) break;
        const double psi0 = potential(x, t, tau, logdet);
        double alpha = 1.0;
        bool accepted = false;
        std::vector<double> xt(n_);
        for (int k = 0; k < 60; ++k) {
          for (std::size_t j = 0; j < n_; ++j) xt[j] = x[j] + alpha * dir_[j];
          const double tt = t + alpha * dir_[n_];
          double ld = 0.0;
          if (factor(xt, tt, trial_chol_, ld)) {
            const double psi = potential(xt, tt, tau, ld);
            // psi carries tau * t, so its rounding grows along the path
            const double noise = 1e-14 * (1.0 + std::abs(psi0));
            if (psi <= psi0 + 1e-4 * alpha * slope + noise) {
              if (xt == x && tt == t) break;  // step below resolution
              x = xt;
              t = tt;
              logdet = ld;
              std::swap(chol_, trial_chol_);
              accepted = true;
              break;
            }
          }
          alpha *= 0.5;
        }
        ++iterations;
        if (!accepted) {
          stalled = true;  // no progress possible at this precision
          break;
        }
      }
      // every iterate yields a valid bound; late ones can be looser because
      // the centering residual is amplified by the ball radius
      ub = std::min(ub, dual_bound(x));
      if (!breakdown && newton_direction(x, t, tau)) ub = std::min(ub, corrected_dual_bound());
      const double gap = ub - t;
      if (breakdown || stalled || iterations >= o_.max_iterations) break;
      // barrier_degree / tau bounds the gap at an exact center; the
      // certified bound can lag behind it through centering residuals.
      const double path_gap = barrier_degree_ / tau;
      if (std::min(gap, path_gap) <= std::max(o_.gap_tol, o_.rel_gap_tol * std::abs(t))) break;
      tau /= o_.path_factor;
    }

    sol.x = x;
    sol.margin = t;
    sol.upper_bound = ub;
    sol.iterations = iterations;
    if (t > o_.feas_tol) {
      sol.verified = verify_solution(p_, x, t);
      sol.status = sol.verified ? SdpStatus::Feasible : SdpStatus::Indeterminate;
      if (!sol.verified) sol.diagnostic = "independent re-verification of the margin failed";
    } else if (ub < -o_.feas_tol) {
      sol.status = SdpStatus::Infeasible;
    } else {
      sol.status = SdpStatus::Indeterminate;
      sol.diagnostic = breakdown ? "numerical breakdown: Newton system not positive definite"
                                 : "margin within tolerance of zero";
    }
    if (breakdown && sol.status == SdpStatus::Indeterminate && sol.diagnostic.empty())
      sol.diagnostic = "numerical breakdown";
    return sol;
  }

 private:
  bool factor(const std::vector<double>& x, double t, std::vector<std::vector<double>>& chol,
              double& logdet) const {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    const double slack = p_.x_radius * p_.x_radius - r2;
    if (!(slack > 0.0)) return false;
    logdet = 0.0;
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      const auto& blk = p_.blocks[b];
      auto s = blk.evaluate(x);
      for (std::size_t i = 0; i < blk.dim; ++i) s[i * blk.dim + i] -= t;
      if (!cholesky_lower(s, blk.dim)) return false;
      for (std::size_t i = 0; i < blk.dim; ++i) logdet += 2.0 * std::log(s[i * blk.dim + i]);
      chol[b] = std::move(s);
    }
    return true;
  }

  double potential(const std::vector<double>& x, double t, double tau, double logdet) const {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return -tau * t - logdet - std::log(p_.x_radius * p_.x_radius - r2);
  }

  // Builds gradient and Hessian at (x, t) from chol_, solves for the Newton
  // step into dir_. Returns false if the system cannot be factored.
  bool newton_direction(const std::vector<double>& x, double t, double tau) {
    (void)t;
    const std::size_t m = n_ + 1;
    std::vector<double> h(m * m, 0.0);
    std::vector<double> g(m, 0.0);
    std::vector<double> linv;
    std::vector<double> tmp;
    std::vector<std::vector<double>> packed;

    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      const auto& blk = p_.blocks[b];
      const std::size_t d = blk.dim;
      const std::size_t q = d * (d + 1) / 2;
      invert_lower(chol_[b], linv, d);
      const std::size_t nv = blk.vars.size();
      packed.assign(nv + 1, std::vector<double>(q));
      // G = Linv F Linv^T packed with sqrt(2) off-diagonal weights.
      auto pack_congruence = [&](const std::vector<double>* f, std::vector<double>& out,
                                 double& trace) {
        tmp.assign(d * d, 0.0);
        if (f) {
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k <= i; ++k) {
              const double lik = linv[i * d + k];
              if (lik == 0.0) continue;
              for (std::size_t j = 0; j < d; ++j) tmp[i * d + j] += lik * (*f)[k * d + j];
            }
        } else {
          // F = -I
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k <= i; ++k) tmp[i * d + k] = -linv[i * d + k];
        }
        trace = 0.0;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = i; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k <= j; ++k) s += tmp[i * d + k] * linv[j * d + k];
            if (i == j) {
              trace += s;
              out[pos++] = s;
            } else {
              out[pos++] = std::numbers::sqrt2 * s;
            }
          }
        }
      };
      std::vector<double> traces(nv + 1);
      for (std::size_t k = 0; k < nv; ++k) pack_congruence(&blk.coeffs[k], packed[k], traces[k]);
      pack_congruence(nullptr, packed[nv], traces[nv]);

      for (std::size_t a = 0; a <= nv; ++a) {
        const std::size_t ia = a < nv ? blk.vars[a] : n_;
        g[ia] -= traces[a];
        const auto& va = packed[a];
        for (std::size_t c = a; c <= nv; ++c) {
          const std::size_t ic = c < nv ? blk.vars[c] : n_;
          const auto& vc = packed[c];
          double s = 0.0;
          for (std::size_t e = 0; e < q; ++e) s += va[e] * vc[e];
          h[ia * m + ic] += s;
          if (ia != ic) h[ic * m + ia] += s;
        }
      }
    }
    g[n_] -= tau;
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    const double slack = p_.x_radius * p_.x_radius - r2;
    for (std::size_t j = 0; j < n_; ++j) {
      g[j] += 2.0 * x[j] / slack;
      h[j * m + j] += 2.0 / slack;
      for (std::size_t k = 0; k < n_; ++k) h[j * m + k] += 4.0 * x[j] * x[k] / (slack * slack);
    }

    double max_diag = 0.0;
    for (std::size_t j = 0; j < m; ++j) max_diag = std::max(max_diag, h[j * m + j]);
    double ridge = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::vector<double> l = h;
      for (std::size_t j = 0; j < m; ++j) l[j * m + j] += ridge;
      if (cholesky_lower(l, m)) {
        dir_.assign(g.begin(), g.end());
        for (double& v : dir_) v = -v;
        cholesky_solve(l, m, dir_);
        dot_grad_dir_ = std::inner_product(g.begin(), g.end(), dir_.begin(), 0.0);
        return std::isfinite(dot_grad_dir_);
      }
      ridge = ridge == 0.0 ? 1e-14 * max_diag : ridge * 100.0;
    }
    return false;
  }

  double dual_bound(const std::vector<double>& x) const {
    (void)x;
    std::vector<double> c(n_, 0.0);
    double base = 0.0;
    double total_trace = 0.0;
    std::vector<double> linv;
    std::vector<double> sinv;
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      const auto& blk = p_.blocks[b];
      const std::size_t d = blk.dim;
      invert_lower(chol_[b], linv, d);
      sinv.assign(d * d, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          double s = 0.0;
          for (std::size_t k = i; k < d; ++k) s += linv[k * d + i] * linv[k * d + j];
          sinv[i * d + j] = s;
          sinv[j * d + i] = s;
        }
      for (std::size_t i = 0; i < d; ++i) total_trace += sinv[i * d + i];
      base += std::inner_product(sinv.begin(), sinv.end(), blk.constant.begin(), 0.0);
      for (std::size_t k = 0; k < blk.vars.size(); ++k)
        c[blk.vars[k]] +=
            std::inner_product(sinv.begin(), sinv.end(), blk.coeffs[k].begin(), 0.0);
    }
    double cn = 0.0;
    for (double v : c) cn += v * v;
    return (base + p_.x_radius * std::sqrt(cn)) / total_trace;
  }

  // Dual point Z_b = S^-1 - S^-1 dS S^-1 built from the Newton step dir_ at
  // the current iterate. Near the central path it nearly satisfies the dual
  // equality constraints, which tightens the bound on degenerate problems.
  // Valid whenever every Z_b is positive semidefinite.
  double corrected_dual_bound() const {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> c(n_, 0.0);
    double base = 0.0;
    double total_trace = 0.0;
    std::vector<double> linv;
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      const auto& blk = p_.blocks[b];
      const std::size_t d = blk.dim;
      invert_lower(chol_[b], linv, d);
      std::vector<double> ds(d * d, 0.0);
      for (std::size_t k = 0; k < blk.vars.size(); ++k) {
        const double step = dir_[blk.vars[k]];
        if (step == 0.0) continue;
        for (std::size_t e = 0; e < d * d; ++e) ds[e] += step * blk.coeffs[k][e];
      }
      for (std::size_t i = 0; i < d; ++i) ds[i * d + i] -= dir_[n_];
      // I - Linv dS Linv^T must stay positive semidefinite
      std::vector<double> tmp(d * d, 0.0), core(d * d, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k <= i; ++k)
          for (std::size_t j = 0; j < d; ++j) tmp[i * d + j] += linv[i * d + k] * ds[k * d + j];
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k <= j; ++k) s += tmp[i * d + k] * linv[j * d + k];
          core[i * d + j] = (i == j ? 1.0 : 0.0) - s;
        }
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < i; ++j) core[i * d + j] = core[j * d + i] = 0.5 * (core[i * d + j] + core[j * d + i]);
      std::vector<double> check = core;
      if (!cholesky_lower(check, d)) return inf;
      // Z = Linv^T core Linv
      std::vector<double> z(d * d, 0.0);
      tmp.assign(d * d, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k <= j; ++k) s += core[i * d + k] * linv[k * d + j];
          tmp[i * d + j] = s;
        }
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          double s = 0.0;
          for (std::size_t k = i; k < d; ++k) s += linv[k * d + i] * tmp[k * d + j];
          z[i * d + j] = s;
        }
      for (std::size_t i = 0; i < d; ++i) total_trace += z[i * d + i];
      base += std::inner_product(z.begin(), z.end(), blk.constant.begin(), 0.0);
      for (std::size_t k = 0; k < blk.vars.size(); ++k)
        c[blk.vars[k]] += std::inner_product(z.begin(), z.end(), blk.coeffs[k].begin(), 0.0);
    }
    if (!(total_trace > 0.0)) return inf;
    double cn = 0.0;
    for (double v : c) cn += v * v;
    const double ub = (base + p_.x_radius * std::sqrt(cn)) / total_trace;
    return std::isfinite(ub) ? ub : inf;
  }

  const LmiProblem& p_;
  const SdpOptions& o_;
  std::size_t n_;
  double barrier_degree_ = 0.0;
  std::vector<std::vector<double>> chol_;
  std::vector<std::vector<double>> trial_chol_;
  std::vector<double> dir_;
  double dot_grad_dir_ = 0.0;
};

}  // namespace

SdpSolution solve_margin(const LmiProblem& p, const SdpOptions& opts) {
  p.validate();
  BarrierSolver solver(p, opts);
  return solver.run();
}

namespace {

CMatrix to_cmatrix(const std::vector<double>& m, std::size_t d) {
  CMatrix c(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) c(i, j) = 0.5 * (m[i * d + j] + m[j * d + i]);
  return c;
}

}  // namespace

bool verify_solution(const LmiProblem& p, std::span<const double> x, double t) {
  if (x.size() != p.num_vars) return false;
  const double slack = 1e-12 * (1.0 + std::abs(t));
  for (const auto& blk : p.blocks) {
    const CMatrix f = to_cmatrix(blk.evaluate(x), blk.dim);
    if (!is_positive_definite(f, t - slack)) return false;
  }
  return true;
}

double min_block_eigenvalue(const LmiProblem& p, std::span<const double> x) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& blk : p.blocks) {
    const auto ev = eig_hermitian(to_cmatrix(blk.evaluate(x), blk.dim));
    lo = std::min(lo, ev.front());
  }
  return lo;
}

void write_problem(const LmiProblem& p, std::ostream& out) {
  out << "# roesser lmi problem\n";
  out << "# num_vars " << p.num_vars << "\n";
  out << "# num_blocks " << p.blocks.size() << "\n";
  out << "# x_radius " << std::setprecision(17) << p.x_radius << "\n";
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    out << "# block " << b << " dim " << p.blocks[b].dim << " label "
        << (p.blocks[b].label.empty() ? "-" : p.blocks[b].label) << "\n";
  }
  for (std::size_t j = 0; j < p.var_names.size(); ++j) {
    out << "# var " << (j + 1) << " " << p.var_names[j] << "\n";
  }
  out << "# columns: block var row col value (var 0 = constant term)\n";
  auto emit = [&](std::size_t b, std::size_t var, const std::vector<double>& m, std::size_t d) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        const double v = m[i * d + j];
        if (v != 0.0) out << b << ' ' << var << ' ' << i << ' ' << j << ' ' << v << '\n';
      }
  };
  out << std::setprecision(17);
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const auto& blk = p.blocks[b];
    emit(b, 0, blk.constant, blk.dim);
    for (std::size_t k = 0; k < blk.vars.size(); ++k) emit(b, blk.vars[k] + 1, blk.coeffs[k], blk.dim);
  }
}

LmiProblem read_problem(std::istream& in) {
  LmiProblem p;
  std::string line;
  auto fail = [](const std::string& what) { throw InvalidArgument("read_problem: " + what); };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "num_vars") {
        ls >> p.num_vars;
        p.var_names.assign(p.num_vars, {});
      } else if (key == "num_blocks") {
        std::size_t nb = 0;
        ls >> nb;
        p.blocks.assign(nb, {});
      } else if (key == "x_radius") {
        ls >> p.x_radius;
      } else if (key == "block") {
        std::size_t b = 0, d = 0;
        std::string dim_kw, label_kw, label;
        ls >> b >> dim_kw >> d >> label_kw >> label;
        if (b >= p.blocks.size()) fail("block index out of range");
        p.blocks[b].dim = d;
        p.blocks[b].constant.assign(d * d, 0.0);
        p.blocks[b].label = label == "-" ? "" : label;
      } else if (key == "var") {
        std::size_t j = 0;
        std::string name;
        ls >> j >> name;
        if (j == 0 || j > p.var_names.size()) fail("variable index out of range");
        p.var_names[j - 1] = name;
      }
      continue;
    }
    std::size_t b = 0, var = 0, i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> b >> var >> i >> j >> v)) fail("malformed entry line: " + line);
    if (b >= p.blocks.size()) fail("block index out of range");
    auto& blk = p.blocks[b];
    const std::size_t d = blk.dim;
    if (i >= d || j >= d) fail("row/col out of range");
    std::vector<double>* target = &blk.constant;
    if (var > 0) {
      auto it = std::find(blk.vars.begin(), blk.vars.end(), var - 1);
      if (it == blk.vars.end()) {
        blk.add_term(var - 1, std::vector<double>(d * d, 0.0));
        target = &blk.coeffs.back();
      } else {
        target = &blk.coeffs[static_cast<std::size_t>(it - blk.vars.begin())];
      }
    }
    (*target)[i * d + j] = v;
    (*target)[j * d + i] = v;
  }
  return p;
}

}  // namespace roesser
