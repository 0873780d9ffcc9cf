#include "roesser/sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>

#include "roesser/errors.hpp"
#include "roesser/parallel.hpp"

namespace roesser {

std::string_view to_string(SimVerdict v) noexcept {
  switch (v) {
    case SimVerdict::Decaying:
      return "decaying";
    case SimVerdict::Growing:
      return "growing";
    case SimVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

void SimConfig::validate() const {
  if (j1 < 10 || j2 < 10) throw InvalidArgument("simulation grid must be at least 10x10");
  if (trials == 0) throw InvalidArgument("trials must be positive");
  if (decay_window < 2) throw InvalidArgument("decay_window must be at least 2");
  if (decay_window + 2 > std::min(j1, j2))
    throw InvalidArgument("decay_window does not fit in the grid");
  if (boundary_support == 0) throw InvalidArgument("boundary_support must be positive");
  if (!std::isfinite(boundary_scale) || boundary_scale == 0.0)
    throw InvalidArgument("boundary_scale must be finite and nonzero");
}

namespace {

constexpr double kRateTol = 1e-3;

std::vector<std::vector<double>> unit_vectors(std::mt19937_64& rng, std::size_t count,
                                              std::size_t dim, double scale) {
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> out(count, std::vector<double>(dim));
  for (auto& v : out) {
    double nrm = 0.0;
    do {
      nrm = 0.0;
      for (double& e : v) {
        e = g(rng);
        nrm += e * e;
      }
    } while (nrm == 0.0);
    nrm = std::sqrt(nrm);
    for (double& e : v) e *= scale / nrm;
  }
  return out;
}

struct RealBlocks {
  std::size_t k1, k2;
  std::vector<double> a11, a12, a21, a22;
};

std::vector<double> real_part(const CMatrix& m) {
  std::vector<double> out;
  for (const auto& e : m.entries()) out.push_back(e.real());
  return out;
}

// y += A x for a dense row-major rows x cols matrix.
void gemv_add(const std::vector<double>& a, std::size_t rows, std::size_t cols, const double* x,
              double* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += a[i * cols + j] * x[j];
    y[i] += s;
  }
}

SimTrial run_trial(const RealBlocks& b, const SimConfig& cfg, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint64_t>(cfg.boundary_seed),
                    static_cast<std::uint64_t>(trial)};
  std::mt19937_64 rng(seq);
  const std::size_t support1 = std::min(cfg.boundary_support, cfg.j2);
  const std::size_t support2 = std::min(cfg.boundary_support, cfg.j1);
  const auto bnd1 = unit_vectors(rng, support1, b.k1, cfg.boundary_scale);  // x1(0, j2)
  const auto bnd2 = unit_vectors(rng, support2, b.k2, cfg.boundary_scale);  // x2(j1, 0)

  const std::size_t k = b.k1 + b.k2;
  const std::size_t dmax = cfg.j1 + cfg.j2 - 2;
  SimTrial out;
  out.s.assign(dmax + 1, 0.0);
  out.log_s.assign(dmax + 1, -std::numeric_limits<double>::infinity());

  // State of anti-diagonal d indexed by j1, stored as exp(-log_scale) * x.
  std::vector<double> cur(cfg.j1 * k, 0.0);
  std::vector<double> next(cfg.j1 * k, 0.0);
  double log_scale = 0.0;
  for (std::size_t d = 0; d <= dmax; ++d) {
    const std::size_t lo = d >= cfg.j2 ? d - (cfg.j2 - 1) : 0;
    const std::size_t hi = std::min(d, cfg.j1 - 1);
    std::fill(next.begin(), next.end(), 0.0);
    const double inj = std::exp(-log_scale);
    for (std::size_t i = lo; i <= hi; ++i) {
      const std::size_t j = d - i;
      double* x = &next[i * k];
      // x1(i, j): boundary at i = 0, else from (i - 1, j)
      if (i == 0) {
        if (j < support1)
          for (std::size_t r = 0; r < b.k1; ++r) x[r] = inj * bnd1[j][r];
      } else {
        const double* p = &cur[(i - 1) * k];
        gemv_add(b.a11, b.k1, b.k1, p, x);
        gemv_add(b.a12, b.k1, b.k2, p + b.k1, x);
      }
      // x2(i, j): boundary at j = 0, else from (i, j - 1)
      if (j == 0) {
        if (i < support2)
          for (std::size_t r = 0; r < b.k2; ++r) x[b.k1 + r] = inj * bnd2[i][r];
      } else {
        const double* p = &cur[i * k];
        gemv_add(b.a21, b.k2, b.k1, p, x + b.k1);
        gemv_add(b.a22, b.k2, b.k2, p + b.k1, x + b.k1);
      }
    }
    double all_max = 0.0;
    double interior_max = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
      double nrm = 0.0;
      for (std::size_t r = 0; r < k; ++r) nrm += next[i * k + r] * next[i * k + r];
      nrm = std::sqrt(nrm);
      all_max = std::max(all_max, nrm);
      if (i >= 1 && d - i >= 1) interior_max = std::max(interior_max, nrm);
    }
    if (interior_max > 0.0) {
      out.log_s[d] = log_scale + std::log(interior_max);
      out.s[d] = std::exp(out.log_s[d]);
    }
    if (all_max > 0.0) {
      for (std::size_t i = lo; i <= hi; ++i)
        for (std::size_t r = 0; r < k; ++r) next[i * k + r] /= all_max;
      log_scale += std::log(all_max);
    }
    std::swap(cur, next);
  }

  // Fit over the last decay_window anti-diagonals whose interior points all
  // lie inside the grid.
  out.fit_last = std::min(cfg.j1, cfg.j2) - 1;
  out.fit_first = out.fit_last + 1 - cfg.decay_window;
  bool vanished = false;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(cfg.decay_window);
  for (std::size_t d = out.fit_first; d <= out.fit_last; ++d) {
    if (!std::isfinite(out.log_s[d])) {
      vanished = true;
      break;
    }
    const double x = static_cast<double>(d);
    sx += x;
    sy += out.log_s[d];
    sxx += x * x;
    sxy += x * out.log_s[d];
  }
  out.rate = vanished ? 0.0 : std::exp((n * sxy - sx * sy) / (n * sxx - sx * sx));
  return out;
}

}  // namespace

SimReport simulate(const RoesserModel& m, const SimConfig& cfg) {
  cfg.validate();
  if (m.kind1() != DimensionKind::Shift || m.kind2() != DimensionKind::Shift) {
    throw UnsupportedKind("simulation requires both dimensions of kind shift");
  }
  const RealBlocks b{m.k1(), m.k2(), real_part(m.a11()), real_part(m.a12()), real_part(m.a21()),
                     real_part(m.a22())};
  SimReport rep;
  rep.config = cfg;
  rep.model_name = m.name();
  rep.trials.resize(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t t) { rep.trials[t] = run_trial(b, cfg, t); });

  bool all_decay = true;
  bool any_grow = false;
  for (const auto& t : rep.trials) {
    rep.max_rate = std::max(rep.max_rate, t.rate);
    all_decay = all_decay && t.rate < 1.0 - kRateTol;
    any_grow = any_grow || t.rate > 1.0 + kRateTol;
  }
  rep.verdict = all_decay ? SimVerdict::Decaying
                          : (any_grow ? SimVerdict::Growing : SimVerdict::Inconclusive);
  return rep;
}

void write_csv(const SimReport& r, std::size_t trial, std::ostream& out) {
  if (trial >= r.trials.size()) throw InvalidArgument("write_csv: no such trial");
  out << "d,s\n" << std::setprecision(17);
  const auto& s = r.trials[trial].s;
  for (std::size_t d = 0; d < s.size(); ++d) out << d << ',' << s[d] << '\n';
}

}  // namespace roesser
