#include "roesser/certify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "roesser/errors.hpp"
#include "roesser/parallel.hpp"
#include "roesser/transfer.hpp"

namespace roesser {

std::string_view to_string(CertifyVerdict v) noexcept {
  switch (v) {
    case CertifyVerdict::CertifiedStable:
      return "certified_stable";
    case CertifyVerdict::GridStable:
      return "grid_stable";
    case CertifyVerdict::Unstable:
      return "unstable";
    case CertifyVerdict::Indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

std::string_view to_string(BasisChoice b) noexcept {
  switch (b) {
    case BasisChoice::Auto:
      return "auto";
    case BasisChoice::Monomial:
      return "monomial";
    case BasisChoice::Moebius:
      return "moebius";
  }
  return "auto";
}

Basis resolve_basis(BasisChoice choice, DimensionKind kind2) {
  switch (choice) {
    case BasisChoice::Monomial:
      return Basis::Monomial;
    case BasisChoice::Moebius:
      if (kind2 != DimensionKind::Derivative)
        throw InvalidArgument("the moebius basis requires a derivative second dimension");
      return Basis::Moebius;
    case BasisChoice::Auto:
      break;
  }
  return kind2 == DimensionKind::Derivative ? Basis::Moebius : Basis::Monomial;
}

void CertifyConfig::validate() const {
  sweep.validate();
  if (min_degree > max_degree) throw InvalidArgument("min_degree exceeds max_degree");
  if (max_degree > 64) throw InvalidArgument("max_degree above 64 is not supported");
  if (coarse_samples < 4) throw InvalidArgument("coarse_samples must be at least 4");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be finite and >= 0");
}

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

double max_eig(const CMatrix& h) { return eig_hermitian(h).back(); }
double min_eig(const CMatrix& h) { return eig_hermitian(h).front(); }

// Highest power whose coefficient is not negligible against the largest one.
std::size_t effective_degree(const PolynomialLyapunov& p) {
  double scale = 0.0;
  for (const auto& c : p.coeffs) scale = std::max(scale, c.max_abs());
  std::size_t e = 0;
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
    if (p.coeffs[i].max_abs() > 1e-10 * scale) e = i;
  }
  return e;
}

struct SampleCheck {
  double stein_max = 0.0;
  double p_min = 0.0;
  bool ok = false;
  double violation = 0.0;
  std::string error;
};

// Monomial P of effective degree e > 0 grows like |delta|^e along the
// imaginary axis; the normalized limits herm((+-i)^e P_e) must satisfy the
// strict inequalities with M at infinity.
SampleCheck check_monomial_infinity(const RoesserModel& m, const PolynomialLyapunov& p,
                                    std::size_t e) {
  SampleCheck out;
  const CMatrix minf = m_delta(m, ExtendedPoint::infinity());
  const SteinCoefficients c1 = SteinCoefficients::from(m.region1());
  out.stein_max = -std::numeric_limits<double>::infinity();
  out.p_min = std::numeric_limits<double>::infinity();
  out.ok = true;
  for (const double sign : {1.0, -1.0}) {
    Complex w{1.0, 0.0};
    for (std::size_t i = 0; i < e; ++i) w *= Complex{0.0, sign};
    const CMatrix pe = herm_part(w * p.coeffs[e]);
    const CMatrix s = stein_form(c1, minf, pe);
    out.stein_max = std::max(out.stein_max, max_eig(s));
    out.p_min = std::min(out.p_min, min_eig(pe));
    out.ok = out.ok && is_positive_definite(pe, 0.0) &&
             is_positive_definite(Complex{-1.0} * s, 0.0);
  }
  out.violation = std::max(out.stein_max, -out.p_min);
  return out;
}

SampleCheck check_sample(const RoesserModel& m, const PolynomialLyapunov& p,
                         const ExtendedPoint& delta, double margin) {
  SampleCheck out;
  try {
    if (delta.infinite && p.basis == Basis::Monomial) {
      const std::size_t e = effective_degree(p);
      if (e > 0) return check_monomial_infinity(m, p, e);
    }
    PolynomialLyapunov trimmed;
    const PolynomialLyapunov* use = &p;
    if (delta.infinite && p.basis == Basis::Monomial) {
      trimmed.basis = p.basis;
      trimmed.coeffs = {p.coeffs.front()};
      use = &trimmed;
    }
    const CMatrix pv = use->evaluate(delta);
    const CMatrix s = stein_form(SteinCoefficients::from(m.region1()), m_delta(m, delta), pv);
    out.stein_max = max_eig(s);
    out.p_min = min_eig(pv);
    out.ok = is_positive_definite(pv, margin) && is_positive_definite(Complex{-1.0} * s, margin);
    out.violation = std::max(out.stein_max + margin, margin - out.p_min);
  } catch (const Error& e) {
    out.ok = false;
    out.error = e.what();
    out.violation = std::numeric_limits<double>::infinity();
  }
  return out;
}

struct FineResult {
  BoundaryCheck check;
  std::vector<BoundaryPoint> points;
  std::vector<SampleCheck> samples;
};

FineResult fine_check(const RoesserModel& m, const CMatrix& y, const PolynomialLyapunov& p,
                      double eps, const SweepConfig& cfg) {
  FineResult r;
  const double margin = 0.5 * eps;
  r.points = boundary_samples(m.kind2(), cfg.samples_per_dim, cfg.include_infinity);
  r.samples.resize(r.points.size());
  parallel_for(r.points.size(),
               [&](std::size_t i) { r.samples[i] = check_sample(m, p, r.points[i].point, margin); });

  BoundaryCheck& bc = r.check;
  bc.samples_checked = r.points.size();
  bc.max_stein = -std::numeric_limits<double>::infinity();
  bc.min_p = std::numeric_limits<double>::infinity();
  bool all_ok = true;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto& s = r.samples[i];
    if (!s.error.empty()) {
      all_ok = false;
      if (bc.diagnostic.empty()) bc.diagnostic = s.error;
    } else {
      bc.max_stein = std::max(bc.max_stein, s.stein_max);
      bc.min_p = std::min(bc.min_p, s.p_min);
    }
    all_ok = all_ok && s.ok;
    if (s.violation > worst) {
      worst = s.violation;
      bc.worst_point = r.points[i];
    }
  }
  try {
    bc.y_ok = is_positive_definite(y, margin) &&
              is_positive_definite(Complex{-1.0} * stein_a22(m, y), margin);
  } catch (const Error& e) {
    bc.y_ok = false;
    if (bc.diagnostic.empty()) bc.diagnostic = e.what();
  }
  bc.passed = all_ok && bc.y_ok;
  if (!bc.passed && bc.diagnostic.empty()) {
    bc.diagnostic = bc.y_ok ? "boundary inequality violated between LMI samples"
                            : "Y inequality violated";
  }
  return r;
}

// Local maxima of the violation along the boundary, largest first.
std::vector<BoundaryPoint> pick_violators(const FineResult& f, std::size_t count) {
  const std::size_t n = f.samples.size();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f.samples[i].violation;
    if (!(v > 0.0) || !f.samples[i].error.empty()) continue;
    const double prev = f.samples[(i + n - 1) % n].violation;
    const double next = f.samples[(i + 1) % n].violation;
    if (v >= prev && v >= next) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return f.samples[a].violation > f.samples[b].violation;
  });
  if (idx.size() > count) idx.resize(count);
  std::vector<BoundaryPoint> out;
  for (std::size_t i : idx) out.push_back(f.points[i]);
  return out;
}

bool contains_point(const std::vector<BoundaryPoint>& pts, const BoundaryPoint& q) {
  return std::any_of(pts.begin(), pts.end(), [&](const BoundaryPoint& s) {
    return s.point.infinite == q.point.infinite && s.point.value == q.point.value;
  });
}

}  // namespace

BoundaryCheck check_boundary(const RoesserModel& m, const CMatrix& y, const PolynomialLyapunov& p,
                             double eps, const SweepConfig& cfg) {
  return fine_check(m, y, p, eps, cfg).check;
}

InteriorResult interior_check(const RoesserModel& m, const PolynomialLyapunov& p,
                              const SweepConfig& cfg) {
  (void)cfg;
  static constexpr double radii[] = {0.0, 0.25, 0.5, 0.75, 0.9, 0.99};
  constexpr std::size_t angles = 256;
  const std::size_t total = std::size(radii) * angles;
  const bool derivative = m.kind2() == DimensionKind::Derivative;
  std::vector<Complex> pts(total);
  for (std::size_t r = 0; r < std::size(radii); ++r) {
    for (std::size_t k = 0; k < angles; ++k) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / angles;
      const Complex z = std::polar(radii[r], th);
      pts[r * angles + k] = derivative ? (1.0 + z) / (1.0 - z) : z;
    }
  }
  std::vector<SampleCheck> res(total);
  parallel_for(total, [&](std::size_t i) {
    res[i] = check_sample(m, p, ExtendedPoint::finite(pts[i]), 0.0);
  });

  InteriorResult out;
  out.samples_checked = total;
  out.passed = true;
  out.worst_stein = -std::numeric_limits<double>::infinity();
  out.min_p = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < total; ++i) {
    const auto& s = res[i];
    if (!s.error.empty()) {
      out.passed = false;
      if (out.diagnostic.empty()) out.diagnostic = s.error;
      continue;
    }
    out.passed = out.passed && s.ok;
    if (s.stein_max > out.worst_stein) {
      out.worst_stein = s.stein_max;
      out.worst_point = ExtendedPoint::finite(pts[i]);
    }
    out.min_p = std::min(out.min_p, s.p_min);
  }
  if (!out.passed && out.diagnostic.empty())
    out.diagnostic = "inequality fails at an interior point of the reciprocal region";
  return out;
}

CertificationReport certify(const RoesserModel& m, const CertifyConfig& cfg) {
  cfg.validate();
  const auto t_total = clock_type::now();
  CertificationReport rep;
  rep.model_name = m.name();
  rep.config = cfg;
  rep.basis = resolve_basis(cfg.basis, m.kind2());
  rep.eps = cfg.eps > 0.0 ? cfg.eps : default_eps(m);

  auto finish = [&](CertifyVerdict v) -> CertificationReport& {
    rep.verdict = v;
    rep.wall_time.emplace_back("total", seconds_since(t_total));
    return rep;
  };

  auto t0 = clock_type::now();
  rep.a22 = check_a22(m, cfg.sweep.margin_tol);
  rep.wall_time.emplace_back("a22", seconds_since(t0));
  if (rep.a22->status == OracleStatus::Unstable) {
    rep.diagnostic = "A22 has an eigenvalue outside the stability region of dimension 2";
    return finish(CertifyVerdict::Unstable);
  }
  if (rep.a22->status == OracleStatus::Indeterminate) {
    rep.diagnostic = "A22 is marginal: " + rep.a22->diagnostic;
    return finish(CertifyVerdict::Indeterminate);
  }

  t0 = clock_type::now();
  rep.boundary_sweep = sweep_2d(m, cfg.sweep);
  rep.wall_time.emplace_back("oracle", seconds_since(t0));
  if (rep.boundary_sweep->status == OracleStatus::Unstable) {
    rep.diagnostic = "M(delta) has an eigenvalue outside the stability region on the boundary";
    return finish(CertifyVerdict::Unstable);
  }

  double lmi_time = 0.0;
  double verify_time = 0.0;
  double interior_time = 0.0;
  const auto coarse = boundary_samples(m.kind2(), cfg.coarse_samples, true);
  for (std::size_t nu = cfg.min_degree; nu <= cfg.max_degree; ++nu) {
    std::vector<BoundaryPoint> samples = coarse;
    for (std::size_t round = 0; round <= cfg.refine_rounds; ++round) {
      DegreeAttempt att;
      att.degree = nu;
      att.round = round;
      att.lmi_samples = samples.size();
      t0 = clock_type::now();
      SdpSolution sol;
      try {
        const LmiProblem prob = assemble_lmi(m, nu, rep.basis, samples, rep.eps);
        att.num_vars = prob.num_vars;
        sol = solve_margin(prob, cfg.sdp);
      } catch (const Error& e) {
        att.note = e.what();
        lmi_time += seconds_since(t0);
        rep.attempts.push_back(std::move(att));
        break;
      }
      lmi_time += seconds_since(t0);
      att.sdp_status = sol.status;
      att.margin = sol.margin;
      att.upper_bound = sol.upper_bound;
      att.iterations = sol.iterations;
      att.note = sol.diagnostic;
      rep.lmi_samples = samples;
      if (sol.status != SdpStatus::Feasible) {
        rep.attempts.push_back(std::move(att));
        break;
      }

      const LyapunovLayout layout(m.k1(), m.k2(), nu, rep.basis);
      const CMatrix y = layout.unpack_y(sol.x);
      const PolynomialLyapunov p = layout.unpack_p(sol.x);
      t0 = clock_type::now();
      FineResult fine = fine_check(m, y, p, rep.eps, cfg.sweep);
      verify_time += seconds_since(t0);
      att.boundary = fine.check;
      if (!fine.check.passed) {
        std::vector<BoundaryPoint> extra;
        if (fine.check.y_ok) {
          for (auto& q : pick_violators(fine, cfg.refine_points))
            if (!contains_point(samples, q)) extra.push_back(q);
        }
        rep.attempts.push_back(std::move(att));
        if (extra.empty()) break;
        samples.insert(samples.end(), extra.begin(), extra.end());
        continue;
      }

      t0 = clock_type::now();
      InteriorResult inner = interior_check(m, p, cfg.sweep);
      interior_time += seconds_since(t0);
      att.interior = inner;
      rep.attempts.push_back(std::move(att));
      if (!inner.passed) break;

      rep.certifying_degree = nu;
      rep.y = y;
      rep.p = p;
      rep.solution = sol.x;
      rep.sdp_margin = sol.margin;
      rep.boundary_check = fine.check;
      rep.interior = inner;
      rep.wall_time.emplace_back("lmi", lmi_time);
      rep.wall_time.emplace_back("verify", verify_time);
      rep.wall_time.emplace_back("interior", interior_time);
      return finish(CertifyVerdict::CertifiedStable);
    }
  }
  rep.wall_time.emplace_back("lmi", lmi_time);
  rep.wall_time.emplace_back("verify", verify_time);
  rep.wall_time.emplace_back("interior", interior_time);
  if (!rep.attempts.empty()) rep.sdp_margin = rep.attempts.back().margin;
  rep.diagnostic = "no certificate found up to degree " + std::to_string(cfg.max_degree) +
                   "; increase max-degree (the model may also be marginally stable)";
  return finish(CertifyVerdict::Indeterminate);
}

CertificationReport certify(const RoesserModel& m, std::size_t max_degree, BasisChoice basis,
                            const SweepConfig& sweep) {
  CertifyConfig cfg;
  cfg.max_degree = max_degree;
  cfg.basis = basis;
  cfg.sweep = sweep;
  return certify(m, cfg);
}

CertificationReport certify_nd(const NdRoesserModel& m, const CertifyConfig& cfg) {
  if (m.n() == 2) {
    CertificationReport r = certify(m.to_2d(), cfg);
    return r;
  }
  cfg.validate();
  const auto t0 = clock_type::now();
  CertificationReport rep;
  rep.model_name = m.name();
  rep.n = m.n();
  rep.config = cfg;
  rep.boundary_sweep = sweep_nd(m, cfg.sweep);
  switch (rep.boundary_sweep->status) {
    case OracleStatus::Stable:
      rep.verdict = CertifyVerdict::GridStable;
      rep.diagnostic = "stable on the sampled boundary grid; no LMI certificate for n >= 3";
      break;
    case OracleStatus::Unstable:
      rep.verdict = CertifyVerdict::Unstable;
      break;
    case OracleStatus::Indeterminate:
      rep.verdict = CertifyVerdict::Indeterminate;
      rep.diagnostic = rep.boundary_sweep->diagnostic;
      break;
  }
  rep.wall_time.emplace_back("oracle", seconds_since(t0));
  rep.wall_time.emplace_back("total", seconds_since(t0));
  return rep;
}

}  // namespace roesser
