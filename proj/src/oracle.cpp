#include "roesser/oracle.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "roesser/errors.hpp"
#include "roesser/parallel.hpp"

namespace roesser {

void SweepConfig::validate() const {
  if (samples_per_dim < 16) throw InvalidArgument("samples_per_dim must be at least 16");
  if (!(margin_tol >= 0.0)) throw InvalidArgument("margin_tol must be nonnegative");
}

std::string_view to_string(OracleStatus s) noexcept {
  switch (s) {
    case OracleStatus::Stable:
      return "stable";
    case OracleStatus::Unstable:
      return "unstable";
    case OracleStatus::Indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

std::string_view to_string(OracleStage s) noexcept {
  switch (s) {
    case OracleStage::A22:
      return "a22";
    case OracleStage::Boundary:
      return "boundary";
    case OracleStage::Subsystem:
      return "subsystem";
  }
  return "boundary";
}

double spectral_indicator(const RegionDescriptor& r, const CMatrix& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Complex& l : eig_general(x)) worst = std::max(worst, f_region(r, l));
  return worst;
}

namespace {

OracleStatus classify(double worst, double tol) {
  // f >= 0 is the closed instability set.
  if (worst >= 0.0) return OracleStatus::Unstable;
  if (worst < -tol) return OracleStatus::Stable;
  return OracleStatus::Indeterminate;
}

struct SampleResult {
  double value = 0.0;
  std::optional<std::string> error;
};

// Deterministic reduction of per-sample indicators in index order.
template <typename PointOf>
OracleVerdict reduce_samples(const std::vector<SampleResult>& results, double tol,
                             PointOf point_of) {
  OracleVerdict v;
  v.stage = OracleStage::Boundary;
  v.samples_checked = results.size();
  v.worst_value = -std::numeric_limits<double>::infinity();
  std::size_t worst_index = 0;
  std::optional<std::size_t> first_error;
  bool have_prev = false;
  double prev = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (r.error) {
      if (!first_error) first_error = i;
      have_prev = false;
      continue;
    }
    if (r.value > v.worst_value) {
      v.worst_value = r.value;
      worst_index = i;
    }
    if (have_prev) v.max_adjacent_change = std::max(v.max_adjacent_change, std::abs(r.value - prev));
    prev = r.value;
    have_prev = true;
  }
  if (v.worst_value >= 0.0) {
    v.status = OracleStatus::Unstable;
    v.worst_point = point_of(worst_index);
  } else if (first_error) {
    v.status = OracleStatus::Indeterminate;
    v.worst_point = point_of(*first_error);
    v.diagnostic = *results[*first_error].error;
    if (!std::isfinite(v.worst_value)) v.worst_value = 0.0;
  } else {
    v.status = classify(v.worst_value, tol);
    v.worst_point = point_of(worst_index);
  }
  return v;
}

}  // namespace

OracleVerdict check_a22(const RoesserModel& m, double tol) {
  OracleVerdict v;
  v.stage = OracleStage::A22;
  const RegionDescriptor r2 = m.region2();
  try {
    const auto eig = eig_general(m.a22());
    v.samples_checked = eig.size();
    v.worst_value = -std::numeric_limits<double>::infinity();
    for (const Complex& l : eig) {
      const double f = f_region(r2, l);
      if (f > v.worst_value) {
        v.worst_value = f;
        v.worst_point = {BoundaryPoint::at(l)};
      }
    }
    v.status = classify(v.worst_value, tol);
  } catch (const NoConvergence& e) {
    v.status = OracleStatus::Indeterminate;
    v.diagnostic = e.what();
  }
  return v;
}

OracleVerdict sweep_2d(const RoesserModel& m, const SweepConfig& cfg) {
  cfg.validate();
  const auto pts = boundary_samples(m.kind2(), cfg.samples_per_dim, cfg.include_infinity);
  const RegionDescriptor r1 = m.region1();
  std::vector<SampleResult> results(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    try {
      results[i].value = spectral_indicator(r1, m_delta(m, pts[i]));
    } catch (const Error& e) {
      results[i].error = e.what();
    }
  });
  return reduce_samples(results, cfg.margin_tol,
                        [&](std::size_t i) { return std::vector<BoundaryPoint>{pts[i]}; });
}

OracleVerdict oracle_2d(const RoesserModel& m, const SweepConfig& cfg) {
  cfg.validate();
  OracleVerdict a22 = check_a22(m, cfg.margin_tol);
  if (a22.status != OracleStatus::Stable) return a22;
  return sweep_2d(m, cfg);
}

OracleVerdict sweep_nd(const NdRoesserModel& m, const SweepConfig& cfg) {
  cfg.validate();
  if (m.n() == 2) return oracle_2d(m.to_2d(), cfg);

  std::vector<std::vector<BoundaryPoint>> axes;
  double total = 1.0;
  for (std::size_t d = 1; d < m.n(); ++d) {
    axes.push_back(boundary_samples(m.kinds()[d], cfg.samples_per_dim, cfg.include_infinity));
    total *= static_cast<double>(axes.back().size());
  }
  if (total > static_cast<double>(kMaxGridPoints)) {
    throw ConfigTooLarge("sweep_nd: grid of " + std::to_string(static_cast<long double>(total)) +
                         " points exceeds the cap of " + std::to_string(kMaxGridPoints));
  }

  OracleVerdict sub = sweep_nd(m.trailing_subsystem(), cfg);
  if (sub.status != OracleStatus::Stable) {
    sub.stage = OracleStage::Subsystem;
    return sub;
  }

  const std::size_t count = static_cast<std::size_t>(total);
  const std::size_t dims = axes.size();
  auto point_of = [&](std::size_t index) {
    std::vector<BoundaryPoint> p(dims);
    for (std::size_t d = dims; d-- > 0;) {
      p[d] = axes[d][index % axes[d].size()];
      index /= axes[d].size();
    }
    return p;
  };

  const LftEvaluator lft(m);
  const RegionDescriptor r1 = RegionDescriptor::for_kind(m.kinds()[0]);
  std::vector<SampleResult> results(count);
  parallel_for(count, [&](std::size_t i) {
    const auto p = point_of(i);
    std::vector<ExtendedPoint> ext(dims);
    for (std::size_t d = 0; d < dims; ++d) ext[d] = p[d].point;
    try {
      results[i].value = spectral_indicator(r1, lft(ext));
    } catch (const Error& e) {
      results[i].error = e.what();
    }
  });
  return reduce_samples(results, cfg.margin_tol, point_of);
}

}  // namespace roesser
