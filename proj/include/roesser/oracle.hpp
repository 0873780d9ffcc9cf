#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "roesser/model.hpp"
#include "roesser/transfer.hpp"

namespace roesser {

struct SweepConfig {
  std::size_t samples_per_dim = 2048;
  double margin_tol = 1e-9;
  bool include_infinity = true;

  void validate() const;
};

enum class OracleStatus { Stable, Unstable, Indeterminate };
std::string_view to_string(OracleStatus s) noexcept;

/// Which check produced the verdict.
enum class OracleStage { A22, Boundary, Subsystem };
std::string_view to_string(OracleStage s) noexcept;

struct OracleVerdict {
  OracleStatus status = OracleStatus::Indeterminate;
  OracleStage stage = OracleStage::Boundary;
  /// Boundary stage: one point per swept dimension. A22 stage: the worst
  /// eigenvalue of A22, stored as a finite point.
  std::vector<BoundaryPoint> worst_point;
  /// Max over samples of the stability indicator max_l f(R1, l).
  double worst_value = 0.0;
  std::size_t samples_checked = 0;
  /// Largest indicator change between neighbouring samples (grid diagnostic).
  double max_adjacent_change = 0.0;
  std::string diagnostic;
};

/// Region-stability of A22 via its spectrum.
OracleVerdict check_a22(const RoesserModel& m, double tol);

/// Dense sweep of the boundary of D2. Assumes check_a22 returned Stable.
OracleVerdict sweep_2d(const RoesserModel& m, const SweepConfig& cfg);

/// check_a22 followed by sweep_2d.
OracleVerdict oracle_2d(const RoesserModel& m, const SweepConfig& cfg);

/// Grid sweep over the product of the boundaries of dimensions 2..n, preceded
/// by the same oracle applied to the trailing (n-1)D subsystem. Throws
/// ConfigTooLarge when the grid exceeds 1e7 points.
OracleVerdict sweep_nd(const NdRoesserModel& m, const SweepConfig& cfg);

inline constexpr std::size_t kMaxGridPoints = 10'000'000;

/// max over eigenvalues l of X of f(R, l). Throws NoConvergence.
double spectral_indicator(const RegionDescriptor& r, const CMatrix& x);

}  // namespace roesser
