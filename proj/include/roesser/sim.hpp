#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "roesser/model.hpp"

namespace roesser {

struct SimConfig {
  std::size_t j1 = 200;
  std::size_t j2 = 200;
  std::uint64_t boundary_seed = 1;
  std::size_t trials = 8;
  std::size_t decay_window = 50;
  /// Boundary vectors are nonzero only for indices below this bound, so the
  /// grid response is the free response to a finite excitation.
  std::size_t boundary_support = 8;
  /// Multiplies all boundary data (linearity checks).
  double boundary_scale = 1.0;

  void validate() const;
};

enum class SimVerdict { Decaying, Growing, Inconclusive };
std::string_view to_string(SimVerdict v) noexcept;

struct SimTrial {
  /// s[d] = max state norm over interior grid points (j1, j2 >= 1) with
  /// j1 + j2 = d, for d = 0 ... j1 + j2 - 2. Zero where no interior point
  /// lies on the anti-diagonal.
  std::vector<double> s;
  /// log s[d]; finite even where s[d] over- or underflows.
  std::vector<double> log_s;
  /// exp of the least-squares slope of log s over the fit window.
  double rate = 0.0;
  std::size_t fit_first = 0;
  std::size_t fit_last = 0;
};

struct SimReport {
  SimVerdict verdict = SimVerdict::Inconclusive;
  std::vector<SimTrial> trials;
  double max_rate = 0.0;
  SimConfig config;
  std::string model_name;
};

/// Iterates the shift/shift recursion anti-diagonal by anti-diagonal with
/// seeded unit-norm boundary data. Throws UnsupportedKind for derivative
/// dimensions.
SimReport simulate(const RoesserModel& m, const SimConfig& cfg = {});

/// "d,s" header then one row per anti-diagonal of the given trial.
void write_csv(const SimReport& r, std::size_t trial, std::ostream& out);

}  // namespace roesser
