#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "roesser/lyapunov.hpp"
#include "roesser/model.hpp"
#include "roesser/oracle.hpp"
#include "roesser/sdp.hpp"

namespace roesser {

enum class CertifyVerdict { CertifiedStable, GridStable, Unstable, Indeterminate };
std::string_view to_string(CertifyVerdict v) noexcept;

/// Auto picks Moebius for a derivative second dimension, Monomial otherwise.
enum class BasisChoice { Auto, Monomial, Moebius };
std::string_view to_string(BasisChoice b) noexcept;
Basis resolve_basis(BasisChoice choice, DimensionKind kind2);

struct CertifyConfig {
  std::size_t min_degree = 0;
  std::size_t max_degree = 6;
  BasisChoice basis = BasisChoice::Auto;
  /// Boundary points used to assemble the LMIs.
  std::size_t coarse_samples = 64;
  /// Rounds that add the worst fine-sweep violators to the LMI samples.
  std::size_t refine_rounds = 3;
  std::size_t refine_points = 8;
  /// LMI margin; 0 selects default_eps.
  double eps = 0.0;
  SweepConfig sweep;
  SdpOptions sdp{1e-8, 1e-9, 1e-4, 500, 0.2};

  void validate() const;
};

struct InteriorResult {
  bool passed = false;
  std::size_t samples_checked = 0;
  /// Point with the largest max eigenvalue of the Stein form.
  ExtendedPoint worst_point;
  double worst_stein = 0.0;
  double min_p = 0.0;
  std::string diagnostic;
};

/// Verification of a candidate (Y, P) on the fine boundary grid.
struct BoundaryCheck {
  bool passed = false;
  std::size_t samples_checked = 0;
  /// Largest eigenvalue of stein_m over the grid (must be < -eps/2).
  double max_stein = 0.0;
  /// Smallest eigenvalue of P(delta) over the grid (must be > eps/2).
  double min_p = 0.0;
  BoundaryPoint worst_point;
  bool y_ok = false;
  std::string diagnostic;
};

struct DegreeAttempt {
  std::size_t degree = 0;
  std::size_t round = 0;
  std::size_t lmi_samples = 0;
  std::size_t num_vars = 0;
  SdpStatus sdp_status = SdpStatus::Indeterminate;
  double margin = 0.0;
  double upper_bound = 0.0;
  std::size_t iterations = 0;
  std::optional<BoundaryCheck> boundary;
  std::optional<InteriorResult> interior;
  std::string note;
};

struct CertificationReport {
  CertifyVerdict verdict = CertifyVerdict::Indeterminate;
  std::string model_name;
  std::size_t n = 2;
  std::optional<std::size_t> certifying_degree;
  Basis basis = Basis::Monomial;
  double eps = 0.0;
  /// Certificate (present when verdict is CertifiedStable).
  std::optional<CMatrix> y;
  std::optional<PolynomialLyapunov> p;
  std::vector<double> solution;
  double sdp_margin = 0.0;
  std::optional<BoundaryCheck> boundary_check;
  std::optional<InteriorResult> interior;
  std::optional<OracleVerdict> a22;
  std::optional<OracleVerdict> boundary_sweep;
  std::vector<DegreeAttempt> attempts;
  /// LMI sample set of the certifying (or last) attempt.
  std::vector<BoundaryPoint> lmi_samples;
  CertifyConfig config;
  std::vector<std::pair<std::string, double>> wall_time;
  std::string diagnostic;
};

CertificationReport certify(const RoesserModel& m, const CertifyConfig& cfg = {});
CertificationReport certify(const RoesserModel& m, std::size_t max_degree, BasisChoice basis,
                            const SweepConfig& sweep);

/// Samples the interior of the reciprocal region of dimension 2 and checks
/// P(delta) > 0 and stein_m < 0. Shift: radii {0, .25, .5, .75, .9, .99} x
/// 256 angles. Derivative: the same grid mapped by (1 + z) / (1 - z).
InteriorResult interior_check(const RoesserModel& m, const PolynomialLyapunov& p,
                              const SweepConfig& cfg = {});

/// Fine-grid verification of a candidate at the given margin.
BoundaryCheck check_boundary(const RoesserModel& m, const CMatrix& y, const PolynomialLyapunov& p,
                             double eps, const SweepConfig& cfg);

/// n = 2: certify. n >= 3: grid sweep only, verdict GridStable when stable.
CertificationReport certify_nd(const NdRoesserModel& m, const CertifyConfig& cfg = {});

}  // namespace roesser
