#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roesser/linalg.hpp"

namespace roesser {

/// Operator acting along one dimension. Derivative pairs with the open left
/// half-plane, Shift with the open unit disc.
enum class DimensionKind { Derivative, Shift };

std::string_view to_string(DimensionKind kind) noexcept;
std::optional<DimensionKind> parse_kind(std::string_view text) noexcept;

/// A point of the extended complex plane. Infinity is symbolic.
struct ExtendedPoint {
  Complex value{};
  bool infinite = false;

  static ExtendedPoint finite(Complex z) { return {z, false}; }
  static ExtendedPoint infinity() { return {Complex{}, true}; }
};

/// The 2x2 real matrix R = [r11 r10; r10 r00] defining a stability region
/// through f(R, l) = [l; 1]* R [l; 1].
struct RegionDescriptor {
  double r11 = 0.0;
  double r10 = 0.0;
  double r00 = 0.0;
  DimensionKind kind = DimensionKind::Shift;

  static RegionDescriptor for_kind(DimensionKind kind) noexcept;
  /// R-hat, the swap of r11 and r00.
  RegionDescriptor swapped() const noexcept { return {r00, r10, r11, kind}; }
};

enum class RegionSet { D, DC, Boundary, Diamond };

inline constexpr double kDefaultMembershipTol = 1e-9;

/// r11 |l|^2 + 2 r10 Re(l) + r00, or the R-hat form when use_hat is set.
double f_region(const RegionDescriptor& r, Complex lambda, bool use_hat = false) noexcept;

bool region_membership(const RegionDescriptor& r, Complex lambda, RegionSet which,
                       double tol = kDefaultMembershipTol) noexcept;
bool region_membership(const RegionDescriptor& r, const ExtendedPoint& lambda, RegionSet which,
                       double tol = kDefaultMembershipTol) noexcept;

/// 2D Roesser model with real blocks A11 (k1 x k1), A12, A21, A22 (k2 x k2).
class RoesserModel {
 public:
  RoesserModel(CMatrix a11, CMatrix a12, CMatrix a21, CMatrix a22, DimensionKind kind1,
               DimensionKind kind2, std::string name = {});

  const CMatrix& a11() const noexcept { return a11_; }
  const CMatrix& a12() const noexcept { return a12_; }
  const CMatrix& a21() const noexcept { return a21_; }
  const CMatrix& a22() const noexcept { return a22_; }
  DimensionKind kind1() const noexcept { return kind1_; }
  DimensionKind kind2() const noexcept { return kind2_; }
  std::size_t k1() const noexcept { return a11_.rows(); }
  std::size_t k2() const noexcept { return a22_.rows(); }
  const std::string& name() const noexcept { return name_; }

  RegionDescriptor region1() const noexcept { return RegionDescriptor::for_kind(kind1_); }
  RegionDescriptor region2() const noexcept { return RegionDescriptor::for_kind(kind2_); }

  /// Largest |entry| over all four blocks.
  double max_block_norm() const noexcept;

 private:
  CMatrix a11_, a12_, a21_, a22_;
  DimensionKind kind1_, kind2_;
  std::string name_;
};

/// nD Roesser model: an n x n grid of real blocks, block (i, j) is k_i x k_j.
class NdRoesserModel {
 public:
  NdRoesserModel(std::vector<std::vector<CMatrix>> blocks, std::vector<DimensionKind> kinds,
                 std::string name = {});
  explicit NdRoesserModel(const RoesserModel& m);

  std::size_t n() const noexcept { return kinds_.size(); }
  const CMatrix& block(std::size_t i, std::size_t j) const { return blocks_.at(i).at(j); }
  const std::vector<std::vector<CMatrix>>& blocks() const noexcept { return blocks_; }
  const std::vector<DimensionKind>& kinds() const noexcept { return kinds_; }
  std::size_t block_size(std::size_t i) const { return blocks_.at(i).at(i).rows(); }
  const std::string& name() const noexcept { return name_; }

  /// Only valid for n == 2.
  RoesserModel to_2d() const;
  /// The (n-1)D model on dimensions 2..n.
  NdRoesserModel trailing_subsystem() const;

 private:
  std::vector<std::vector<CMatrix>> blocks_;
  std::vector<DimensionKind> kinds_;
  std::string name_;
};

/// LFT data with dimension 1 singled out: M = D + C (I - Delta A)^-1 Delta B.
struct LftPartition {
  CMatrix a;  // blocks A_ij, i, j >= 2
  CMatrix b;  // column A_21 ... A_n1
  CMatrix c;  // row A_12 ... A_1n
  CMatrix d;  // A_11
};

LftPartition nd_partition(const NdRoesserModel& m);

/// Inverse of nd_partition for the given block sizes.
std::vector<std::vector<CMatrix>> assemble_blocks(const LftPartition& p,
                                                  const std::vector<std::size_t>& sizes);

}  // namespace roesser
