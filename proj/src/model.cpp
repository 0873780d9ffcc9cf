#include "roesser/model.hpp"

#include <algorithm>
#include <cmath>

#include "roesser/errors.hpp"

namespace roesser {

std::string_view to_string(DimensionKind kind) noexcept {
  return kind == DimensionKind::Shift ? "shift" : "derivative";
}

std::optional<DimensionKind> parse_kind(std::string_view text) noexcept {
  if (text == "shift") return DimensionKind::Shift;
  if (text == "derivative") return DimensionKind::Derivative;
  return std::nullopt;
}

RegionDescriptor RegionDescriptor::for_kind(DimensionKind kind) noexcept {
  if (kind == DimensionKind::Derivative) return {0.0, 1.0, 0.0, kind};
  return {1.0, 0.0, -1.0, kind};
}

double f_region(const RegionDescriptor& r, Complex lambda, bool use_hat) noexcept {
  const RegionDescriptor q = use_hat ? r.swapped() : r;
  return q.r11 * std::norm(lambda) + 2.0 * q.r10 * lambda.real() + q.r00;
}

bool region_membership(const RegionDescriptor& r, Complex lambda, RegionSet which,
                       double tol) noexcept {
  switch (which) {
    case RegionSet::D:
      return f_region(r, lambda) < -tol;
    case RegionSet::DC:
      return f_region(r, lambda) >= -tol;
    case RegionSet::Boundary:
      return std::abs(f_region(r, lambda)) <= tol && std::abs(f_region(r, lambda, true)) <= tol;
    case RegionSet::Diamond:
      return f_region(r, lambda, true) >= -tol;
  }
  return false;
}

bool region_membership(const RegionDescriptor& r, const ExtendedPoint& lambda, RegionSet which,
                       double tol) noexcept {
  if (!lambda.infinite) return region_membership(r, lambda.value, which, tol);
  // Infinity: outside the disc, on the compactified imaginary axis.
  const bool derivative = r.kind == DimensionKind::Derivative;
  switch (which) {
    case RegionSet::D:
      return false;
    case RegionSet::DC:
      return true;
    case RegionSet::Boundary:
      return derivative;
    case RegionSet::Diamond:
      return derivative;
  }
  return false;
}

namespace {

void require_real(const CMatrix& m, const char* label) {
  if (!m.is_real()) throw InvalidArgument(std::string(label) + " must have real entries");
}

void require_shape(const CMatrix& m, std::size_t rows, std::size_t cols, const std::string& label) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionMismatch(label + " is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                            std::to_string(cols));
  }
}

}  // namespace

RoesserModel::RoesserModel(CMatrix a11, CMatrix a12, CMatrix a21, CMatrix a22,
                           DimensionKind kind1, DimensionKind kind2, std::string name)
    : a11_(std::move(a11)),
      a12_(std::move(a12)),
      a21_(std::move(a21)),
      a22_(std::move(a22)),
      kind1_(kind1),
      kind2_(kind2),
      name_(std::move(name)) {
  const std::size_t k1 = a11_.rows();
  const std::size_t k2 = a22_.rows();
  if (k1 == 0 || k2 == 0) throw DimensionMismatch("block sizes k1, k2 must be at least 1");
  require_shape(a11_, k1, k1, "A11");
  require_shape(a12_, k1, k2, "A12");
  require_shape(a21_, k2, k1, "A21");
  require_shape(a22_, k2, k2, "A22");
  require_real(a11_, "A11");
  require_real(a12_, "A12");
  require_real(a21_, "A21");
  require_real(a22_, "A22");
}

double RoesserModel::max_block_norm() const noexcept {
  return std::max({a11_.max_abs(), a12_.max_abs(), a21_.max_abs(), a22_.max_abs()});
}

NdRoesserModel::NdRoesserModel(std::vector<std::vector<CMatrix>> blocks,
                               std::vector<DimensionKind> kinds, std::string name)
    : blocks_(std::move(blocks)), kinds_(std::move(kinds)), name_(std::move(name)) {
  const std::size_t n = kinds_.size();
  if (n < 2) throw DimensionMismatch("an nD model needs n >= 2 dimensions");
  if (blocks_.size() != n) throw DimensionMismatch("block grid must have n rows");
  std::vector<std::size_t> sizes(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (blocks_[i].size() != n) throw DimensionMismatch("block grid must be n x n");
    sizes[i] = blocks_[i][i].rows();
    if (sizes[i] == 0) throw DimensionMismatch("block sizes must be at least 1");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::string label = "A" + std::to_string(i + 1) + "," + std::to_string(j + 1);
      require_shape(blocks_[i][j], sizes[i], sizes[j], label);
      require_real(blocks_[i][j], label.c_str());
    }
  }
}

NdRoesserModel::NdRoesserModel(const RoesserModel& m)
    : NdRoesserModel({{m.a11(), m.a12()}, {m.a21(), m.a22()}}, {m.kind1(), m.kind2()}, m.name()) {}

RoesserModel NdRoesserModel::to_2d() const {
  if (n() != 2) throw DimensionMismatch("to_2d requires n == 2");
  return RoesserModel(blocks_[0][0], blocks_[0][1], blocks_[1][0], blocks_[1][1], kinds_[0],
                      kinds_[1], name_);
}

NdRoesserModel NdRoesserModel::trailing_subsystem() const {
  if (n() < 3) throw DimensionMismatch("trailing_subsystem requires n >= 3");
  std::vector<std::vector<CMatrix>> sub;
  for (std::size_t i = 1; i < n(); ++i) {
    sub.emplace_back(blocks_[i].begin() + 1, blocks_[i].end());
  }
  return NdRoesserModel(std::move(sub), std::vector<DimensionKind>(kinds_.begin() + 1, kinds_.end()),
                        name_);
}

LftPartition nd_partition(const NdRoesserModel& m) {
  const std::size_t n = m.n();
  const std::size_t k1 = m.block_size(0);
  std::size_t rest = 0;
  for (std::size_t i = 1; i < n; ++i) rest += m.block_size(i);

  LftPartition p{CMatrix(rest, rest), CMatrix(rest, k1), CMatrix(k1, rest), m.block(0, 0)};
  std::size_t r0 = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t ki = m.block_size(i);
    std::size_t c0 = 0;
    for (std::size_t j = 1; j < n; ++j) {
      const CMatrix& blk = m.block(i, j);
      for (std::size_t a = 0; a < ki; ++a)
        for (std::size_t b = 0; b < blk.cols(); ++b) p.a(r0 + a, c0 + b) = blk(a, b);
      c0 += m.block_size(j);
    }
    const CMatrix& bi = m.block(i, 0);
    for (std::size_t a = 0; a < ki; ++a)
      for (std::size_t b = 0; b < k1; ++b) p.b(r0 + a, b) = bi(a, b);
    const CMatrix& ci = m.block(0, i);
    for (std::size_t a = 0; a < k1; ++a)
      for (std::size_t b = 0; b < ki; ++b) p.c(a, r0 + b) = ci(a, b);
    r0 += ki;
  }
  return p;
}

std::vector<std::vector<CMatrix>> assemble_blocks(const LftPartition& p,
                                                  const std::vector<std::size_t>& sizes) {
  const std::size_t n = sizes.size();
  std::vector<std::size_t> offset(n, 0);
  for (std::size_t i = 2; i < n; ++i) offset[i] = offset[i - 1] + sizes[i - 1];
  auto slice = [](const CMatrix& src, std::size_t r0, std::size_t rows, std::size_t c0,
                  std::size_t cols) {
    CMatrix out(rows, cols);
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t b = 0; b < cols; ++b) out(a, b) = src(r0 + a, c0 + b);
    return out;
  };
  std::vector<std::vector<CMatrix>> blocks(n, std::vector<CMatrix>(n));
  blocks[0][0] = p.d;
  for (std::size_t i = 1; i < n; ++i) {
    blocks[i][0] = slice(p.b, offset[i], sizes[i], 0, sizes[0]);
    blocks[0][i] = slice(p.c, 0, sizes[0], offset[i], sizes[i]);
    for (std::size_t j = 1; j < n; ++j) {
      blocks[i][j] = slice(p.a, offset[i], sizes[i], offset[j], sizes[j]);
    }
  }
  return blocks;
}

}  // namespace roesser
