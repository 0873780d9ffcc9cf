#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "roesser/errors.hpp"
#include "roesser/linalg.hpp"
#include "roesser/sdp.hpp"

using namespace roesser;

namespace {

std::vector<double> random_symmetric(std::mt19937_64& rng, std::size_t d, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> m(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) m[i * d + j] = m[j * d + i] = scale * u(rng);
  return m;
}

LmiProblem interval_problem() {
  // [[x - 1, 0], [0, 3 - x]]
  LmiProblem p;
  p.num_vars = 1;
  LmiBlock b;
  b.dim = 2;
  b.constant = {-1.0, 0.0, 0.0, 3.0};
  b.add_term(0, {1.0, 0.0, 0.0, -1.0});
  p.blocks.push_back(b);
  return p;
}

// Random blocks plus box constraints -1 <= x_j <= 1 keep the optimum bounded.
LmiProblem random_problem(std::mt19937_64& rng, std::size_t vars, std::size_t blocks, std::size_t dim) {
  LmiProblem p;
  p.num_vars = vars;
  for (std::size_t b = 0; b < blocks; ++b) {
    LmiBlock blk;
    blk.dim = dim;
    blk.constant = random_symmetric(rng, dim);
    for (std::size_t i = 0; i < dim; ++i) blk.constant[i * dim + i] += 1.5;
    for (std::size_t j = 0; j < vars; ++j) blk.add_term(j, random_symmetric(rng, dim, 0.5));
    p.blocks.push_back(blk);
  }
  LmiBlock box;
  box.dim = 2 * vars;
  box.constant.assign(box.dim * box.dim, 0.0);
  for (std::size_t i = 0; i < box.dim; ++i) box.constant[i * box.dim + i] = 1.0;
  for (std::size_t j = 0; j < vars; ++j) {
    std::vector<double> f(box.dim * box.dim, 0.0);
    f[(2 * j) * box.dim + 2 * j] = 1.0;
    f[(2 * j + 1) * box.dim + 2 * j + 1] = -1.0;
    box.add_term(j, f);
  }
  p.blocks.push_back(box);
  return p;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST(Sdp, IntervalMidpoint) {
  const auto p = interval_problem();
  const auto s = solve_margin(p);
  EXPECT_EQ(s.status, SdpStatus::Feasible);
  EXPECT_NEAR(s.margin, 1.0, 1e-8);
  ASSERT_EQ(s.x.size(), 1u);
  EXPECT_NEAR(s.x[0], 2.0, 1e-6);
  EXPECT_TRUE(s.verified);
  EXPECT_GE(s.upper_bound, s.margin);
  EXPECT_NEAR(s.upper_bound, 1.0, 1e-6);
}

TEST(Sdp, VerifySolutionExamples) {
  const auto p = interval_problem();
  const std::vector<double> x{2.0};
  EXPECT_TRUE(verify_solution(p, x, 1.0));
  EXPECT_FALSE(verify_solution(p, x, 1.1));
  EXPECT_FALSE(verify_solution(p, std::vector<double>{2.0, 0.0}, 0.5));
  EXPECT_DOUBLE_EQ(min_block_eigenvalue(p, x), 1.0);
}

TEST(Sdp, ConstantBlockGivesMinusLambdaMax) {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_symmetric(rng, 5);
    LmiProblem p;
    p.num_vars = 1;
    LmiBlock b;
    b.dim = 5;
    for (double v : a) b.constant.push_back(-v);
    p.blocks.push_back(b);
    const auto s = solve_margin(p);
    const double lmax = eig_hermitian(CMatrix::from_real(5, 5, a)).back();
    EXPECT_NEAR(s.margin, -lmax, 1e-6);
  }
}

TEST(Sdp, ContradictoryScalarsAreInfeasible) {
  LmiProblem p;
  p.num_vars = 1;
  LmiBlock a;
  a.dim = 1;
  a.constant = {0.0};
  a.add_term(0, {1.0});
  LmiBlock b;
  b.dim = 1;
  b.constant = {-1.0};
  b.add_term(0, {-1.0});
  p.blocks = {a, b};
  const auto s = solve_margin(p);
  EXPECT_EQ(s.status, SdpStatus::Infeasible);
  EXPECT_LT(s.upper_bound, -1e-8);
  EXPECT_NEAR(s.margin, -0.5, 1e-6);
}

TEST(Sdp, UpperBoundDominatesMargin) {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_problem(rng, 3, 3, 3);
    const auto s = solve_margin(p);
    EXPECT_GE(s.upper_bound, s.margin - 1e-12);
    // the certificate pays R * |dual residual| with R = 1e6 here
    EXPECT_LE(s.upper_bound - s.margin, 1e-3 * (1.0 + std::abs(s.margin)));
    EXPECT_NEAR(min_block_eigenvalue(p, s.x), s.margin, 1e-8);
  }
}

TEST(Sdp, FeasibleOutputsVerify) {
  std::mt19937_64 rng(53);
  int feasible = 0;
  for (int t = 0; t < 50; ++t) {
    const auto p = random_problem(rng, 2 + t % 3, 2 + t % 2, 2 + t % 3);
    const auto s = solve_margin(p);
    if (s.status != SdpStatus::Feasible) continue;
    ++feasible;
    EXPECT_TRUE(verify_solution(p, s.x, s.margin));
    EXPECT_GT(s.margin, 0.0);
  }
  EXPECT_GT(feasible, 10);
}

TEST(Sdp, ScalingBlocks) {
  std::mt19937_64 rng(54);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_problem(rng, 2, 2, 3);
    auto q = p;
    const double c = 3.0;
    for (auto& b : q.blocks) {
      for (double& v : b.constant) v *= c;
      for (auto& f : b.coeffs)
        for (double& v : f) v *= c;
    }
    const auto a = solve_margin(p);
    const auto b = solve_margin(q);
    EXPECT_NEAR(b.margin, c * a.margin, 1e-7 * c);
    EXPECT_LT(max_diff(a.x, b.x), 1e-6);
  }
}

TEST(Sdp, RedundantBlock) {
  std::mt19937_64 rng(55);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_problem(rng, 2, 2, 3);
    auto q = p;
    q.blocks.push_back(p.blocks[0]);
    const auto a = solve_margin(p);
    const auto b = solve_margin(q);
    EXPECT_NEAR(a.margin, b.margin, 1e-8);
    EXPECT_LT(max_diff(a.x, b.x), 1e-8 * 1e2) << "x moves with the barrier weights only";
  }
}

TEST(Sdp, Deterministic) {
  std::mt19937_64 rng(56);
  const auto p = random_problem(rng, 4, 3, 4);
  const auto a = solve_margin(p);
  const auto b = solve_margin(p);
  EXPECT_EQ(a.margin, b.margin);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.upper_bound, b.upper_bound);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Sdp, ValidateRejectsBadData) {
  LmiProblem p;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = interval_problem();
  p.blocks[0].coeffs[0][1] = 0.5;  // asymmetric
  EXPECT_THROW(solve_margin(p), InvalidArgument);
  p = interval_problem();
  p.blocks[0].vars[0] = 3;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = interval_problem();
  p.num_vars = 0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  LmiBlock b;
  b.dim = 2;
  EXPECT_THROW(b.add_term(0, {1.0}), DimensionMismatch);
}

TEST(Sdp, DumpRoundTrip) {
  std::mt19937_64 rng(57);
  auto p = random_problem(rng, 3, 2, 3);
  p.var_names = {"a", "b", "c"};
  p.blocks[0].label = "first";
  p.x_radius = 123.5;
  std::stringstream ss;
  write_problem(p, ss);
  const LmiProblem q = read_problem(ss);
  ASSERT_EQ(q.num_vars, p.num_vars);
  ASSERT_EQ(q.blocks.size(), p.blocks.size());
  EXPECT_EQ(q.var_names, p.var_names);
  EXPECT_EQ(q.x_radius, p.x_radius);
  EXPECT_EQ(q.blocks[0].label, "first");
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    const std::vector<double> x{u(rng), u(rng), u(rng)};
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
      EXPECT_EQ(p.blocks[b].evaluate(x), q.blocks[b].evaluate(x));
  }
  std::istringstream bad("# num_vars 1\n# num_blocks 1\n# block 0 dim 1 label -\n0 1 0\n");
  EXPECT_THROW(read_problem(bad), InvalidArgument);
}

TEST(Sdp, StatusNames) {
  EXPECT_EQ(to_string(SdpStatus::Feasible), "feasible");
  EXPECT_EQ(to_string(SdpStatus::Infeasible), "infeasible");
  EXPECT_EQ(to_string(SdpStatus::Indeterminate), "indeterminate");
}
