#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "swae/errors.hpp"
#include "swae/ot.hpp"
#include "test_util.hpp"

namespace swae::ot {
namespace {

double brute_force_min(const Tensor& c) {
  const std::size_t n = c.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += c(i, perm[i]);
    best = std::min(best, s / static_cast<double>(n));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

TEST(Assignment, TwoByTwoExample) {
  const Tensor c({2, 2}, std::vector<double>{1, 4, 0, 1});
  const Assignment a = min_cost_assignment(c);
  EXPECT_DOUBLE_EQ(a.cost, 1.0);
  EXPECT_EQ(a.permutation, (std::vector<std::size_t>{0, 1}));
}

TEST(Assignment, NeverWorseThanIdentity) {
  Rng rng(10);
  EXPECT_DOUBLE_EQ(min_cost_assignment(Tensor::matrix(4, 4)).cost, 0.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 30;
    const Tensor c = testing::uniform_matrix(n, n, rng);
    std::vector<std::size_t> id(n);
    std::iota(id.begin(), id.end(), 0);
    EXPECT_LE(min_cost_assignment(c).cost, assignment_cost(c, id) + 1e-12);
  }
}

TEST(Assignment, MatchesBruteForce) {
  Rng rng(11);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      Tensor c = testing::uniform_matrix(n, n, rng);
      if (trial % 4 == 0) {
        // integer costs produce many ties
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::floor(c[i] * 3.0);
      }
      const Assignment a = min_cost_assignment(c);
      ASSERT_EQ(a.permutation.size(), n);
      std::vector<std::size_t> sorted = a.permutation;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(sorted[i], i);
      EXPECT_NEAR(a.cost, brute_force_min(c), 1e-12);
      EXPECT_NEAR(a.cost, assignment_cost(c, a.permutation), 1e-12);
    }
  }
}

TEST(Assignment, InvalidInputs) {
  EXPECT_THROW(min_cost_assignment(Tensor::matrix(2, 3)), DimensionError);
  EXPECT_THROW(min_cost_assignment(Tensor::matrix(kMaxAssignmentSize + 1, kMaxAssignmentSize + 1)),
               DimensionError);
  Tensor c = Tensor::matrix(2, 2);
  c(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(min_cost_assignment(c), NumericError);
  c(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(min_cost_assignment(c), NumericError);
}

TEST(Wasserstein, ShiftedPointPair) {
  const EmpiricalDistribution a(Tensor({2, 1}, std::vector<double>{0, 1}));
  const EmpiricalDistribution b(Tensor({2, 1}, std::vector<double>{1, 2}));
  EXPECT_NEAR(empirical_wasserstein(a, b, 2), 1.0, 1e-12);
  EXPECT_NEAR(empirical_wasserstein(a, b, 1), 1.0, 1e-12);
}

TEST(Wasserstein, UnequalSizesRejected) {
  const EmpiricalDistribution a(Tensor::matrix(3, 2));
  const EmpiricalDistribution b(Tensor::matrix(4, 2));
  EXPECT_THROW(empirical_wasserstein(a, b, 2), SizeError);
  EXPECT_THROW(empirical_wasserstein(a, a, 3), ConfigError);
}

Tensor permuted_rows(const Tensor& t, Rng& rng) {
  const auto perm = rng.permutation(t.rows());
  Tensor out = Tensor::matrix(t.rows(), t.cols());
  for (std::size_t i = 0; i < t.rows(); ++i)
    std::copy_n(t.row(perm[i]).begin(), t.cols(), out.row(i).begin());
  return out;
}

class WassersteinMetric : public ::testing::TestWithParam<int> {};

TEST_P(WassersteinMetric, Properties) {
  const int p = GetParam();
  Rng rng(12 + p);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const Tensor x = testing::random_matrix(n, 3, rng);
    const Tensor y = testing::random_matrix(n, 3, rng);
    const Tensor z = testing::random_matrix(n, 3, rng);
    const EmpiricalDistribution a(x), b(y), c(z);
    const double ab = empirical_wasserstein(a, b, p);
    EXPECT_NEAR(empirical_wasserstein(a, a, p), 0.0, 1e-12);
    EXPECT_NEAR(ab, empirical_wasserstein(b, a, p), 1e-12);
    EXPECT_GT(ab, 0.0);
    EXPECT_LE(ab, empirical_wasserstein(a, c, p) + empirical_wasserstein(c, b, p) + 1e-12);
    EXPECT_NEAR(ab, empirical_wasserstein(EmpiricalDistribution(permuted_rows(x, rng)), b, p),
                1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(P, WassersteinMetric, ::testing::Values(1, 2));

VectorMap linear_map(const Tensor& w) {
  return [w](const Tensor& v) {
    Tensor out = Tensor::matrix(v.rows(), w.rows());
    for (std::size_t r = 0; r < v.rows(); ++r)
      for (std::size_t o = 0; o < w.rows(); ++o)
        for (std::size_t i = 0; i < w.cols(); ++i) out(r, o) += w(o, i) * v(r, i);
    return out;
  };
}

TEST(JointCost, SingleAtomIsExact) {
  Rng rng(13);
  const Tensor x = testing::random_matrix(1, 3, rng);
  const Tensor z = testing::random_matrix(1, 2, rng);
  const auto check = verify_theorem1(x, z, linear_map(testing::random_matrix(2, 3, rng)),
                                     linear_map(testing::random_matrix(3, 2, rng)), 2);
  EXPECT_LT(check.gap, 1e-12);
  EXPECT_GT(check.joint, 0.0);
}

TEST(JointCost, PerfectModelHasZeroCost) {
  // z_j = E(x_j) and D(z_j) = x_j: both joints coincide.
  Tensor e = Tensor::matrix(2, 2);
  e(0, 0) = 1.0;
  e(1, 1) = 1.0;
  Rng rng(14);
  const Tensor x = testing::random_matrix(5, 2, rng);
  const auto check = verify_theorem1(x, x, linear_map(e), linear_map(e), 2);
  EXPECT_NEAR(check.joint, 0.0, 1e-12);
  EXPECT_NEAR(check.split, 0.0, 1e-12);
}

class JointCostRandom : public ::testing::TestWithParam<int> {};

TEST_P(JointCostRandom, JointEqualsSplit) {
  const int p = GetParam();
  Rng rng(15 + p);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const std::size_t dx = 1 + trial % 4;
    const std::size_t dz = 1 + trial % 2;
    const Tensor x = testing::random_matrix(n, dx, rng);
    const Tensor z = testing::random_matrix(n, dz, rng);
    const auto check = verify_theorem1(x, z, linear_map(testing::random_matrix(dz, dx, rng)),
                                       linear_map(testing::random_matrix(dx, dz, rng)), p);
    EXPECT_LT(check.gap, 1e-9) << "trial " << trial;
  }
}

INSTANTIATE_TEST_SUITE_P(P, JointCostRandom, ::testing::Values(1, 2));

TEST(JointCost, PerturbationIsDetected) {
  Rng rng(16);
  const Tensor x = testing::random_matrix(4, 3, rng);
  const Tensor z = testing::random_matrix(4, 2, rng);
  const auto check =
      verify_theorem1(x, z, linear_map(testing::random_matrix(2, 3, rng)),
                      linear_map(testing::random_matrix(3, 2, rng)), 2, JointCostOptions{0.5});
  EXPECT_NEAR(check.gap, 0.5, 1e-9);
}

TEST(JointCost, UnequalAtomCountsRejected) {
  Rng rng(17);
  Tensor w = testing::random_matrix(2, 2, rng);
  EXPECT_THROW(verify_theorem1(testing::random_matrix(3, 2, rng), testing::random_matrix(4, 2, rng),
                               linear_map(w), linear_map(w), 2),
               DimensionError);
}

}  // namespace
}  // namespace swae::ot
