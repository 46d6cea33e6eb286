#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "swae/errors.hpp"
#include "swae/model.hpp"
#include "test_util.hpp"

namespace swae {
namespace {

void zero_params(nn::Mlp& net) {
  for (Tensor* t : net.params.tensors()) t->fill(0.0);
}

ModelShape shape(std::size_t dim_x, std::size_t dim_z, std::size_t k) {
  ModelShape s;
  s.dim_x = dim_x;
  s.dim_z = dim_z;
  s.k_pseudo = k;
  s.hidden = {6};
  return s;
}

SwaeModel model(std::size_t dim_x, std::size_t dim_z, std::size_t k, std::uint64_t seed = 1) {
  Rng rng(seed);
  const Tensor rows = testing::uniform_matrix(k + 3, dim_x, rng);
  return make_model(shape(dim_x, dim_z, k), rows, rng);
}

// Replays scripted component indices and normal draws.
struct ScriptedSource {
  std::size_t index = 0;
  double normal = 0.0;
  std::size_t uniform_index(std::size_t) { return index; }
  double standard_normal() { return normal; }
};

// Forwards component choices to an Rng but never adds noise.
struct NoiselessSource {
  Rng rng;
  std::size_t uniform_index(std::size_t n) { return rng.uniform_index(n); }
  double standard_normal() { return 0.0; }
};

TEST(MakeModel, PseudoInputsAreDistinctTrainingRows) {
  Rng rng(3);
  const Tensor rows = testing::uniform_matrix(10, 4, rng);
  const SwaeModel m = make_model(shape(4, 2, 6), rows, rng);
  ASSERT_EQ(m.k_pseudo(), 6u);
  std::vector<std::size_t> hits;
  for (std::size_t k = 0; k < 6; ++k) {
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      if (std::equal(rows.row(r).begin(), rows.row(r).end(), m.pseudo_inputs.row(k).begin())) {
        hits.push_back(r);
      }
    }
  }
  std::sort(hits.begin(), hits.end());
  EXPECT_EQ(hits.size(), 6u);
  EXPECT_EQ(std::adjacent_find(hits.begin(), hits.end()), hits.end());
}

TEST(MakeModel, MoreComponentsThanRowsIsConfigError) {
  Rng rng(3);
  const Tensor rows = testing::uniform_matrix(3, 4, rng);
  EXPECT_THROW(make_model(shape(4, 2, 4), rows, rng), ConfigError);
}

TEST(MakeModel, SpecsFollowShape) {
  const SwaeModel m = model(7, 3, 2);
  EXPECT_EQ(m.encoder.spec.widths, (std::vector<std::size_t>{7, 6, 3}));
  EXPECT_EQ(m.decoder.spec.widths, (std::vector<std::size_t>{3, 6, 7}));
  EXPECT_EQ(m.prior_net.spec.widths, (std::vector<std::size_t>{7, 6, 6}));
  EXPECT_EQ(m.decoder.spec.activations.back(), nn::Activation::sigmoid);
  EXPECT_EQ(m.encoder.spec.activations.back(), nn::Activation::identity);
}

TEST(Encode, ZeroWeightsRepeatBias) {
  SwaeModel m = model(4, 2, 2);
  zero_params(m.encoder);
  m.encoder.params.layers.back().bias = Tensor::vector(std::vector<double>{0.25, -3.0});
  Rng rng(4);
  const Tensor z = encode(m, testing::random_matrix(3, 4, rng));
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(z(r, 0), 0.25);
    EXPECT_EQ(z(r, 1), -3.0);
  }
}

TEST(Encode, PureAndBatchEqualsRows) {
  const SwaeModel m = model(5, 2, 3);
  Rng rng(5);
  const Tensor x = testing::uniform_matrix(6, 5, rng);
  const Tensor z = encode(m, x);
  EXPECT_EQ(z, encode(m, x));
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const Tensor zr = encode(m, x.row_matrix(r));
    for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(zr(0, c), z(r, c), 1e-14);
  }
}

TEST(Encode, WidthMismatchThrows) {
  const SwaeModel m = model(5, 2, 3);
  EXPECT_THROW(encode(m, Tensor::matrix(2, 4)), DimensionError);
}

TEST(Decode, ZeroNetworkGivesHalf) {
  SwaeModel m = model(4, 2, 2);
  zero_params(m.decoder);
  Rng rng(6);
  const Tensor x = decode(m, testing::random_matrix(3, 2, rng));
  for (double v : x.data()) EXPECT_EQ(v, 0.5);
}

TEST(Decode, OutputsInOpenUnitInterval) {
  const SwaeModel m = model(6, 3, 2);
  Rng rng(7);
  const Tensor x = decode(m, testing::random_matrix(50, 3, rng, 20.0));
  for (double v : x.data()) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Decode, BatchEqualsRows) {
  const SwaeModel m = model(5, 2, 3);
  Rng rng(8);
  const Tensor z = testing::random_matrix(4, 2, rng);
  const Tensor x = decode(m, z);
  for (std::size_t r = 0; r < z.rows(); ++r) {
    const Tensor xr = decode(m, z.row_matrix(r));
    for (std::size_t c = 0; c < 5; ++c) EXPECT_NEAR(xr(0, c), x(r, c), 1e-14);
  }
}

TEST(ConditionalPrior, ZeroNetworkGivesStandardNormal) {
  SwaeModel m = model(4, 3, 2);
  zero_params(m.prior_net);
  const GaussianParams g = conditional_prior(m, m.pseudo_inputs);
  for (double v : g.mean.data()) EXPECT_EQ(v, 0.0);
  for (double v : g.log_variance.data()) EXPECT_EQ(v, 0.0);
}

TEST(ConditionalPrior, ClampBoundsAndIdempotence) {
  EXPECT_EQ(clamp_log_variance(10.0, -6.0, 2.0), 2.0);
  EXPECT_EQ(clamp_log_variance(-10.0, -6.0, 2.0), -6.0);
  EXPECT_EQ(clamp_log_variance(0.5, -6.0, 2.0), 0.5);
  for (double raw : {-100.0, -6.0, -1.0, 2.0, 3.5}) {
    const double once = clamp_log_variance(raw, -6.0, 2.0);
    EXPECT_EQ(clamp_log_variance(once, -6.0, 2.0), once);
  }
  const Tensor raw({1, 4}, std::vector<double>{1.0, -2.0, 10.0, -7.0});
  const GaussianParams g = split_prior_output(raw, -6.0, 2.0);
  EXPECT_EQ(g.mean.values(), (std::vector<double>{1.0, -2.0}));
  EXPECT_EQ(g.log_variance.values(), (std::vector<double>{2.0, -6.0}));
}

TEST(ConditionalPrior, RawPlusTenClampsToUpperBound) {
  SwaeModel m = model(3, 1, 1);
  zero_params(m.prior_net);
  m.prior_net.params.layers.back().bias = Tensor::vector(std::vector<double>{0.0, 10.0});
  const GaussianParams g = conditional_prior(m, m.pseudo_inputs);
  EXPECT_EQ(g.log_variance[0], 2.0);
}

TEST(SampleConditional, Examples) {
  const GaussianParams g{Tensor({1, 2}, std::vector<double>{1.0, -1.0}),
                         Tensor({1, 2}, std::vector<double>{0.0, 2.0 * std::log(2.0)})};
  const Tensor z = sample_conditional(g, Tensor({1, 2}, std::vector<double>{1.0, 1.0}));
  EXPECT_DOUBLE_EQ(z[0], 2.0);
  EXPECT_DOUBLE_EQ(z[1], 1.0);
  EXPECT_EQ(sample_conditional(g, Tensor::matrix(1, 2)), g.mean);

  const GaussianParams std_normal{Tensor::matrix(1, 2), Tensor::matrix(1, 2)};
  const Tensor eps({1, 2}, std::vector<double>{0.3, -1.7});
  EXPECT_EQ(sample_conditional(std_normal, eps), eps);
  EXPECT_THROW(sample_conditional(g, Tensor::matrix(1, 3)), DimensionError);
}

TEST(SampleConditional, FiniteForExtremeClampedVariance) {
  const GaussianParams g{Tensor({1, 2}, std::vector<double>{0.0, 0.0}),
                         Tensor({1, 2}, std::vector<double>{-6.0, 2.0})};
  const Tensor z = sample_conditional(g, Tensor({1, 2}, std::vector<double>{40.0, -40.0}));
  EXPECT_TRUE(z.all_finite());
}

TEST(SamplePrior, SingleComponentUsesIt) {
  const SwaeModel m = model(4, 2, 1);
  ScriptedSource src{0, 0.0};
  const GaussianParams g = conditional_prior(m, m.pseudo_inputs);
  EXPECT_EQ(sample_prior(m, src), g.mean);
}

TEST(SamplePrior, ScriptedComponentAndZeroNoiseGivesItsMean) {
  const SwaeModel m = model(4, 2, 5);
  ScriptedSource src{3, 0.0};
  const GaussianParams g = conditional_prior(m, m.pseudo_inputs.row_matrix(3));
  EXPECT_EQ(sample_prior(m, src), g.mean);
}

TEST(SamplePrior, ComponentsAreUniform) {
  const std::size_t k = 4;
  const SwaeModel m = model(5, 2, k, 11);
  const GaussianParams g = conditional_prior(m, m.pseudo_inputs);
  NoiselessSource src{Rng(99)};
  const std::size_t n = 10000;
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Tensor z = sample_prior(m, src);
    std::size_t match = k;
    for (std::size_t c = 0; c < k; ++c) {
      if (z[0] == g.mean(c, 0) && z[1] == g.mean(c, 1)) match = c;
    }
    ASSERT_LT(match, k);
    ++counts[match];
  }
  const double expect = double(n) / double(k);
  const double sigma = std::sqrt(double(n) * (1.0 / k) * (1.0 - 1.0 / k));
  for (std::size_t c = 0; c < k; ++c) EXPECT_LE(std::abs(double(counts[c]) - expect), 3.0 * sigma);
}

TEST(PriorLogDensity, StandardNormalAtZero) {
  SwaeModel m = model(3, 1, 1);
  zero_params(m.prior_net);
  const double lp = prior_log_density(m, Tensor::vector(1));
  EXPECT_NEAR(lp, -0.9189385332, 1e-10);
  EXPECT_NEAR(lp, -0.5 * std::log(2.0 * std::numbers::pi), 1e-15);
}

TEST(PriorLogDensity, DuplicatedComponentMatchesSingle) {
  SwaeModel one = model(3, 2, 1, 21);
  SwaeModel two = one;
  two.shape.k_pseudo = 2;
  two.pseudo_inputs = Tensor::matrix(2, 3);
  for (std::size_t r = 0; r < 2; ++r) {
    std::copy_n(one.pseudo_inputs.row(0).begin(), 3, two.pseudo_inputs.row(r).begin());
  }
  for (double a : {-2.0, 0.0, 0.7, 5.0}) {
    const Tensor z = Tensor::vector(std::vector<double>{a, -0.5 * a});
    EXPECT_NEAR(prior_log_density(two, z), prior_log_density(one, z), 1e-12);
  }
}

TEST(PriorLogDensity, MatchesDirectMixtureSum) {
  const SwaeModel m = model(4, 2, 3, 31);
  const GaussianParams g = conditional_prior(m, m.pseudo_inputs);
  Rng rng(32);
  for (int t = 0; t < 20; ++t) {
    const Tensor z = testing::random_matrix(1, 2, rng);
    double mix = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      double dens = 1.0;
      for (std::size_t d = 0; d < 2; ++d) {
        const double var = std::exp(g.log_variance(k, d));
        const double diff = z[d] - g.mean(k, d);
        dens *= std::exp(-diff * diff / (2 * var)) / std::sqrt(2 * std::numbers::pi * var);
      }
      mix += dens / 3.0;
    }
    EXPECT_NEAR(prior_log_density(m, z), std::log(mix), 1e-10);
  }
}

TEST(PriorLogDensity, StableFarFromAllComponents) {
  const SwaeModel m = model(4, 2, 3, 41);
  const double lp = prior_log_density(m, Tensor::vector(std::vector<double>{1e3, -1e3}));
  EXPECT_TRUE(std::isfinite(lp));
  EXPECT_LT(lp, -1e4);
}

TEST(PriorLogDensity, MaximalAtMeanOfSingleComponent) {
  const SwaeModel m = model(4, 2, 1, 51);
  const GaussianParams g = conditional_prior(m, m.pseudo_inputs);
  const Tensor mu = Tensor::vector(std::vector<double>{g.mean[0], g.mean[1]});
  const double peak = prior_log_density(m, mu);
  Rng rng(52);
  for (int t = 0; t < 50; ++t) {
    Tensor z = mu;
    for (double& v : z.data()) v += 0.1 * rng.standard_normal();
    EXPECT_LT(prior_log_density(m, z), peak);
  }
}

}  // namespace
}  // namespace swae
