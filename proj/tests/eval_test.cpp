#include <gtest/gtest.h>

#include <cmath>

#include "swae/errors.hpp"
#include "swae/eval.hpp"
#include "test_util.hpp"

namespace swae::eval {
namespace {

Tensor column(std::vector<double> v) {
  const std::size_t n = v.size();
  return Tensor({n, 1}, std::move(v));
}

TEST(Knn, HandExample) {
  const Tensor train = column({0, 1, 2, 10});
  const std::vector<std::uint32_t> y{0, 0, 1, 1};
  const Tensor test = column({1.4});
  EXPECT_DOUBLE_EQ(knn_accuracy(train, y, test, std::vector<std::uint32_t>{0}, 3), 1.0);
  EXPECT_DOUBLE_EQ(knn_accuracy(train, y, test, std::vector<std::uint32_t>{1}, 3), 0.0);
}

TEST(Knn, SingleTrainingPoint) {
  const Tensor test = column({-3, 0, 8});
  EXPECT_DOUBLE_EQ(knn_accuracy(column({5}), std::vector<std::uint32_t>{7}, test,
                                std::vector<std::uint32_t>{7, 7, 7}, 1),
                   1.0);
}

TEST(Knn, DistanceTieGoesToLowerIndex) {
  // Test point 1 is equidistant from 0 (label 4) and 2 (label 2).
  const Tensor train = column({0, 2});
  const std::vector<std::uint32_t> y{4, 2};
  EXPECT_DOUBLE_EQ(knn_accuracy(train, y, column({1}), std::vector<std::uint32_t>{4}, 1), 1.0);
  const std::vector<std::uint32_t> y_rev{2, 4};
  EXPECT_DOUBLE_EQ(knn_accuracy(train, y_rev, column({1}), std::vector<std::uint32_t>{2}, 1), 1.0);
}

TEST(Knn, VoteTieGoesToSmallestLabel) {
  const Tensor train = column({0, 1});
  const std::vector<std::uint32_t> y{5, 3};
  EXPECT_DOUBLE_EQ(knn_accuracy(train, y, column({0}), std::vector<std::uint32_t>{3}, 2), 1.0);
}

TEST(Knn, SeparatedClusters) {
  Rng rng(21);
  Tensor train = testing::random_matrix(40, 2, rng, 0.1);
  Tensor test = testing::random_matrix(20, 2, rng, 0.1);
  std::vector<std::uint32_t> ytr(40), yte(20);
  for (std::size_t i = 0; i < 40; ++i) {
    ytr[i] = i % 2;
    train(i, 0) += ytr[i] ? 10.0 : -10.0;
  }
  for (std::size_t i = 0; i < 20; ++i) {
    yte[i] = i % 3 == 0;
    test(i, 0) += yte[i] ? 10.0 : -10.0;
  }
  EXPECT_DOUBLE_EQ(knn_accuracy(train, ytr, test, yte, 5), 1.0);
}

TEST(Knn, OrthogonalInvariance) {
  Rng rng(22);
  const Tensor train = testing::random_matrix(60, 2, rng);
  const Tensor test = testing::random_matrix(30, 2, rng);
  std::vector<std::uint32_t> ytr(60), yte(30);
  for (auto& v : ytr) v = static_cast<std::uint32_t>(rng.uniform() * 3);
  for (auto& v : yte) v = static_cast<std::uint32_t>(rng.uniform() * 3);
  const double c = std::cos(0.7), s = std::sin(0.7);
  auto rotate = [&](const Tensor& t) {
    Tensor r = t;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      r(i, 0) = c * t(i, 0) - s * t(i, 1);
      r(i, 1) = s * t(i, 0) + c * t(i, 1);
    }
    return r;
  };
  const double a = knn_accuracy(train, ytr, test, yte, 5);
  EXPECT_GE(a, 0.0);
  EXPECT_LE(a, 1.0);
  EXPECT_DOUBLE_EQ(knn_accuracy(rotate(train), ytr, rotate(test), yte, 5), a);
}

TEST(Knn, Errors) {
  const std::vector<std::uint32_t> none;
  EXPECT_THROW(knn_accuracy(Tensor(), none, column({1}), std::vector<std::uint32_t>{0}, 1),
               SizeError);
  EXPECT_THROW(knn_accuracy(column({1}), std::vector<std::uint32_t>{0}, column({1}),
                            std::vector<std::uint32_t>{0}, 2),
               ConfigError);
}

TEST(Spearman, HandExamples) {
  const std::vector<double> a{1, 2, 3}, b{2, 1, 3};
  EXPECT_DOUBLE_EQ(spearman(a, b).rho, 0.5);
  const std::vector<double> up{1, 2, 3, 4}, down{9, 7, 5, 1};
  EXPECT_DOUBLE_EQ(spearman(up, down).rho, -1.0);
  EXPECT_DOUBLE_EQ(spearman(up, up).rho, 1.0);
}

TEST(Spearman, AverageRanks) {
  const std::vector<double> v{10, 20, 10, 5};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{2.5, 4, 2.5, 1}));
}

TEST(Spearman, DegenerateIsFlagged) {
  const std::vector<double> a{3, 3, 3}, b{1, 2, 3};
  const RankCorrelation r = spearman(a, b);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.rho, 0.0);
  EXPECT_FALSE(spearman(b, b).degenerate);
}

TEST(Spearman, MonotoneInvariance) {
  Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(12), b(12), eb(12);
    for (std::size_t i = 0; i < 12; ++i) {
      a[i] = rng.standard_normal();
      b[i] = rng.standard_normal();
      eb[i] = std::exp(2.0 * b[i]) + 1.0;
    }
    const double rho = spearman(a, b).rho;
    EXPECT_GE(rho, -1.0);
    EXPECT_LE(rho, 1.0);
    EXPECT_NEAR(spearman(a, eb).rho, rho, 1e-12);
  }
}

TEST(LocalStructure, IdentityAndScaledEmbedding) {
  Rng rng(24);
  const Tensor x = testing::random_matrix(30, 4, rng);
  EXPECT_DOUBLE_EQ(local_structure_spearman(x, x, 0).rho, 1.0);
  Tensor scaled = x;
  for (double& v : scaled.data()) v *= 3.0;
  EXPECT_NEAR(local_structure_spearman(x, scaled, 5).rho, 1.0, 1e-12);
}

TEST(LocalStructure, ReversedRanks) {
  // Distances from row 0: data 1,2,3,4; latents 4,3,2,1.
  const Tensor data = column({0, 1, 2, 3, 4});
  const Tensor lat = column({0, 4, 3, 2, 1});
  EXPECT_DOUBLE_EQ(local_structure_spearman(data, lat, 0).rho, -1.0);
}

TEST(LocalStructure, Errors) {
  EXPECT_THROW(local_structure_spearman(column({0, 1}), column({0, 1}), 0), SizeError);
  EXPECT_THROW(local_structure_spearman(column({0, 1, 2}), column({0, 1, 2}), 3), ConfigError);
}

// Single linear layers with identity weights: D(E(x)) = x.
SwaeModel identity_autoencoder(std::size_t dim) {
  Rng rng(25);
  ModelShape s;
  s.dim_x = dim;
  s.dim_z = dim;
  s.k_pseudo = 2;
  s.hidden = {};
  s.decoder_output = nn::Activation::identity;
  SwaeModel m = make_model(s, testing::uniform_matrix(4, dim, rng), rng);
  for (nn::Mlp* net : {&m.encoder, &m.decoder}) {
    net->params.layers[0].weight.fill(0.0);
    net->params.layers[0].bias.fill(0.0);
    for (std::size_t i = 0; i < dim; ++i) net->params.layers[0].weight(i, i) = 1.0;
  }
  return m;
}

TEST(Reconstruction, IdentityIsZero) {
  Rng rng(26);
  const data::Dataset d{testing::random_matrix(10, 3, rng), std::nullopt};
  EXPECT_EQ(reconstruction_error(identity_autoencoder(3), d), 0.0);
}

TEST(Reconstruction, ConstantHalfOnZeros) {
  Rng rng(27);
  SwaeModel m = testing::small_model(4, 2, 2, rng);
  for (auto& layer : m.decoder.params.layers) {
    layer.weight.fill(0.0);
    layer.bias.fill(0.0);
  }
  const data::Dataset d{Tensor::matrix(7, 4), std::nullopt};
  EXPECT_DOUBLE_EQ(reconstruction_error(m, d), 1.0);
}

TEST(Reconstruction, PermutationInvariantAndNonNegative) {
  Rng rng(28);
  const SwaeModel m = testing::small_model(5, 2, 3, rng);
  const data::Dataset d{testing::uniform_matrix(12, 5, rng), std::nullopt};
  const auto perm = rng.permutation(12);
  const double e = reconstruction_error(m, d);
  EXPECT_GT(e, 0.0);
  EXPECT_NEAR(reconstruction_error(m, d.subset(perm)), e, 1e-12);
}

TEST(Denoise, ZeroSigma) {
  Rng rng(29);
  const SwaeModel m = testing::small_model(6, 2, 3, rng);
  const data::Dataset d{testing::uniform_matrix(15, 6, rng), std::nullopt};
  const DenoiseReport r = denoise_report(m, d, 0.0, 1);
  EXPECT_EQ(r.mse_noisy_to_clean, 0.0);
  EXPECT_EQ(r.mse_recon_to_clean, reconstruction_error(m, d));
}

TEST(Denoise, NoiseEnergyMatchesChiSquare) {
  Rng rng(30);
  const SwaeModel m = testing::small_model(784, 2, 2, rng, {4});
  const data::Dataset d{testing::uniform_matrix(1000, 784, rng), std::nullopt};
  const DenoiseReport r = denoise_report(m, d, 0.3, 2);
  EXPECT_NEAR(r.mse_noisy_to_clean, 784 * 0.09, 0.05 * 784 * 0.09);
}

TEST(GenerationQuality, GeneratedSetAsHeldOutIsZero) {
  Rng rng(31);
  const SwaeModel m = testing::small_model(3, 2, 4, rng, {5}, nn::Activation::identity);
  const data::Dataset held{generate(m, 40, 9), std::nullopt};
  EXPECT_NEAR(generation_quality(m, held, 40, 9, 2), 0.0, 1e-12);
  EXPECT_GT(generation_quality(m, held, 40, 10, 2), 0.0);
  EXPECT_EQ(generate(m, 40, 9), generate(m, 40, 9));
}

TEST(GenerationQuality, Errors) {
  Rng rng(32);
  const SwaeModel m = testing::small_model(3, 2, 4, rng);
  const data::Dataset held{testing::uniform_matrix(10, 3, rng), std::nullopt};
  EXPECT_THROW(generation_quality(m, held, 11, 1, 2), SizeError);
  EXPECT_THROW(generation_quality(m, held, 0, 1, 2), SizeError);
}

}  // namespace
}  // namespace swae::eval
