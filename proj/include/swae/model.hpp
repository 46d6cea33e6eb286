#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <vector>

#include "swae/mlp.hpp"
#include "swae/rng.hpp"
#include "swae/tensor.hpp"

namespace swae {

/// Sizes and activations that fix the layout of a SwaeModel.
struct ModelShape {
  std::size_t dim_x = 0;
  std::size_t dim_z = 0;
  std::size_t k_pseudo = 1;
  std::vector<std::size_t> hidden{256, 256};
  nn::Activation hidden_activation = nn::Activation::tanh;
  nn::Activation decoder_output = nn::Activation::sigmoid;
  double logvar_min = -6.0;
  double logvar_max = 2.0;

  /// Throws ConfigError on impossible shapes. dim_z >= dim_x only warns.
  void validate() const;

  friend bool operator==(const ModelShape&, const ModelShape&) = default;
};

/// Deterministic encoder, deterministic decoder, Gaussian conditional-prior
/// network and the trainable pseudo-inputs whose conditionals form the prior.
struct SwaeModel {
  ModelShape shape;
  nn::Mlp encoder;    // dim_x -> dim_z, linear output
  nn::Mlp decoder;    // dim_z -> dim_x
  nn::Mlp prior_net;  // dim_x -> 2·dim_z: mean, then raw log-variance
  Tensor pseudo_inputs;  // K × dim_x

  std::size_t dim_x() const noexcept { return shape.dim_x; }
  std::size_t dim_z() const noexcept { return shape.dim_z; }
  std::size_t k_pseudo() const noexcept { return pseudo_inputs.rows(); }

  /// Every trainable tensor: encoder, decoder, prior net, pseudo-inputs.
  std::vector<Tensor*> parameters();
  std::vector<const Tensor*> parameters() const;

  friend bool operator==(const SwaeModel&, const SwaeModel&) = default;
};

/// Builds network specs from the shape, initializes weights from `rng` and
/// picks K distinct rows of `training_features` as the initial pseudo-inputs.
SwaeModel make_model(const ModelShape& shape, const Tensor& training_features, Rng& rng);

/// Network specs implied by a shape.
nn::MlpSpec encoder_spec(const ModelShape& shape);
nn::MlpSpec decoder_spec(const ModelShape& shape);
nn::MlpSpec prior_spec(const ModelShape& shape);

Tensor encode(const SwaeModel& model, const Tensor& x);
Tensor decode(const SwaeModel& model, const Tensor& z);

/// Row-wise diagonal Gaussians; both members are batch × dim_z.
struct GaussianParams {
  Tensor mean;
  Tensor log_variance;
};

double clamp_log_variance(double raw, double lo, double hi) noexcept;

/// Splits prior-net output (batch × 2·dim_z) into mean and clamped log-variance.
GaussianParams split_prior_output(const Tensor& raw, double logvar_min, double logvar_max);

GaussianParams conditional_prior(const SwaeModel& model, const Tensor& u);

/// z = mean + exp(log_variance / 2) ⊙ eps, elementwise; eps matches mean's shape.
Tensor sample_conditional(const GaussianParams& g, const Tensor& eps);

/// Anything that can pick a mixture component and draw standard normals.
template <class S>
concept NoiseSource = requires(S s, std::size_t n) {
  { s.uniform_index(n) } -> std::convertible_to<std::size_t>;
  { s.standard_normal() } -> std::convertible_to<double>;
};

/// One draw from the mixture prior (1/K)·Σ_k p(z | u_k): uniform component,
/// then a conditional sample. Returns a 1 × dim_z matrix.
template <NoiseSource S>
Tensor sample_prior(const SwaeModel& model, S& source) {
  const std::size_t k = source.uniform_index(model.k_pseudo());
  const GaussianParams g = conditional_prior(model, model.pseudo_inputs.row_matrix(k));
  Tensor eps = Tensor::matrix(1, model.dim_z());
  for (double& e : eps.data()) e = source.standard_normal();
  return sample_conditional(g, eps);
}

/// n independent prior draws as an n × dim_z matrix.
template <NoiseSource S>
Tensor sample_prior_batch(const SwaeModel& model, std::size_t n, S& source) {
  Tensor z = Tensor::matrix(n, model.dim_z());
  for (std::size_t i = 0; i < n; ++i) {
    const Tensor one = sample_prior(model, source);
    std::copy(one.data().begin(), one.data().end(), z.row(i).begin());
  }
  return z;
}

/// log p(z) for the mixture prior, via log-sum-exp over components. z has dim_z entries.
double prior_log_density(const SwaeModel& model, const Tensor& z);

}  // namespace swae
