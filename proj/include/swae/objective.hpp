#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "swae/mlp.hpp"
#include "swae/model.hpp"
#include "swae/tensor.hpp"

namespace swae {

/// beta trades the x-loss against the reconstruction loss; alpha weights the z-loss.
struct LossWeights {
  double beta = 1.0;
  double alpha = 1.0;

  /// Throws ConfigError unless beta ∈ [0,1] and alpha > 0.
  void validate() const;
};

/// Raw coefficients of the three terms. LossWeights maps to (beta, 1 - beta, alpha).
struct TermCoefficients {
  double x = 1.0;
  double recon = 0.0;
  double z = 1.0;

  static TermCoefficients from(const LossWeights& w) noexcept {
    return {w.beta, 1.0 - w.beta, w.alpha};
  }
};

struct LossBreakdown {
  double x_loss = 0.0;
  double z_loss = 0.0;
  double recon_loss = 0.0;
  double total = 0.0;

  friend bool operator==(const LossBreakdown&, const LossBreakdown&) = default;
};

/// Batch mean of the squared Euclidean distance between matching rows.
double mean_squared_row_distance(const Tensor& a, const Tensor& b);

/// ‖x_e − D(z_d)‖² averaged over the batch.
inline double x_loss(const Tensor& x_e, const Tensor& x_gen) {
  return mean_squared_row_distance(x_e, x_gen);
}
/// ‖E(x_e) − z_d‖² averaged over the batch.
inline double z_loss(const Tensor& z_e, const Tensor& z_d) {
  return mean_squared_row_distance(z_e, z_d);
}
/// ‖x_e − D(E(x_e))‖² averaged over the batch.
inline double recon_loss(const Tensor& x_e, const Tensor& x_rec) {
  return mean_squared_row_distance(x_e, x_rec);
}

LossBreakdown combine_terms(double x, double recon, double z, const TermCoefficients& c) noexcept;
inline LossBreakdown combine_terms(double x, double recon, double z, const LossWeights& w) noexcept {
  return combine_terms(x, recon, z, TermCoefficients::from(w));
}

/// Loss of a batch given already-drawn prior latents z_d (one row per x row).
LossBreakdown swae_loss(const SwaeModel& model, const Tensor& x, const Tensor& z_d,
                        const LossWeights& weights);

/// z_d for each row: the conditional prior of pseudo-input u_indices[n] sampled
/// with noise row eps[n].
Tensor draw_conditional_latents(const SwaeModel& model, std::span<const std::size_t> u_indices,
                                const Tensor& eps);

/// Gradient of the batch loss, laid out like SwaeModel.
struct SwaeGrads {
  nn::MlpParams encoder;
  nn::MlpParams decoder;
  nn::MlpParams prior_net;
  Tensor pseudo_inputs;

  /// Same order as SwaeModel::parameters().
  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;
};

struct LossAndGrads {
  LossBreakdown loss;
  SwaeGrads grads;
};

/// Exact gradient of the training cost with respect to all four parameter
/// groups. The pseudo-input choice `u_indices` and the noise `eps` are held
/// fixed; z_d is reparameterized so gradients reach the prior net and the
/// selected pseudo-inputs.
LossAndGrads swae_grad(const SwaeModel& model, const Tensor& x,
                       std::span<const std::size_t> u_indices, const Tensor& eps,
                       const TermCoefficients& coefficients);

inline LossAndGrads swae_grad(const SwaeModel& model, const Tensor& x,
                              std::span<const std::size_t> u_indices, const Tensor& eps,
                              const LossWeights& weights) {
  return swae_grad(model, x, u_indices, eps, TermCoefficients::from(weights));
}

/// The scalar cost swae_grad differentiates (same fixed indices and noise).
double swae_cost(const SwaeModel& model, const Tensor& x, std::span<const std::size_t> u_indices,
                 const Tensor& eps, const TermCoefficients& coefficients);

}  // namespace swae
