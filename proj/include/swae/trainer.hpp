#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "swae/adam.hpp"
#include "swae/model.hpp"
#include "swae/objective.hpp"
#include "swae/tensor.hpp"

namespace swae {

/// Where the nearest pseudo-input is searched: against the raw pseudo-inputs,
/// or between E(x) and the encoded pseudo-inputs.
enum class NearestMode { data_space, latent_space };

std::string_view to_string(NearestMode mode) noexcept;
NearestMode nearest_mode_from_string(std::string_view name);

struct TrainConfig {
  LossWeights weights;
  std::size_t k_pseudo = 50;
  std::size_t dim_z = 2;
  std::vector<std::size_t> hidden{256, 256};
  std::size_t batch_size = 100;
  std::size_t epochs = 10;
  nn::AdamHyper adam;
  std::uint64_t seed = 1;
  NearestMode nearest_mode = NearestMode::data_space;
  nn::Activation decoder_output = nn::Activation::sigmoid;

  void validate() const;
  /// Model layout for data of width dim_x.
  ModelShape model_shape(std::size_t dim_x) const;
};

struct TrainLog {
  std::vector<LossBreakdown> epochs;  // per-epoch mean over steps
  std::vector<double> step_totals;    // total loss of every step, in order
  std::size_t steps = 0;
  double seconds = 0.0;
};

/// Index of the pseudo-input closest to x (squared L2, lowest index on ties).
std::size_t nearest_pseudo_input(const Tensor& x, const SwaeModel& model, NearestMode mode);

/// nearest_pseudo_input for every row of a batch. In latent mode the K
/// pseudo-inputs are encoded once per call.
std::vector<std::size_t> nearest_pseudo_inputs(const Tensor& x, const SwaeModel& model,
                                               NearestMode mode);

/// Index of the row of `candidates` closest to `query`, lowest index on ties.
std::size_t nearest_row(std::span<const double> query, const Tensor& candidates);

/// One epoch of minibatches: a fresh permutation of 0..n-1 cut into runs of
/// `batch_size` (the last may be shorter).
std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n, std::size_t batch_size,
                                                    Rng& rng);

/// Model initialization exactly as train() performs it for this data and config.
SwaeModel initial_model(const Tensor& features, const TrainConfig& config);

struct TrainResult {
  SwaeModel model;
  TrainLog log;
};

/// Runs the training loop for config.epochs epochs. Each step: draw the next
/// minibatch from a per-epoch seeded permutation, select the nearest
/// pseudo-input per row, draw z_d by reparameterized sampling, then take one
/// Adam step on all parameters. Throws NumericError naming the term when the
/// loss stops being finite.
TrainResult train(const Tensor& features, const TrainConfig& config);

}  // namespace swae
