#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "swae/data.hpp"
#include "swae/model.hpp"
#include "swae/tensor.hpp"

namespace swae::eval {

struct EvalReport {
  std::string metric;
  double value = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double k_or_sigma = 0.0;
};

/// Fraction of test latents whose k nearest training latents (squared L2,
/// lower training index first on distance ties) vote for the true label; vote
/// ties go to the smallest label. Throws SizeError for an empty training set.
double knn_accuracy(const Tensor& train_z, std::span<const std::uint32_t> train_y,
                    const Tensor& test_z, std::span<const std::uint32_t> test_y, std::size_t k);

struct RankCorrelation {
  double rho = 0.0;
  bool degenerate = false;  // one side had all values equal; rho is reported as 0
};

/// Spearman correlation: Pearson correlation of average ranks, which reduces
/// to 1 − 6Σd²/(m(m²−1)) when neither side has ties.
RankCorrelation spearman(std::span<const double> a, std::span<const double> b);

/// Average (fractional) ranks starting at 1.
std::vector<double> average_ranks(std::span<const double> values);

/// Rank agreement between data-space and latent-space distances from row
/// `target` to every other row. Requires at least 3 rows.
RankCorrelation local_structure_spearman(const Tensor& data, const Tensor& latents,
                                         std::size_t target);

/// Mean over samples of ‖x − D(E(x))‖².
double reconstruction_error(const SwaeModel& model, const data::Dataset& d);

struct DenoiseReport {
  double mse_noisy_to_clean = 0.0;
  double mse_recon_to_clean = 0.0;
};

/// Corrupts `clean` with add_noise(sigma, seed), reconstructs the noisy input
/// and compares both against the clean data (per-sample mean squared L2).
DenoiseReport denoise_report(const SwaeModel& model, const data::Dataset& clean, double sigma,
                             std::uint64_t seed);

/// n_gen prior samples decoded (seeded) vs the first n_gen held-out rows,
/// compared with the empirical p-Wasserstein distance.
double generation_quality(const SwaeModel& model, const data::Dataset& held_out,
                          std::size_t n_gen, std::uint64_t seed, int p);

/// n samples generated from the model's mixture prior.
Tensor generate(const SwaeModel& model, std::size_t n, std::uint64_t seed);

}  // namespace swae::eval
