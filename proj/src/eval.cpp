#include "swae/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "swae/errors.hpp"
#include "swae/kernels.hpp"
#include "swae/objective.hpp"
#include "swae/ot.hpp"
#include "swae/rng.hpp"

namespace swae::eval {

double knn_accuracy(const Tensor& train_z, std::span<const std::uint32_t> train_y,
                    const Tensor& test_z, std::span<const std::uint32_t> test_y, std::size_t k) {
  if (train_z.empty() || train_y.empty()) throw SizeError("knn_accuracy: empty training set");
  if (train_z.rows() != train_y.size() || test_z.rows() != test_y.size()) {
    throw SizeError("knn_accuracy: latents and labels differ in count");
  }
  if (k == 0 || k > train_y.size()) throw ConfigError("knn_accuracy: k must lie in [1, train count]");
  if (test_y.empty()) return 0.0;
  if (train_z.cols() != test_z.cols()) throw DimensionError("knn_accuracy: latent widths differ");
  require_finite(train_z, "knn_accuracy train latents");
  require_finite(test_z, "knn_accuracy test latents");

  const std::size_t n = train_z.rows();
  const std::size_t d = train_z.cols();
  std::vector<std::pair<double, std::size_t>> dist(n);
  std::size_t correct = 0;
  for (std::size_t t = 0; t < test_z.rows(); ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = {kernels::squared_distance(test_z.row(t).data(), train_z.row(i).data(), d), i};
    }
    // Pairs order by distance, then index: the lower index wins a distance tie.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::map<std::uint32_t, std::size_t> votes;
    for (std::size_t j = 0; j < k; ++j) ++votes[train_y[dist[j].second]];
    std::uint32_t winner = votes.begin()->first;
    std::size_t best = 0;
    for (const auto& [label, count] : votes) {
      if (count > best) {  // ascending label order keeps the smallest label on ties
        best = count;
        winner = label;
      }
    }
    if (winner == test_y[t]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test_y.size());
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t m = values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(m);
  for (std::size_t i = 0; i < m;) {
    std::size_t j = i;
    while (j + 1 < m && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t q = i; q <= j; ++q) ranks[order[q]] = avg;
    i = j + 1;
  }
  return ranks;
}

RankCorrelation spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw SizeError("spearman: inputs differ in length");
  if (a.size() < 2) throw SizeError("spearman: need at least two values");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double m = static_cast<double>(ra.size());
  const double mean = (m + 1.0) / 2.0;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return {0.0, true};
  return {std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0), false};
}

RankCorrelation local_structure_spearman(const Tensor& data, const Tensor& latents,
                                         std::size_t target) {
  if (data.rank() != 2 || latents.rank() != 2) {
    throw DimensionError("local_structure_spearman: inputs must be matrices");
  }
  const std::size_t n = data.rows();
  if (latents.rows() != n) throw SizeError("local_structure_spearman: row counts differ");
  if (n < 3) throw SizeError("local_structure_spearman: need at least 3 points");
  if (target >= n) throw ConfigError("local_structure_spearman: target index out of range");

  std::vector<double> dx, dz;
  dx.reserve(n - 1);
  dz.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == target) continue;
    dx.push_back(kernels::squared_distance(data.row(target).data(), data.row(i).data(), data.cols()));
    dz.push_back(
        kernels::squared_distance(latents.row(target).data(), latents.row(i).data(), latents.cols()));
  }
  return spearman(dx, dz);
}

double reconstruction_error(const SwaeModel& model, const data::Dataset& d) {
  return mean_squared_row_distance(d.features, decode(model, encode(model, d.features)));
}

DenoiseReport denoise_report(const SwaeModel& model, const data::Dataset& clean, double sigma,
                             std::uint64_t seed) {
  const data::Dataset noisy = data::add_noise(clean, sigma, seed);
  DenoiseReport r;
  r.mse_noisy_to_clean = mean_squared_row_distance(noisy.features, clean.features);
  r.mse_recon_to_clean =
      mean_squared_row_distance(decode(model, encode(model, noisy.features)), clean.features);
  return r;
}

Tensor generate(const SwaeModel& model, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return decode(model, sample_prior_batch(model, n, rng));
}

double generation_quality(const SwaeModel& model, const data::Dataset& held_out,
                          std::size_t n_gen, std::uint64_t seed, int p) {
  if (n_gen == 0 || n_gen > ot::kMaxAssignmentSize) {
    throw SizeError("generation_quality: n_gen must lie in [1, 512]");
  }
  if (held_out.size() < n_gen) {
    throw SizeError("generation_quality: held-out set has fewer than n_gen rows");
  }
  const ot::EmpiricalDistribution generated(generate(model, n_gen, seed));
  const ot::EmpiricalDistribution real(held_out.head(n_gen).features);
  return ot::empirical_wasserstein(generated, real, p);
}

}  // namespace swae::eval
