#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "swae/tensor.hpp"

namespace swae::data {

struct Dataset {
  Tensor features;                              // n × dim_x
  std::optional<std::vector<std::uint32_t>> labels;  // n entries when present

  std::size_t size() const noexcept { return features.rows(); }
  std::size_t dim() const noexcept { return features.cols(); }

  /// Rows selected by index, labels carried along.
  Dataset subset(std::span<const std::size_t> indices) const;
  /// The first n rows.
  Dataset head(std::size_t n) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

inline constexpr double kGmmMeanRange = 5.0;
inline constexpr double kGmmStddev = 0.5;

/// Mode means of gmm_generate(modes, dim, ·, seed): modes × dim, uniform in [−5, 5].
Tensor gmm_means(std::size_t modes, std::size_t dim, std::uint64_t seed);

/// n samples of an isotropic Gaussian mixture: uniform mode choice, means from
/// gmm_means, standard deviation 0.5. Labels hold the mode index.
Dataset gmm_generate(std::size_t modes, std::size_t dim, std::size_t n, std::uint64_t seed);

/// Reads an MNIST-format IDX image file (magic 0x00000803) and label file
/// (magic 0x00000801). Pixels are scaled by 1/255. Throws ParseError with kind
/// bad_magic, truncated, count_mismatch or io.
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Parses in-memory IDX payloads (same rules as load_idx).
Dataset parse_idx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels);

/// IDX byte encodings. Features are written as round(255·x) clamped to
/// [0, 255]; `rows`×`cols` is the image shape and must equal dim.
std::vector<std::uint8_t> encode_idx_images(const Dataset& d, std::uint32_t rows,
                                            std::uint32_t cols);
std::vector<std::uint8_t> encode_idx_labels(const Dataset& d);

/// Features plus sigma·N(0,1) noise, no clipping; labels kept.
Dataset add_noise(const Dataset& d, double sigma, std::uint64_t seed);

/// Seeded shuffle partitioned by `fractions` (positive, summing to 1). Part
/// sizes follow the largest-remainder rule, so each is within 1 of its exact
/// share. Throws ConfigError if a part would be empty.
std::vector<Dataset> split(const Dataset& d, std::span<const double> fractions,
                           std::uint64_t seed);

}  // namespace swae::data
