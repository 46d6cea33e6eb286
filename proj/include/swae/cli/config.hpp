#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "swae/data.hpp"
#include "swae/trainer.hpp"

namespace swae::cli {

enum class DatasetKind { gmm, idx };

struct DatasetSpec {
  DatasetKind kind = DatasetKind::gmm;
  std::size_t gmm_modes = 5;
  std::size_t gmm_dim = 10;
  std::size_t gmm_n = 2000;
  std::uint64_t gmm_seed = 1;
  std::filesystem::path idx_images;
  std::filesystem::path idx_labels;
  std::size_t limit = 0;  // 0 keeps every row
};

/// Parsed run configuration. Every key has a default; see parse_run_config.
struct RunConfig {
  TrainConfig train;
  DatasetSpec dataset;
  std::filesystem::path output_dir = "swae_out";
};

/// Parses `key = value` lines. `#` starts a comment, blank lines are ignored.
/// Keys: beta alpha k_pseudo dim_z hidden batch epochs lr adam_beta1
/// adam_beta2 adam_eps seed nearest_mode decoder_output dataset gmm_modes
/// gmm_dim gmm_n gmm_seed idx_images idx_labels limit output_dir.
/// Unknown keys, duplicate keys and unparsable values throw ConfigError.
/// decoder_output defaults to identity for gmm data and sigmoid for idx data.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Loads the dataset described by `spec` (applies `limit`).
data::Dataset load_dataset(const DatasetSpec& spec);

}  // namespace swae::cli
