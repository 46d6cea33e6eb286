#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "swae/model.hpp"

namespace swae::cli {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout, all integers and reals little-endian:
//   "SWAE"  u32 version
//   u64 dim_x  u64 dim_z  u64 K  u64 hidden_count  u64 hidden[hidden_count]
//   u8 hidden_activation  u8 decoder_output_activation  f64 logvar_min  f64 logvar_max
//   encoder, decoder, prior-net layers in order: [u64 len, f64 × len] weight, then bias
//   [u64 len, f64 × len] pseudo-inputs (K × dim_x, row-major)
std::vector<std::uint8_t> serialize_checkpoint(const SwaeModel& model);

/// Throws ParseError: bad_magic, bad_version, truncated (including any
/// trailing bytes) or shape. Never returns a partially filled model.
SwaeModel deserialize_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const SwaeModel& model, const std::filesystem::path& path);
SwaeModel load_checkpoint(const std::filesystem::path& path);

}  // namespace swae::cli
