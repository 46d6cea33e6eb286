#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "swae/eval.hpp"
#include "swae/trainer.hpp"

namespace swae::cli {

/// Shortest-form-independent rendering with 17 significant digits; never
/// depends on the C locale.
std::string format_real(double v);

/// `epoch,x_loss,recon_loss,z_loss,total` plus one row per epoch.
std::string metrics_csv(const TrainLog& log);

inline constexpr const char* kEvalCsvHeader = "metric,value,n,seed,k_or_sigma";
std::string eval_csv_row(const eval::EvalReport& r);

/// Rows of `values` as CSV under `header` (comma-separated column names).
std::string matrix_csv(const std::string& header, const Tensor& values);

/// An 8-bit grayscale image.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

/// Lays out square tiles (rows of `tiles`, each side×side, values in [0,1])
/// left to right, top to bottom, `columns` per grid row. Cells past the last
/// tile stay black. Pixels are round(255·v) clamped to [0, 255].
GrayImage tile_grid(const Tensor& tiles, std::size_t side, std::size_t columns);

/// Binary PGM: "P5\n<width> <height>\n255\n" then the raw pixels.
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Side of a square image with `dim` pixels, or 0 if dim is not a perfect square.
std::size_t square_side(std::size_t dim) noexcept;

}  // namespace swae::cli
