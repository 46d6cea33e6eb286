#include "swae/cli/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "swae/errors.hpp"

namespace swae::cli {

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

std::string metrics_csv(const TrainLog& log) {
  std::string out = "epoch,x_loss,recon_loss,z_loss,total\n";
  for (std::size_t e = 0; e < log.epochs.size(); ++e) {
    const LossBreakdown& l = log.epochs[e];
    out += std::to_string(e + 1) + ',' + format_real(l.x_loss) + ',' + format_real(l.recon_loss) +
           ',' + format_real(l.z_loss) + ',' + format_real(l.total) + '\n';
  }
  return out;
}

std::string eval_csv_row(const eval::EvalReport& r) {
  return r.metric + ',' + format_real(r.value) + ',' + std::to_string(r.n) + ',' +
         std::to_string(r.seed) + ',' + format_real(r.k_or_sigma) + '\n';
}

std::string matrix_csv(const std::string& header, const Tensor& values) {
  std::string out = header + '\n';
  for (std::size_t i = 0; i < values.rows(); ++i) {
    const auto row = values.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_real(row[c]);
    }
    out += '\n';
  }
  return out;
}

GrayImage tile_grid(const Tensor& tiles, std::size_t side, std::size_t columns) {
  if (side == 0 || columns == 0 || tiles.empty() || tiles.cols() != side * side) {
    throw DimensionError("tile_grid: tiles must be side×side images");
  }
  const std::size_t n = tiles.rows();
  const std::size_t cols = std::min(columns, n);
  const std::size_t grid_rows = (n + cols - 1) / cols;
  GrayImage img{cols * side, grid_rows * side, {}};
  img.pixels.assign(img.width * img.height, 0);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t ox = (t % cols) * side;
    const std::size_t oy = (t / cols) * side;
    const auto tile = tiles.row(t);
    for (std::size_t y = 0; y < side; ++y) {
      for (std::size_t x = 0; x < side; ++x) {
        const long v = std::lround(255.0 * tile[y * side + x]);
        img.pixels[(oy + y) * img.width + ox + x] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
      }
    }
  }
  return img;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width) + ' ' + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(ParseError::Kind::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ParseError(ParseError::Kind::io, "failed writing " + path.string());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()),
                                                 text.size()));
}

std::size_t square_side(std::size_t dim) noexcept {
  auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(dim))));
  return s * s == dim ? s : 0;
}

}  // namespace swae::cli
