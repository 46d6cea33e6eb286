#include "swae/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

#include "swae/errors.hpp"
#include "swae/rng.hpp"

namespace swae::data {

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out{features.gather_rows(indices), std::nullopt};
  if (labels) {
    std::vector<std::uint32_t> l;
    l.reserve(indices.size());
    for (std::size_t i : indices) l.push_back((*labels)[i]);
    out.labels = std::move(l);
  }
  return out;
}

Dataset Dataset::head(std::size_t n) const {
  std::vector<std::size_t> idx(std::min(n, size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return subset(idx);
}

namespace {

Tensor draw_means(std::size_t modes, std::size_t dim, Rng& rng) {
  Tensor means = Tensor::matrix(modes, dim);
  for (double& m : means.data()) m = rng.uniform(-kGmmMeanRange, kGmmMeanRange);
  return means;
}

}  // namespace

Tensor gmm_means(std::size_t modes, std::size_t dim, std::uint64_t seed) {
  if (modes == 0 || dim == 0) throw ConfigError("gmm: modes and dim must be positive");
  Rng rng(seed);
  return draw_means(modes, dim, rng);
}

Dataset gmm_generate(std::size_t modes, std::size_t dim, std::size_t n, std::uint64_t seed) {
  if (modes == 0 || dim == 0 || n == 0) throw ConfigError("gmm: modes, dim and n must be positive");
  Rng rng(seed);
  const Tensor means = draw_means(modes, dim, rng);
  Dataset d{Tensor::matrix(n, dim), std::vector<std::uint32_t>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t mode = rng.uniform_index(modes);
    (*d.labels)[i] = static_cast<std::uint32_t>(mode);
    auto row = d.features.row(i);
    for (std::size_t c = 0; c < dim; ++c) row[c] = means(mode, c) + kGmmStddev * rng.standard_normal();
  }
  return d;
}

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset, const char* what) {
  if (bytes.size() < offset + 4) {
    throw ParseError(ParseError::Kind::truncated, std::string(what) + ": header is truncated");
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseError::Kind::io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

Dataset parse_idx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels) {
  if (read_be32(images, 0, "image file") != kImageMagic) {
    throw ParseError(ParseError::Kind::bad_magic, "image file: magic is not 0x00000803");
  }
  if (read_be32(labels, 0, "label file") != kLabelMagic) {
    throw ParseError(ParseError::Kind::bad_magic, "label file: magic is not 0x00000801");
  }
  const std::size_t count = read_be32(images, 4, "image file");
  const std::size_t rows = read_be32(images, 8, "image file");
  const std::size_t cols = read_be32(images, 12, "image file");
  const std::size_t label_count = read_be32(labels, 4, "label file");
  if (count != label_count) {
    throw ParseError(ParseError::Kind::count_mismatch,
                     "image count " + std::to_string(count) + " does not match label count " +
                         std::to_string(label_count));
  }
  if (count == 0 || rows == 0 || cols == 0) {
    throw ParseError(ParseError::Kind::shape, "image file: zero-sized dimension");
  }
  const std::size_t dim = rows * cols;
  if (images.size() < 16 + count * dim) {
    throw ParseError(ParseError::Kind::truncated, "image file: payload is truncated");
  }
  if (labels.size() < 8 + count) {
    throw ParseError(ParseError::Kind::truncated, "label file: payload is truncated");
  }
  Dataset d{Tensor::matrix(count, dim), std::vector<std::uint32_t>(count)};
  const auto pixels = images.subspan(16, count * dim);
  for (std::size_t i = 0; i < pixels.size(); ++i) d.features[i] = pixels[i] / 255.0;
  for (std::size_t i = 0; i < count; ++i) (*d.labels)[i] = labels[8 + i];
  return d;
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  const auto img = read_file(images);
  const auto lab = read_file(labels);
  return parse_idx(img, lab);
}

std::vector<std::uint8_t> encode_idx_images(const Dataset& d, std::uint32_t rows,
                                            std::uint32_t cols) {
  if (std::size_t{rows} * cols != d.dim()) {
    throw DimensionError("encode_idx_images: rows·cols must equal the feature width");
  }
  std::vector<std::uint8_t> out;
  out.reserve(16 + d.features.size());
  put_be32(out, kImageMagic);
  put_be32(out, static_cast<std::uint32_t>(d.size()));
  put_be32(out, rows);
  put_be32(out, cols);
  for (double v : d.features.data()) {
    out.push_back(static_cast<std::uint8_t>(std::clamp(std::lround(255.0 * v), 0L, 255L)));
  }
  return out;
}

std::vector<std::uint8_t> encode_idx_labels(const Dataset& d) {
  if (!d.labels) throw ConfigError("encode_idx_labels: dataset has no labels");
  std::vector<std::uint8_t> out;
  out.reserve(8 + d.size());
  put_be32(out, kLabelMagic);
  put_be32(out, static_cast<std::uint32_t>(d.size()));
  for (std::uint32_t l : *d.labels) out.push_back(static_cast<std::uint8_t>(l));
  return out;
}

Dataset add_noise(const Dataset& d, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ConfigError("add_noise: sigma must be non-negative");
  Dataset out = d;
  if (sigma == 0.0) return out;
  Rng rng(seed);
  for (double& v : out.features.data()) v += sigma * rng.standard_normal();
  return out;
}

std::vector<Dataset> split(const Dataset& d, std::span<const double> fractions,
                           std::uint64_t seed) {
  if (fractions.empty()) throw ConfigError("split: no fractions given");
  double total = 0.0;
  for (double f : fractions) {
    if (!(f > 0.0)) throw ConfigError("split: fractions must be positive");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("split: fractions must sum to 1");

  const std::size_t n = d.size();
  std::vector<std::size_t> sizes(fractions.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = fractions[i] * static_cast<double>(n);
    sizes[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += sizes[i];
    remainders.emplace_back(exact - static_cast<double>(sizes[i]), i);
  }
  // Hand leftover rows to the largest remainders; ties go to the earlier part.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++sizes[remainders[r].second];

  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) {
      throw ConfigError("split: part " + std::to_string(i) + " would be empty for n = " +
                        std::to_string(n));
    }
  }

  Rng rng(seed);
  const std::vector<std::size_t> order = rng.permutation(n);
  std::vector<Dataset> parts;
  std::size_t begin = 0;
  for (std::size_t s : sizes) {
    parts.push_back(d.subset(std::span<const std::size_t>(order.data() + begin, s)));
    begin += s;
  }
  return parts;
}

}  // namespace swae::data
