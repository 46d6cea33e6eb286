#include "swae/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "swae/errors.hpp"

namespace swae::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::size_t line) {
  throw ConfigError("line " + std::to_string(line) + ": invalid value '" + std::string(value) +
                    "' for key '" + std::string(key) + "'");
}

template <class T>
T parse_number(std::string_view key, std::string_view value, std::size_t line) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, line);
  return out;
}

std::vector<std::size_t> parse_widths(std::string_view key, std::string_view value,
                                      std::size_t line) {
  std::vector<std::size_t> out;
  while (!value.empty()) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    const auto w = parse_number<std::size_t>(key, item, line);
    if (w == 0) bad_value(key, value, line);
    out.push_back(w);
    if (comma == std::string_view::npos) break;
    value = value.substr(comma + 1);
  }
  return out;
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  RunConfig cfg;
  cfg.train.hidden = {256, 256};
  bool decoder_output_set = false;
  std::set<std::string, std::less<>> seen;

  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.emplace(key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                        std::string(key) + "'");
    }

    auto& t = cfg.train;
    auto& ds = cfg.dataset;
    if (key == "beta") t.weights.beta = parse_number<double>(key, value, line_no);
    else if (key == "alpha") t.weights.alpha = parse_number<double>(key, value, line_no);
    else if (key == "k_pseudo") t.k_pseudo = parse_number<std::size_t>(key, value, line_no);
    else if (key == "dim_z") t.dim_z = parse_number<std::size_t>(key, value, line_no);
    else if (key == "hidden") t.hidden = parse_widths(key, value, line_no);
    else if (key == "batch") t.batch_size = parse_number<std::size_t>(key, value, line_no);
    else if (key == "epochs") t.epochs = parse_number<std::size_t>(key, value, line_no);
    else if (key == "lr") t.adam.lr = parse_number<double>(key, value, line_no);
    else if (key == "adam_beta1") t.adam.beta1 = parse_number<double>(key, value, line_no);
    else if (key == "adam_beta2") t.adam.beta2 = parse_number<double>(key, value, line_no);
    else if (key == "adam_eps") t.adam.eps = parse_number<double>(key, value, line_no);
    else if (key == "seed") t.seed = parse_number<std::uint64_t>(key, value, line_no);
    else if (key == "nearest_mode") t.nearest_mode = nearest_mode_from_string(value);
    else if (key == "decoder_output") {
      t.decoder_output = nn::activation_from_string(value);
      decoder_output_set = true;
    } else if (key == "dataset") {
      if (value == "gmm") ds.kind = DatasetKind::gmm;
      else if (value == "idx") ds.kind = DatasetKind::idx;
      else bad_value(key, value, line_no);
    } else if (key == "gmm_modes") ds.gmm_modes = parse_number<std::size_t>(key, value, line_no);
    else if (key == "gmm_dim") ds.gmm_dim = parse_number<std::size_t>(key, value, line_no);
    else if (key == "gmm_n") ds.gmm_n = parse_number<std::size_t>(key, value, line_no);
    else if (key == "gmm_seed") ds.gmm_seed = parse_number<std::uint64_t>(key, value, line_no);
    else if (key == "idx_images") ds.idx_images = std::string(value);
    else if (key == "idx_labels") ds.idx_labels = std::string(value);
    else if (key == "limit") ds.limit = parse_number<std::size_t>(key, value, line_no);
    else if (key == "output_dir") cfg.output_dir = std::string(value);
    else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) +
                        "'");
    }
  }
  if (!decoder_output_set) {
    cfg.train.decoder_output =
        cfg.dataset.kind == DatasetKind::gmm ? nn::Activation::identity : nn::Activation::sigmoid;
  }
  if (cfg.dataset.kind == DatasetKind::idx &&
      (cfg.dataset.idx_images.empty() || cfg.dataset.idx_labels.empty())) {
    throw ConfigError("dataset = idx requires idx_images and idx_labels");
  }
  cfg.train.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

data::Dataset load_dataset(const DatasetSpec& spec) {
  data::Dataset d = spec.kind == DatasetKind::gmm
                        ? data::gmm_generate(spec.gmm_modes, spec.gmm_dim, spec.gmm_n, spec.gmm_seed)
                        : data::load_idx(spec.idx_images, spec.idx_labels);
  if (spec.limit > 0 && spec.limit < d.size()) d = d.head(spec.limit);
  return d;
}

}  // namespace swae::cli
