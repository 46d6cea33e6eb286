#include "swae/cli/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "swae/errors.hpp"

namespace swae::cli {

namespace {

constexpr char kMagic[4] = {'S', 'W', 'A', 'E'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void array(const Tensor& t) {
    u64(t.size());
    for (double v : t.data()) f64(v);
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : buf_(b) {}

  std::span<const std::uint8_t> take(std::size_t n) {
    if (buf_.size() - pos_ < n) {
      throw ParseError(ParseError::Kind::truncated,
                       "checkpoint is truncated at byte " + std::to_string(pos_));
    }
    auto s = buf_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    const auto s = take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | s[static_cast<std::size_t>(i)];
    return v;
  }
  std::uint64_t u64() {
    const auto s = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | s[static_cast<std::size_t>(i)];
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void array_into(Tensor& t, const char* what) {
    const std::uint64_t len = u64();
    if (len != t.size()) {
      throw ParseError(ParseError::Kind::shape, std::string("checkpoint: ") + what + " holds " +
                                                    std::to_string(len) + " values, expected " +
                                                    std::to_string(t.size()));
    }
    for (double& v : t.data()) v = f64();
  }
  bool at_end() const noexcept { return pos_ == buf_.size(); }

 private:
  std::span<const std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

std::uint8_t activation_tag(nn::Activation a) { return static_cast<std::uint8_t>(a); }

nn::Activation activation_from_tag(std::uint8_t tag) {
  if (tag > static_cast<std::uint8_t>(nn::Activation::sigmoid)) {
    throw ParseError(ParseError::Kind::shape, "checkpoint: unknown activation tag");
  }
  return static_cast<nn::Activation>(tag);
}

// Sanity bound on echoed sizes so a corrupted header cannot trigger a huge allocation.
constexpr std::uint64_t kMaxExtent = 1u << 24;

std::size_t checked_extent(std::uint64_t v, const char* what) {
  if (v == 0 || v > kMaxExtent) {
    throw ParseError(ParseError::Kind::shape, std::string("checkpoint: implausible ") + what);
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const SwaeModel& model) {
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(kCheckpointVersion);
  const ModelShape& s = model.shape;
  w.u64(s.dim_x);
  w.u64(s.dim_z);
  w.u64(model.k_pseudo());
  w.u64(s.hidden.size());
  for (std::size_t h : s.hidden) w.u64(h);
  w.u8(activation_tag(s.hidden_activation));
  w.u8(activation_tag(s.decoder_output));
  w.f64(s.logvar_min);
  w.f64(s.logvar_max);
  for (const nn::Mlp* net : {&model.encoder, &model.decoder, &model.prior_net}) {
    for (const auto& layer : net->params.layers) {
      w.array(layer.weight);
      w.array(layer.bias);
    }
  }
  w.array(model.pseudo_inputs);
  return w.take();
}

SwaeModel deserialize_checkpoint(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto magic = r.take(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw ParseError(ParseError::Kind::bad_magic, "checkpoint: magic is not \"SWAE\"");
  }
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw ParseError(ParseError::Kind::bad_version,
                     "checkpoint: unsupported format version " + std::to_string(version));
  }
  ModelShape shape;
  shape.dim_x = checked_extent(r.u64(), "dim_x");
  shape.dim_z = checked_extent(r.u64(), "dim_z");
  shape.k_pseudo = checked_extent(r.u64(), "K");
  const std::uint64_t hidden_count = r.u64();
  if (hidden_count > 64) throw ParseError(ParseError::Kind::shape, "checkpoint: implausible depth");
  shape.hidden.clear();
  for (std::uint64_t i = 0; i < hidden_count; ++i) {
    shape.hidden.push_back(checked_extent(r.u64(), "hidden width"));
  }
  shape.hidden_activation = activation_from_tag(r.u8());
  shape.decoder_output = activation_from_tag(r.u8());
  shape.logvar_min = r.f64();
  shape.logvar_max = r.f64();

  SwaeModel m;
  m.shape = shape;
  m.encoder.spec = encoder_spec(shape);
  m.decoder.spec = decoder_spec(shape);
  m.prior_net.spec = prior_spec(shape);
  for (nn::Mlp* net : {&m.encoder, &m.decoder, &m.prior_net}) {
    for (std::size_t l = 0; l < net->spec.layer_count(); ++l) {
      nn::DenseLayer layer{Tensor::matrix(net->spec.widths[l + 1], net->spec.widths[l]),
                           Tensor::vector(net->spec.widths[l + 1])};
      r.array_into(layer.weight, "weight");
      r.array_into(layer.bias, "bias");
      net->params.layers.push_back(std::move(layer));
    }
  }
  m.pseudo_inputs = Tensor::matrix(shape.k_pseudo, shape.dim_x);
  r.array_into(m.pseudo_inputs, "pseudo-inputs");
  if (!r.at_end()) {
    throw ParseError(ParseError::Kind::truncated, "checkpoint: unexpected trailing bytes");
  }
  return m;
}

void save_checkpoint(const SwaeModel& model, const std::filesystem::path& path) {
  const auto bytes = serialize_checkpoint(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(ParseError::Kind::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ParseError(ParseError::Kind::io, "failed writing " + path.string());
}

SwaeModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseError::Kind::io, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  return deserialize_checkpoint(bytes);
}

}  // namespace swae::cli
