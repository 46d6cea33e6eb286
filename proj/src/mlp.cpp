#include "swae/mlp.hpp"

#include <cmath>
#include <string>

#include "swae/errors.hpp"
#include "swae/kernels.hpp"

namespace swae::nn {

std::string_view to_string(Activation a) noexcept {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "identity";
}

Activation activation_from_string(std::string_view name) {
  if (name == "identity") return Activation::identity;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

void MlpSpec::validate() const {
  if (activations.empty()) throw DimensionError("MlpSpec: at least one layer is required");
  if (widths.size() != activations.size() + 1) {
    throw DimensionError("MlpSpec: expected " + std::to_string(activations.size() + 1) +
                         " widths, got " + std::to_string(widths.size()));
  }
  for (std::size_t w : widths) {
    if (w == 0) throw DimensionError("MlpSpec: layer widths must be positive");
  }
}

MlpSpec MlpSpec::make(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out,
                      Activation hidden_activation, Activation output_activation) {
  MlpSpec spec;
  spec.widths.push_back(in);
  for (std::size_t h : hidden) {
    spec.widths.push_back(h);
    spec.activations.push_back(hidden_activation);
  }
  spec.widths.push_back(out);
  spec.activations.push_back(output_activation);
  spec.validate();
  return spec;
}

std::vector<Tensor*> MlpParams::tensors() {
  std::vector<Tensor*> out;
  out.reserve(2 * layers.size());
  for (auto& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

std::vector<const Tensor*> MlpParams::tensors() const {
  std::vector<const Tensor*> out;
  out.reserve(2 * layers.size());
  for (const auto& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

std::size_t MlpParams::scalar_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

MlpParams init_mlp(const MlpSpec& spec, Rng& rng) {
  spec.validate();
  MlpParams params;
  params.layers.reserve(spec.layer_count());
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    const std::size_t in = spec.widths[l];
    const std::size_t out = spec.widths[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    DenseLayer layer{Tensor::matrix(out, in), Tensor::vector(out)};
    for (double& w : layer.weight.data()) w = rng.uniform(-limit, limit);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

MlpParams zeros_like(const MlpParams& params) {
  MlpParams z = params;
  for (auto& l : z.layers) {
    l.weight.fill(0.0);
    l.bias.fill(0.0);
  }
  return z;
}

void check_params(const MlpParams& params, const MlpSpec& spec) {
  spec.validate();
  if (params.layers.size() != spec.layer_count()) {
    throw DimensionError("MlpParams: layer count does not match spec");
  }
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    const auto& layer = params.layers[l];
    const std::size_t in = spec.widths[l];
    const std::size_t out = spec.widths[l + 1];
    if (layer.weight.rank() != 2 || layer.weight.rows() != out || layer.weight.cols() != in ||
        layer.bias.rank() != 1 || layer.bias.size() != out) {
      throw DimensionError("MlpParams: layer " + std::to_string(l) + " has shape " +
                           layer.weight.shape_string() + "/" + layer.bias.shape_string() +
                           ", spec wants [" + std::to_string(out) + "x" + std::to_string(in) + "]");
    }
  }
}

double activate(Activation a, double pre) noexcept {
  switch (a) {
    case Activation::identity: return pre;
    case Activation::tanh: return std::tanh(pre);
    case Activation::sigmoid:
      if (pre >= 0.0) return 1.0 / (1.0 + std::exp(-pre));
      {
        const double e = std::exp(pre);
        return e / (1.0 + e);
      }
  }
  return pre;
}

namespace {

// d activation / d pre, written in terms of the activation output.
double activation_slope(Activation a, double out) noexcept {
  switch (a) {
    case Activation::identity: return 1.0;
    case Activation::tanh: return 1.0 - out * out;
    case Activation::sigmoid: return out * (1.0 - out);
  }
  return 1.0;
}

Tensor dense_forward(const DenseLayer& layer, Activation act, const Tensor& x) {
  const std::size_t m = x.rows();
  const std::size_t in = layer.weight.cols();
  const std::size_t out = layer.weight.rows();
  Tensor y = Tensor::matrix(m, out);
  kernels::matmul_nt(x.data().data(), layer.weight.data().data(), y.data().data(), m, in, out);
  for (std::size_t i = 0; i < m; ++i) {
    auto row = y.row(i);
    for (std::size_t j = 0; j < out; ++j) row[j] = activate(act, row[j] + layer.bias[j]);
  }
  return y;
}

}  // namespace

ForwardResult mlp_forward(const MlpParams& params, const MlpSpec& spec, const Tensor& x) {
  check_params(params, spec);
  require_matrix(x, spec.input_width(), "mlp_forward input");
  ForwardResult result;
  result.cache.input = x;
  result.cache.outputs.reserve(spec.layer_count());
  const Tensor* current = &x;
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    result.cache.outputs.push_back(dense_forward(params.layers[l], spec.activations[l], *current));
    current = &result.cache.outputs.back();
  }
  result.output = result.cache.outputs.back();
  return result;
}

Tensor mlp_apply(const MlpParams& params, const MlpSpec& spec, const Tensor& x) {
  check_params(params, spec);
  require_matrix(x, spec.input_width(), "mlp_apply input");
  Tensor current = x;
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    current = dense_forward(params.layers[l], spec.activations[l], current);
  }
  return current;
}

BackwardResult mlp_backward(const MlpParams& params, const MlpSpec& spec, const MlpCache& cache,
                            const Tensor& dy, bool want_input_grad) {
  check_params(params, spec);
  if (cache.outputs.size() != spec.layer_count()) {
    throw DimensionError("mlp_backward: cache does not come from this network");
  }
  require_same_shape(dy, cache.outputs.back(), "mlp_backward output gradient");

  BackwardResult result{Tensor(), zeros_like(params)};
  const std::size_t m = dy.rows();
  Tensor upstream = dy;
  for (std::size_t l = spec.layer_count(); l-- > 0;) {
    const DenseLayer& layer = params.layers[l];
    DenseLayer& grad = result.grads.layers[l];
    const Tensor& out = cache.outputs[l];
    const Tensor& in = l == 0 ? cache.input : cache.outputs[l - 1];
    const std::size_t n_in = layer.weight.cols();
    const std::size_t n_out = layer.weight.rows();

    Tensor dpre = std::move(upstream);
    for (std::size_t i = 0; i < dpre.size(); ++i) {
      dpre[i] *= activation_slope(spec.activations[l], out[i]);
    }
    kernels::matmul_tn_acc(dpre.data().data(), in.data().data(), grad.weight.data().data(), m,
                           n_out, n_in);
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = dpre.row(i);
      for (std::size_t j = 0; j < n_out; ++j) grad.bias[j] += row[j];
    }
    if (l == 0 && !want_input_grad) break;
    upstream = Tensor::matrix(m, n_in);
    kernels::matmul_nn_acc(dpre.data().data(), layer.weight.data().data(),
                           upstream.data().data(), m, n_out, n_in);
  }
  if (want_input_grad) result.input_grad = std::move(upstream);
  return result;
}

}  // namespace swae::nn
