#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "swae/rng.hpp"
#include "swae/tensor.hpp"

namespace swae::nn {

enum class Activation { identity, tanh, sigmoid };

std::string_view to_string(Activation a) noexcept;
/// Throws ConfigError for an unknown name.
Activation activation_from_string(std::string_view name);

/// Layer widths (input, hidden..., output) and one activation per layer.
struct MlpSpec {
  std::vector<std::size_t> widths;
  std::vector<Activation> activations;

  std::size_t layer_count() const noexcept { return activations.size(); }
  std::size_t input_width() const noexcept { return widths.front(); }
  std::size_t output_width() const noexcept { return widths.back(); }

  /// Throws DimensionError unless there is at least one layer, every width is
  /// positive and there is exactly one activation per layer.
  void validate() const;

  /// Hidden layers share `hidden_activation`; the last layer uses `output_activation`.
  static MlpSpec make(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out,
                      Activation hidden_activation, Activation output_activation);

  friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

struct DenseLayer {
  Tensor weight;  // out × in
  Tensor bias;    // out

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct MlpParams {
  std::vector<DenseLayer> layers;

  /// Pointers to every parameter tensor, layer by layer, weight before bias.
  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;
  std::size_t scalar_count() const noexcept;

  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

/// Everything the backward pass needs from a forward pass.
struct MlpCache {
  Tensor input;
  std::vector<Tensor> outputs;  // post-activation output of each layer
};

struct ForwardResult {
  Tensor output;
  MlpCache cache;
};

struct BackwardResult {
  Tensor input_grad;
  MlpParams grads;
};

/// Glorot-uniform weights, zero biases.
MlpParams init_mlp(const MlpSpec& spec, Rng& rng);
MlpParams zeros_like(const MlpParams& params);
/// Throws DimensionError when parameter shapes do not follow the spec.
void check_params(const MlpParams& params, const MlpSpec& spec);

double activate(Activation a, double pre) noexcept;

ForwardResult mlp_forward(const MlpParams& params, const MlpSpec& spec, const Tensor& x);
/// Forward pass without keeping the cache.
Tensor mlp_apply(const MlpParams& params, const MlpSpec& spec, const Tensor& x);
/// With `want_input_grad` false the result's input_grad stays empty.
BackwardResult mlp_backward(const MlpParams& params, const MlpSpec& spec, const MlpCache& cache,
                            const Tensor& dy, bool want_input_grad = true);

/// A network together with its spec.
struct Mlp {
  MlpSpec spec;
  MlpParams params;

  Tensor operator()(const Tensor& x) const { return mlp_apply(params, spec, x); }
  friend bool operator==(const Mlp&, const Mlp&) = default;
};

}  // namespace swae::nn
