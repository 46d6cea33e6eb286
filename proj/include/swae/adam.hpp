#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "swae/tensor.hpp"

namespace swae::nn {

struct AdamHyper {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Moment buffers mirror the parameter list they were created for.
struct AdamState {
  AdamHyper hyper;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::uint64_t t = 0;

  static AdamState for_params(std::span<const Tensor* const> params, AdamHyper hyper = {});
};

/// One bias-corrected Adam update applied in place. Gradients are checked for
/// NaN/Inf before anything is modified, so a NumericError leaves both the
/// parameters and the state untouched.
void adam_step(AdamState& state, std::span<Tensor* const> params,
               std::span<const Tensor* const> grads);

}  // namespace swae::nn
