#pragma once

#include <functional>
#include <span>
#include <vector>

#include "swae/mlp.hpp"
#include "swae/tensor.hpp"

namespace swae::nn {

/// Central-difference gradient of `loss` with respect to every scalar in
/// `params`. Each scalar is perturbed in place by ±h and restored bit-exactly
/// before moving on; `loss` must read the parameters through the same tensors.
std::vector<Tensor> fd_gradient(std::span<Tensor* const> params,
                                const std::function<double()>& loss, double h = 1e-5);

/// Convenience form for a single network.
MlpParams fd_gradient(const MlpParams& params,
                      const std::function<double(const MlpParams&)>& loss, double h = 1e-5);

/// |a - b| / max(|a|, |b|, floor). The floor keeps entries whose true value is
/// ~0 from turning round-off into huge ratios.
double relative_error(double a, double b, double floor = 1e-4) noexcept;

/// Largest relative_error over matching entries of two tensor lists.
double max_relative_error(std::span<const Tensor* const> a, std::span<const Tensor* const> b,
                          double floor = 1e-4);

}  // namespace swae::nn
