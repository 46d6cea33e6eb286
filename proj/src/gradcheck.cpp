#include "swae/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "swae/errors.hpp"

namespace swae::nn {

std::vector<Tensor> fd_gradient(std::span<Tensor* const> params,
                                const std::function<double()>& loss, double h) {
  if (!(h > 0.0)) throw ConfigError("fd_gradient: step must be positive");
  std::vector<Tensor> grads;
  grads.reserve(params.size());
  for (Tensor* p : params) {
    Tensor g(p->shape(), 0.0);
    auto values = p->data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + h;
      const double up = loss();
      values[i] = saved - h;
      const double down = loss();
      values[i] = saved;
      g[i] = (up - down) / (2.0 * h);
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

MlpParams fd_gradient(const MlpParams& params,
                      const std::function<double(const MlpParams&)>& loss, double h) {
  MlpParams work = params;
  auto tensors = work.tensors();
  auto grads = fd_gradient(tensors, [&] { return loss(work); }, h);
  MlpParams out = zeros_like(params);
  auto out_tensors = out.tensors();
  for (std::size_t i = 0; i < grads.size(); ++i) *out_tensors[i] = std::move(grads[i]);
  return out;
}

double relative_error(double a, double b, double floor) noexcept {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

double max_relative_error(std::span<const Tensor* const> a, std::span<const Tensor* const> b,
                          double floor) {
  if (a.size() != b.size()) throw DimensionError("max_relative_error: list lengths differ");
  double worst = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    require_same_shape(*a[t], *b[t], "max_relative_error");
    for (std::size_t i = 0; i < a[t]->size(); ++i) {
      worst = std::max(worst, relative_error((*a[t])[i], (*b[t])[i], floor));
    }
  }
  return worst;
}

}  // namespace swae::nn
