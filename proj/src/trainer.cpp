#include "swae/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "swae/errors.hpp"
#include "swae/kernels.hpp"

namespace swae {

std::string_view to_string(NearestMode mode) noexcept {
  return mode == NearestMode::data_space ? "data" : "latent";
}

NearestMode nearest_mode_from_string(std::string_view name) {
  if (name == "data") return NearestMode::data_space;
  if (name == "latent") return NearestMode::latent_space;
  throw ConfigError("unknown nearest_mode '" + std::string(name) + "' (expected data|latent)");
}

void TrainConfig::validate() const {
  weights.validate();
  if (k_pseudo == 0) throw ConfigError("K must be at least 1");
  if (batch_size == 0) throw ConfigError("batch size must be at least 1");
  if (dim_z == 0) throw ConfigError("dim_z must be positive");
  if (!(adam.lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (!(adam.eps > 0.0)) throw ConfigError("Adam epsilon must be positive");
}

ModelShape TrainConfig::model_shape(std::size_t dim_x) const {
  ModelShape s;
  s.dim_x = dim_x;
  s.dim_z = dim_z;
  s.k_pseudo = k_pseudo;
  s.hidden = hidden;
  s.decoder_output = decoder_output;
  return s;
}

std::size_t nearest_row(std::span<const double> query, const Tensor& candidates) {
  const std::size_t d = query.size();
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < candidates.rows(); ++k) {
    const double dist = kernels::squared_distance(query.data(), candidates.row(k).data(), d);
    if (dist < best_dist) {
      best_dist = dist;
      best = k;
    }
  }
  return best;
}

std::vector<std::size_t> nearest_pseudo_inputs(const Tensor& x, const SwaeModel& model,
                                               NearestMode mode) {
  require_matrix(x, model.dim_x(), "nearest_pseudo_inputs");
  std::vector<std::size_t> out(x.rows());
  if (mode == NearestMode::data_space) {
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = nearest_row(x.row(i), model.pseudo_inputs);
  } else {
    const Tensor zu = encode(model, model.pseudo_inputs);
    const Tensor zx = encode(model, x);
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = nearest_row(zx.row(i), zu);
  }
  return out;
}

std::size_t nearest_pseudo_input(const Tensor& x, const SwaeModel& model, NearestMode mode) {
  if (x.size() != model.dim_x()) throw DimensionError("nearest_pseudo_input: x must have dim_x entries");
  const Tensor row({1, model.dim_x()}, x.values());
  return nearest_pseudo_inputs(row, model, mode).front();
}

std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n, std::size_t batch_size,
                                                    Rng& rng) {
  if (batch_size == 0) throw ConfigError("batch size must be at least 1");
  const std::vector<std::size_t> order = rng.permutation(n);
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t begin = 0; begin < n; begin += batch_size) {
    const std::size_t end = std::min(n, begin + batch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(begin),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

namespace {

// The rng is advanced exactly as in train(), so training continues the same stream.
SwaeModel initial_model_from(const Tensor& features, const TrainConfig& config, Rng& rng) {
  config.validate();
  if (features.empty()) throw ConfigError("train: dataset is empty");
  if (features.rank() != 2) throw DimensionError("train: features must be a matrix");
  return make_model(config.model_shape(features.cols()), features, rng);
}

void check_term(double value, const char* name, std::size_t step) {
  if (!std::isfinite(value)) {
    throw NumericError(std::string("training aborted: ") + name + " is not finite at step " +
                       std::to_string(step));
  }
}

}  // namespace

SwaeModel initial_model(const Tensor& features, const TrainConfig& config) {
  Rng rng(config.seed);
  return initial_model_from(features, config, rng);
}

TrainResult train(const Tensor& features, const TrainConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(config.seed);
  TrainResult result{initial_model_from(features, config, rng), {}};
  SwaeModel& model = result.model;
  TrainLog& log = result.log;

  auto params = model.parameters();
  const std::vector<const Tensor*> const_params(params.begin(), params.end());
  nn::AdamState adam = nn::AdamState::for_params(const_params, config.adam);
  const TermCoefficients coeffs = TermCoefficients::from(config.weights);

  const std::size_t n = features.rows();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    LossBreakdown sum;
    std::size_t epoch_steps = 0;
    for (const auto& rows : epoch_batches(n, config.batch_size, rng)) {
      const Tensor x = features.gather_rows(rows);

      const std::vector<std::size_t> chosen = nearest_pseudo_inputs(x, model, config.nearest_mode);
      Tensor eps = Tensor::matrix(x.rows(), model.dim_z());
      for (double& e : eps.data()) e = rng.standard_normal();

      LossAndGrads step;
      try {
        step = swae_grad(model, x, chosen, eps, coeffs);
      } catch (const NumericError&) {
        // Re-evaluate to name the offending term.
        const Tensor z_d = draw_conditional_latents(model, chosen, eps);
        const LossBreakdown lb = swae_loss(model, x, z_d, config.weights);
        check_term(lb.x_loss, "x_loss", log.steps);
        check_term(lb.recon_loss, "recon_loss", log.steps);
        check_term(lb.z_loss, "z_loss", log.steps);
        throw;
      }
      const auto grads = step.grads.tensors();
      nn::adam_step(adam, params, grads);

      sum.x_loss += step.loss.x_loss;
      sum.recon_loss += step.loss.recon_loss;
      sum.z_loss += step.loss.z_loss;
      sum.total += step.loss.total;
      log.step_totals.push_back(step.loss.total);
      ++log.steps;
      ++epoch_steps;
    }
    const double inv = 1.0 / static_cast<double>(epoch_steps);
    log.epochs.push_back({sum.x_loss * inv, sum.z_loss * inv, sum.recon_loss * inv, sum.total * inv});
  }
  log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace swae
