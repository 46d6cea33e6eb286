#include "swae/model.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>

#include "swae/errors.hpp"

namespace swae {

void ModelShape::validate() const {
  if (dim_x == 0 || dim_z == 0) throw ConfigError("model: dim_x and dim_z must be positive");
  if (k_pseudo == 0) throw ConfigError("model: K must be at least 1");
  if (!(logvar_min < logvar_max)) throw ConfigError("model: log-variance bounds out of order");
  for (std::size_t h : hidden) {
    if (h == 0) throw ConfigError("model: hidden widths must be positive");
  }
  if (dim_z >= dim_x) {
    std::clog << "warning: dim_z (" << dim_z << ") is not smaller than dim_x (" << dim_x
              << ")\n";
  }
}

nn::MlpSpec encoder_spec(const ModelShape& s) {
  return nn::MlpSpec::make(s.dim_x, s.hidden, s.dim_z, s.hidden_activation,
                           nn::Activation::identity);
}

nn::MlpSpec decoder_spec(const ModelShape& s) {
  return nn::MlpSpec::make(s.dim_z, s.hidden, s.dim_x, s.hidden_activation, s.decoder_output);
}

nn::MlpSpec prior_spec(const ModelShape& s) {
  return nn::MlpSpec::make(s.dim_x, s.hidden, 2 * s.dim_z, s.hidden_activation,
                           nn::Activation::identity);
}

std::vector<Tensor*> SwaeModel::parameters() {
  std::vector<Tensor*> out;
  for (nn::Mlp* net : {&encoder, &decoder, &prior_net}) {
    auto t = net->params.tensors();
    out.insert(out.end(), t.begin(), t.end());
  }
  out.push_back(&pseudo_inputs);
  return out;
}

std::vector<const Tensor*> SwaeModel::parameters() const {
  std::vector<const Tensor*> out;
  for (const nn::Mlp* net : {&encoder, &decoder, &prior_net}) {
    auto t = net->params.tensors();
    out.insert(out.end(), t.begin(), t.end());
  }
  out.push_back(&pseudo_inputs);
  return out;
}

SwaeModel make_model(const ModelShape& shape, const Tensor& training_features, Rng& rng) {
  shape.validate();
  require_matrix(training_features, shape.dim_x, "make_model training features");
  if (shape.k_pseudo > training_features.rows()) {
    throw ConfigError("model: K (" + std::to_string(shape.k_pseudo) +
                      ") exceeds the number of training rows (" +
                      std::to_string(training_features.rows()) + ")");
  }
  SwaeModel m;
  m.shape = shape;
  m.encoder.spec = encoder_spec(shape);
  m.decoder.spec = decoder_spec(shape);
  m.prior_net.spec = prior_spec(shape);
  m.encoder.params = nn::init_mlp(m.encoder.spec, rng);
  m.decoder.params = nn::init_mlp(m.decoder.spec, rng);
  m.prior_net.params = nn::init_mlp(m.prior_net.spec, rng);
  const auto rows = rng.sample_without_replacement(training_features.rows(), shape.k_pseudo);
  m.pseudo_inputs = training_features.gather_rows(rows);
  return m;
}

Tensor encode(const SwaeModel& model, const Tensor& x) { return model.encoder(x); }

Tensor decode(const SwaeModel& model, const Tensor& z) { return model.decoder(z); }

double clamp_log_variance(double raw, double lo, double hi) noexcept {
  return std::clamp(raw, lo, hi);
}

GaussianParams split_prior_output(const Tensor& raw, double logvar_min, double logvar_max) {
  if (raw.rank() != 2 || raw.cols() % 2 != 0) {
    throw DimensionError("prior output must have an even column count");
  }
  const std::size_t n = raw.rows();
  const std::size_t dz = raw.cols() / 2;
  GaussianParams g{Tensor::matrix(n, dz), Tensor::matrix(n, dz)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = raw.row(i);
    for (std::size_t j = 0; j < dz; ++j) {
      g.mean(i, j) = r[j];
      g.log_variance(i, j) = clamp_log_variance(r[dz + j], logvar_min, logvar_max);
    }
  }
  return g;
}

GaussianParams conditional_prior(const SwaeModel& model, const Tensor& u) {
  return split_prior_output(model.prior_net(u), model.shape.logvar_min, model.shape.logvar_max);
}

Tensor sample_conditional(const GaussianParams& g, const Tensor& eps) {
  require_same_shape(g.mean, g.log_variance, "sample_conditional parameters");
  if (eps.size() != g.mean.size()) {
    throw DimensionError("sample_conditional: noise shape " + eps.shape_string() +
                         " does not match " + g.mean.shape_string());
  }
  Tensor z = g.mean;
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] += std::exp(0.5 * g.log_variance[i]) * eps[i];
  }
  return z;
}

double prior_log_density(const SwaeModel& model, const Tensor& z) {
  const std::size_t dz = model.dim_z();
  if (z.size() != dz) throw DimensionError("prior_log_density: z must have dim_z entries");
  const GaussianParams g = conditional_prior(model, model.pseudo_inputs);
  const std::size_t k = g.mean.rows();
  const double log_norm = -0.5 * static_cast<double>(dz) * std::log(2.0 * std::numbers::pi);

  std::vector<double> terms(k);
  for (std::size_t c = 0; c < k; ++c) {
    double s = log_norm;
    for (std::size_t j = 0; j < dz; ++j) {
      const double lv = g.log_variance(c, j);
      const double d = z[j] - g.mean(c, j);
      s -= 0.5 * (lv + d * d * std::exp(-lv));
    }
    terms[c] = s;
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - peak);
  return peak + std::log(acc) - std::log(static_cast<double>(k));
}

}  // namespace swae
