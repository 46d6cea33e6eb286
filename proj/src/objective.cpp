#include "swae/objective.hpp"

#include <cmath>
#include <string>

#include "swae/errors.hpp"
#include "swae/kernels.hpp"

namespace swae {

void LossWeights::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0, 1]");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
}

double mean_squared_row_distance(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "squared distance");
  if (a.empty()) return 0.0;
  const std::size_t n = a.rows();
  const std::size_t d = a.cols();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += kernels::squared_distance(a.row(i).data(), b.row(i).data(), d);
  }
  return sum / static_cast<double>(n);
}

LossBreakdown combine_terms(double x, double recon, double z, const TermCoefficients& c) noexcept {
  return {x, z, recon, c.x * x + c.recon * recon + c.z * z};
}

LossBreakdown swae_loss(const SwaeModel& model, const Tensor& x, const Tensor& z_d,
                        const LossWeights& weights) {
  require_matrix(x, model.dim_x(), "swae_loss batch");
  require_matrix(z_d, model.dim_z(), "swae_loss latents");
  if (x.rows() != z_d.rows()) throw DimensionError("swae_loss: batch and latent counts differ");
  const Tensor z_e = encode(model, x);
  const double xl = x_loss(x, decode(model, z_d));
  const double rl = recon_loss(x, decode(model, z_e));
  const double zl = z_loss(z_e, z_d);
  return combine_terms(xl, rl, zl, weights);
}

Tensor draw_conditional_latents(const SwaeModel& model, std::span<const std::size_t> u_indices,
                                const Tensor& eps) {
  require_matrix(eps, model.dim_z(), "conditional noise");
  if (eps.rows() != u_indices.size()) {
    throw DimensionError("conditional noise rows must match pseudo-input selections");
  }
  const Tensor u = model.pseudo_inputs.gather_rows(u_indices);
  return sample_conditional(conditional_prior(model, u), eps);
}

std::vector<Tensor*> SwaeGrads::tensors() {
  std::vector<Tensor*> out;
  for (nn::MlpParams* p : {&encoder, &decoder, &prior_net}) {
    auto t = p->tensors();
    out.insert(out.end(), t.begin(), t.end());
  }
  out.push_back(&pseudo_inputs);
  return out;
}

std::vector<const Tensor*> SwaeGrads::tensors() const {
  std::vector<const Tensor*> out;
  for (const nn::MlpParams* p : {&encoder, &decoder, &prior_net}) {
    auto t = p->tensors();
    out.insert(out.end(), t.begin(), t.end());
  }
  out.push_back(&pseudo_inputs);
  return out;
}

namespace {

void add_into(nn::MlpParams& acc, const nn::MlpParams& g) {
  auto a = acc.tensors();
  auto b = g.tensors();
  for (std::size_t t = 0; t < a.size(); ++t) {
    kernels::axpy(1.0, b[t]->data().data(), a[t]->data().data(), a[t]->size());
  }
}

// dL/dA for L = c · mean_n ‖A_n − B_n‖²  is  (2c/N)(A − B).
Tensor squared_distance_grad(const Tensor& a, const Tensor& b, double scale) {
  Tensor g = a;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = scale * (a[i] - b[i]);
  return g;
}

}  // namespace

LossAndGrads swae_grad(const SwaeModel& model, const Tensor& x,
                       std::span<const std::size_t> u_indices, const Tensor& eps,
                       const TermCoefficients& c) {
  require_matrix(x, model.dim_x(), "swae_grad batch");
  require_matrix(eps, model.dim_z(), "swae_grad noise");
  const std::size_t n = x.rows();
  if (eps.rows() != n || u_indices.size() != n) {
    throw DimensionError("swae_grad: batch, noise and selection counts differ");
  }
  for (std::size_t k : u_indices) {
    if (k >= model.k_pseudo()) throw DimensionError("swae_grad: pseudo-input index out of range");
  }
  const std::size_t dz = model.dim_z();

  // Forward: conditional prior on the selected pseudo-inputs, reparameterized draw.
  const Tensor u = model.pseudo_inputs.gather_rows(u_indices);
  auto prior_fw = nn::mlp_forward(model.prior_net.params, model.prior_net.spec, u);
  const Tensor& raw = prior_fw.output;
  const GaussianParams g =
      split_prior_output(raw, model.shape.logvar_min, model.shape.logvar_max);
  const Tensor z_d = sample_conditional(g, eps);

  auto enc_fw = nn::mlp_forward(model.encoder.params, model.encoder.spec, x);
  const Tensor& z_e = enc_fw.output;
  auto gen_fw = nn::mlp_forward(model.decoder.params, model.decoder.spec, z_d);
  auto rec_fw = nn::mlp_forward(model.decoder.params, model.decoder.spec, z_e);

  LossAndGrads out;
  out.loss = combine_terms(x_loss(x, gen_fw.output), recon_loss(x, rec_fw.output),
                           z_loss(z_e, z_d), c);
  if (!std::isfinite(out.loss.total)) {
    throw NumericError("swae_grad: non-finite loss (x=" + std::to_string(out.loss.x_loss) +
                       ", recon=" + std::to_string(out.loss.recon_loss) +
                       ", z=" + std::to_string(out.loss.z_loss) + ")");
  }

  const double inv_n = 1.0 / static_cast<double>(n);

  // Decoder, through both the generated (x-loss) and reconstructed paths.
  auto gen_bw = nn::mlp_backward(model.decoder.params, model.decoder.spec, gen_fw.cache,
                                 squared_distance_grad(gen_fw.output, x, 2.0 * c.x * inv_n));
  auto rec_bw = nn::mlp_backward(model.decoder.params, model.decoder.spec, rec_fw.cache,
                                 squared_distance_grad(rec_fw.output, x, 2.0 * c.recon * inv_n));
  out.grads.decoder = std::move(gen_bw.grads);
  add_into(out.grads.decoder, rec_bw.grads);

  // Encoder, through the reconstruction path and the z-loss.
  Tensor dz_e = std::move(rec_bw.input_grad);
  const Tensor dz_latent = squared_distance_grad(z_e, z_d, 2.0 * c.z * inv_n);
  for (std::size_t i = 0; i < dz_e.size(); ++i) dz_e[i] += dz_latent[i];
  out.grads.encoder =
      nn::mlp_backward(model.encoder.params, model.encoder.spec, enc_fw.cache, dz_e, false).grads;

  // z_d receives the x-loss gradient via the decoder and minus the z-loss gradient.
  Tensor dz_d = std::move(gen_bw.input_grad);
  for (std::size_t i = 0; i < dz_d.size(); ++i) dz_d[i] -= dz_latent[i];

  // Through z = mean + exp(logvar/2)·eps and the log-variance clamp.
  Tensor draw_grad = Tensor::matrix(n, 2 * dz);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dz; ++j) {
      const double up = dz_d(i, j);
      draw_grad(i, j) = up;
      const double r = raw(i, dz + j);
      const bool inside = r > model.shape.logvar_min && r < model.shape.logvar_max;
      draw_grad(i, dz + j) =
          inside ? up * eps(i, j) * 0.5 * std::exp(0.5 * g.log_variance(i, j)) : 0.0;
    }
  }
  auto prior_bw =
      nn::mlp_backward(model.prior_net.params, model.prior_net.spec, prior_fw.cache, draw_grad);
  out.grads.prior_net = std::move(prior_bw.grads);

  // Pseudo-inputs: scatter-add the per-row input gradients onto the chosen rows.
  out.grads.pseudo_inputs = Tensor(model.pseudo_inputs.shape(), 0.0);
  const std::size_t dx = model.dim_x();
  for (std::size_t i = 0; i < n; ++i) {
    kernels::axpy(1.0, prior_bw.input_grad.row(i).data(),
                  out.grads.pseudo_inputs.row(u_indices[i]).data(), dx);
  }
  return out;
}

double swae_cost(const SwaeModel& model, const Tensor& x, std::span<const std::size_t> u_indices,
                 const Tensor& eps, const TermCoefficients& c) {
  const Tensor z_d = draw_conditional_latents(model, u_indices, eps);
  const Tensor z_e = encode(model, x);
  return combine_terms(x_loss(x, decode(model, z_d)), recon_loss(x, decode(model, z_e)),
                       z_loss(z_e, z_d), c)
      .total;
}

}  // namespace swae
