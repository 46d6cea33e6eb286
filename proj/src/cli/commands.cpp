#include "swae/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include "swae/cli/checkpoint.hpp"
#include "swae/cli/output.hpp"
#include "swae/errors.hpp"
#include "swae/eval.hpp"
#include "swae/ot.hpp"
#include "swae/rng.hpp"

namespace swae::cli {

namespace {

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    log << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ParseError& e) {
    log << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const SizeError& e) {
    log << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const DimensionError& e) {
    log << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "data error: " << e.what() << '\n';
    return kExitData;
  }
}

bool is_image_model(const SwaeModel& m) {
  return m.shape.decoder_output == nn::Activation::sigmoid && square_side(m.dim_x()) != 0;
}

std::string column_header(char prefix, std::size_t n) {
  std::string h;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) h += ',';
    h += prefix + std::to_string(i);
  }
  return h;
}

}  // namespace

int cmd_train(const std::filesystem::path& config_path, std::ostream& log) {
  return guarded(log, [&] {
    RunConfig cfg = load_run_config(config_path);
    if (const char* env = std::getenv("SWAE_OUTPUT_DIR"); env != nullptr && *env != '\0') {
      cfg.output_dir = env;
    }
    const data::Dataset ds = load_dataset(cfg.dataset);
    std::filesystem::create_directories(cfg.output_dir);
    const TrainResult result = train(ds.features, cfg.train);
    save_checkpoint(result.model, cfg.output_dir / "model.ckpt");
    write_file(cfg.output_dir / "metrics.csv", metrics_csv(result.log));
    log << "trained " << result.log.steps << " steps in " << result.log.seconds << " s; wrote "
        << (cfg.output_dir / "model.ckpt").string() << '\n';
    return int{kExitOk};
  });
}

int cmd_generate(const GenerateOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    if (opts.n == 0) throw ConfigError("generate: n must be positive");
    const SwaeModel model = load_checkpoint(opts.checkpoint);
    const Tensor samples = eval::generate(model, opts.n, opts.seed);
    if (is_image_model(model)) {
      const std::size_t cols = opts.columns != 0
                                   ? opts.columns
                                   : static_cast<std::size_t>(std::ceil(std::sqrt(double(opts.n))));
      write_file(opts.out, encode_pgm(tile_grid(samples, square_side(model.dim_x()), cols)));
    } else {
      write_file(opts.out, matrix_csv(column_header('x', model.dim_x()), samples));
    }
    return int{kExitOk};
  });
}

int cmd_reconstruct(const ReconstructOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    if (opts.n == 0) throw ConfigError("reconstruct: n must be positive");
    const SwaeModel model = load_checkpoint(opts.checkpoint);
    const data::Dataset ds = load_dataset(opts.dataset).head(opts.n);
    if (ds.dim() != model.dim_x()) throw DimensionError("reconstruct: dataset width does not match model");
    const Tensor rec = decode(model, encode(model, ds.features));
    const std::size_t d = model.dim_x();
    if (is_image_model(model)) {
      // Interleave so each grid row is [original | reconstruction].
      Tensor pairs = Tensor::matrix(2 * ds.size(), d);
      for (std::size_t i = 0; i < ds.size(); ++i) {
        std::copy_n(ds.features.row(i).begin(), d, pairs.row(2 * i).begin());
        std::copy_n(rec.row(i).begin(), d, pairs.row(2 * i + 1).begin());
      }
      write_file(opts.out, encode_pgm(tile_grid(pairs, square_side(d), 2)));
    } else {
      Tensor both = Tensor::matrix(ds.size(), 2 * d);
      for (std::size_t i = 0; i < ds.size(); ++i) {
        std::copy_n(ds.features.row(i).begin(), d, both.row(i).begin());
        std::copy_n(rec.row(i).begin(), d, both.row(i).begin() + static_cast<std::ptrdiff_t>(d));
      }
      write_file(opts.out, matrix_csv(column_header('x', d) + ',' + column_header('r', d), both));
    }
    return int{kExitOk};
  });
}

int cmd_encode(const EncodeOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const SwaeModel model = load_checkpoint(opts.checkpoint);
    const data::Dataset ds = load_dataset(opts.dataset);
    if (ds.dim() != model.dim_x()) throw DimensionError("encode: dataset width does not match model");
    const Tensor z = encode(model, ds.features);
    std::string csv = column_header('z', z.cols()) + (ds.labels ? ",label\n" : "\n");
    for (std::size_t i = 0; i < z.rows(); ++i) {
      for (std::size_t c = 0; c < z.cols(); ++c) {
        if (c) csv += ',';
        csv += format_real(z(i, c));
      }
      if (ds.labels) csv += ',' + std::to_string((*ds.labels)[i]);
      csv += '\n';
    }
    write_file(opts.out, csv);
    return int{kExitOk};
  });
}

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const std::string& m = opts.metric;
    if (m != "knn" && m != "local" && m != "recon" && m != "denoise" && m != "genquality") {
      log << "usage error: unknown metric '" << m
          << "' (expected knn|local|recon|denoise|genquality)\n";
      return int{kExitUsage};
    }
    const SwaeModel model = load_checkpoint(opts.checkpoint);
    const data::Dataset ds = load_dataset(opts.dataset);
    if (ds.dim() != model.dim_x()) throw DimensionError("eval: dataset width does not match model");

    std::vector<eval::EvalReport> reports;
    if (m == "knn") {
      if (!ds.labels) throw ConfigError("eval knn: dataset has no labels");
      const double fr[] = {1.0 - opts.test_fraction, opts.test_fraction};
      const auto parts = data::split(ds, fr, opts.seed);
      const double acc =
          eval::knn_accuracy(encode(model, parts[0].features), *parts[0].labels,
                             encode(model, parts[1].features), *parts[1].labels, opts.k);
      reports.push_back({"knn", acc, parts[1].size(), opts.seed, double(opts.k)});
    } else if (m == "local") {
      const data::Dataset sub = ds.head(opts.local_n);
      const Tensor z = encode(model, sub.features);
      if (opts.targets == 0 || opts.target + opts.targets > sub.size()) {
        throw ConfigError("eval local: target range exceeds the evaluated rows");
      }
      double sum = 0.0;
      for (std::size_t t = opts.target; t < opts.target + opts.targets; ++t) {
        sum += eval::local_structure_spearman(sub.features, z, t).rho;
      }
      reports.push_back({"local", sum / double(opts.targets), sub.size(), opts.seed,
                         double(opts.target)});
    } else if (m == "recon") {
      reports.push_back({"recon", eval::reconstruction_error(model, ds), ds.size(), opts.seed, 0.0});
    } else if (m == "denoise") {
      const auto r = eval::denoise_report(model, ds, opts.sigma, opts.seed);
      reports.push_back({"denoise_noisy", r.mse_noisy_to_clean, ds.size(), opts.seed, opts.sigma});
      reports.push_back({"denoise_recon", r.mse_recon_to_clean, ds.size(), opts.seed, opts.sigma});
    } else {
      const double w = eval::generation_quality(model, ds, opts.n_gen, opts.seed, opts.p);
      reports.push_back({"genquality", w, opts.n_gen, opts.seed, double(opts.p)});
    }

    std::string rows;
    for (const auto& r : reports) rows += eval_csv_row(r);
    out << rows;
    if (!opts.out.empty()) {
      const bool fresh = !std::filesystem::exists(opts.out) || std::filesystem::file_size(opts.out) == 0;
      std::ofstream f(opts.out, std::ios::binary | std::ios::app);
      if (!f) throw ParseError(ParseError::Kind::io, "cannot append to " + opts.out.string());
      if (fresh) f << kEvalCsvHeader << '\n';
      f << rows;
    }
    return int{kExitOk};
  });
}

int cmd_verify_ot(const VerifyOtOptions& opts, std::ostream& out) {
  return guarded(out, [&] {
    if (opts.max_atoms == 0 || opts.max_dim_x == 0 || opts.max_dim_z == 0 || opts.trials == 0) {
      throw ConfigError("verify-ot: sizes and trial count must be positive");
    }
    if (opts.max_atoms > 64) throw ConfigError("verify-ot: at most 64 atoms per instance");
    Rng rng(opts.seed);
    auto normal_matrix = [&](std::size_t r, std::size_t c) {
      Tensor t = Tensor::matrix(r, c);
      for (double& v : t.data()) v = rng.standard_normal();
      return t;
    };
    // y = x·Aᵀ for a dout × din matrix A.
    auto linear = [](Tensor a) {
      return [a = std::move(a)](const Tensor& x) {
        Tensor y = Tensor::matrix(x.rows(), a.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) {
          for (std::size_t o = 0; o < a.rows(); ++o) {
            double s = 0.0;
            for (std::size_t c = 0; c < a.cols(); ++c) s += x(i, c) * a(o, c);
            y(i, o) = s;
          }
        }
        return y;
      };
    };

    double max_gap = 0.0;
    for (std::size_t t = 0; t < opts.trials; ++t) {
      const std::size_t n = 1 + rng.uniform_index(opts.max_atoms);
      const std::size_t dx = 1 + rng.uniform_index(opts.max_dim_x);
      const std::size_t dz = 1 + rng.uniform_index(opts.max_dim_z);
      const Tensor x = normal_matrix(n, dx);
      const Tensor z = normal_matrix(n, dz);
      const auto enc = linear(normal_matrix(dz, dx));
      const auto dec = linear(normal_matrix(dx, dz));
      const auto r = ot::verify_theorem1(x, z, enc, dec, opts.p, {opts.perturb});
      max_gap = std::max(max_gap, r.gap);
    }
    const bool ok = max_gap < kTheoremTolerance;
    out << "trials " << opts.trials << "\nmax_gap " << format_real(max_gap) << '\n'
        << (ok ? "PASS" : "FAIL") << '\n';
    return int{ok ? kExitOk : kExitVerification};
  });
}

namespace {

void add_dataset_options(CLI::App& app, DatasetSpec& ds, std::string& kind,
                         std::filesystem::path& config) {
  app.add_option("--config", config, "Run config to take dataset settings from");
  app.add_option("--dataset", kind, "gmm or idx")->check(CLI::IsMember({"gmm", "idx"}));
  app.add_option("--gmm-modes", ds.gmm_modes);
  app.add_option("--gmm-dim", ds.gmm_dim);
  app.add_option("--gmm-n", ds.gmm_n);
  app.add_option("--gmm-seed", ds.gmm_seed);
  app.add_option("--idx-images", ds.idx_images);
  app.add_option("--idx-labels", ds.idx_labels);
  app.add_option("--limit", ds.limit, "Keep only the first N rows");
}

// --config seeds the dataset spec; explicit flags given on the command line win.
DatasetSpec resolve_dataset(const CLI::App& app, const DatasetSpec& flags, const std::string& kind,
                            const std::filesystem::path& config) {
  DatasetSpec ds = config.empty() ? DatasetSpec{} : load_run_config(config).dataset;
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--dataset")) ds.kind = kind == "idx" ? DatasetKind::idx : DatasetKind::gmm;
  if (given("--gmm-modes")) ds.gmm_modes = flags.gmm_modes;
  if (given("--gmm-dim")) ds.gmm_dim = flags.gmm_dim;
  if (given("--gmm-n")) ds.gmm_n = flags.gmm_n;
  if (given("--gmm-seed")) ds.gmm_seed = flags.gmm_seed;
  if (given("--idx-images")) ds.idx_images = flags.idx_images;
  if (given("--idx-labels")) ds.idx_labels = flags.idx_labels;
  if (given("--limit")) ds.limit = flags.limit;
  return ds;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Symmetric Wasserstein autoencoder toolkit"};
  app.require_subcommand(1);

  std::filesystem::path train_config;
  auto* train_cmd = app.add_subcommand("train", "Train a model from a run config");
  train_cmd->add_option("config", train_config, "Run config file")->required();

  GenerateOptions gen;
  auto* gen_cmd = app.add_subcommand("generate", "Sample from the learned prior and decode");
  gen_cmd->add_option("--ckpt", gen.checkpoint)->required();
  gen_cmd->add_option("--n", gen.n);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out)->required();
  gen_cmd->add_option("--cols", gen.columns, "Grid columns for image output");

  ReconstructOptions rec;
  std::string rec_kind;
  std::filesystem::path rec_config;
  auto* rec_cmd = app.add_subcommand("reconstruct", "Original vs reconstruction output");
  rec_cmd->add_option("--ckpt", rec.checkpoint)->required();
  rec_cmd->add_option("--n", rec.n);
  rec_cmd->add_option("--out", rec.out)->required();
  add_dataset_options(*rec_cmd, rec.dataset, rec_kind, rec_config);

  EncodeOptions enc;
  std::string enc_kind;
  std::filesystem::path enc_config;
  auto* enc_cmd = app.add_subcommand("encode", "Write latent codes as CSV");
  enc_cmd->add_option("--ckpt", enc.checkpoint)->required();
  enc_cmd->add_option("--out", enc.out)->required();
  add_dataset_options(*enc_cmd, enc.dataset, enc_kind, enc_config);

  EvalOptions ev;
  std::string ev_kind;
  std::filesystem::path ev_config;
  auto* ev_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  ev_cmd->add_option("--ckpt", ev.checkpoint)->required();
  ev_cmd->add_option("--metric", ev.metric, "knn|local|recon|denoise|genquality")->required();
  ev_cmd->add_option("--k", ev.k);
  ev_cmd->add_option("--sigma", ev.sigma);
  ev_cmd->add_option("--seed", ev.seed);
  ev_cmd->add_option("--test-fraction", ev.test_fraction);
  ev_cmd->add_option("--target", ev.target);
  ev_cmd->add_option("--targets", ev.targets);
  ev_cmd->add_option("--local-n", ev.local_n);
  ev_cmd->add_option("--n-gen", ev.n_gen);
  ev_cmd->add_option("--p", ev.p);
  ev_cmd->add_option("--out", ev.out, "CSV file to append to");
  add_dataset_options(*ev_cmd, ev.dataset, ev_kind, ev_config);

  VerifyOtOptions vo;
  auto* vo_cmd = app.add_subcommand("verify-ot", "Check the joint/split optimal-transport identity");
  vo_cmd->add_option("--n", vo.max_atoms, "Maximum atoms per instance");
  vo_cmd->add_option("--dim-x", vo.max_dim_x);
  vo_cmd->add_option("--dim-z", vo.max_dim_z);
  vo_cmd->add_option("--trials", vo.trials);
  vo_cmd->add_option("--seed", vo.seed);
  vo_cmd->add_option("--p", vo.p);
  vo_cmd->add_option("--perturb", vo.perturb, "Test hook: offset added to the split cost");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*train_cmd) return cmd_train(train_config, std::cerr);
  if (*gen_cmd) return cmd_generate(gen, std::cerr);
  if (*rec_cmd) {
    return guarded(std::cerr, [&] {
      rec.dataset = resolve_dataset(*rec_cmd, rec.dataset, rec_kind, rec_config);
      return cmd_reconstruct(rec, std::cerr);
    });
  }
  if (*enc_cmd) {
    return guarded(std::cerr, [&] {
      enc.dataset = resolve_dataset(*enc_cmd, enc.dataset, enc_kind, enc_config);
      return cmd_encode(enc, std::cerr);
    });
  }
  if (*ev_cmd) {
    return guarded(std::cerr, [&] {
      ev.dataset = resolve_dataset(*ev_cmd, ev.dataset, ev_kind, ev_config);
      return cmd_eval(ev, std::cout, std::cerr);
    });
  }
  if (*vo_cmd) return cmd_verify_ot(vo, std::cout);
  return kExitUsage;
}

}  // namespace swae::cli
