#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "swae/cli/config.hpp"

namespace swae::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitNumeric = 4,
  kExitVerification = 5,
};

/// Trains from a run-config file, writing <output_dir>/model.ckpt and
/// <output_dir>/metrics.csv. SWAE_OUTPUT_DIR overrides output_dir.
int cmd_train(const std::filesystem::path& config_path, std::ostream& log);

struct GenerateOptions {
  std::filesystem::path checkpoint;
  std::size_t n = 10;
  std::uint64_t seed = 1;
  std::filesystem::path out;
  std::size_t columns = 0;  // grid columns for image output; 0 picks ceil(sqrt(n))
};
/// Image models (sigmoid decoder, square dim_x) get a PGM grid; others a CSV.
int cmd_generate(const GenerateOptions& opts, std::ostream& log);

struct ReconstructOptions {
  std::filesystem::path checkpoint;
  DatasetSpec dataset;
  std::size_t n = 10;
  std::filesystem::path out;
};
/// Original and reconstruction side by side: a PGM with one [original |
/// reconstruction] pair per grid row, or a CSV with x* then r* columns.
int cmd_reconstruct(const ReconstructOptions& opts, std::ostream& log);

struct EncodeOptions {
  std::filesystem::path checkpoint;
  DatasetSpec dataset;
  std::filesystem::path out;
};
/// Latent codes E(x) as CSV `z0,..,z{d-1}[,label]`, one row per sample.
int cmd_encode(const EncodeOptions& opts, std::ostream& log);

struct EvalOptions {
  std::filesystem::path checkpoint;
  DatasetSpec dataset;
  std::string metric;  // knn | local | recon | denoise | genquality
  std::size_t k = 5;
  double sigma = 0.3;
  std::uint64_t seed = 1;
  double test_fraction = 0.2;
  std::size_t target = 0;
  std::size_t targets = 1;     // local: average over target .. target+targets-1
  std::size_t local_n = 100;   // local: number of leading rows considered
  std::size_t n_gen = 500;
  int p = 2;
  std::filesystem::path out;   // CSV appended to; header written when new
};
/// Emits `metric,value,n,seed,k_or_sigma` rows to stdout and, if set, `out`.
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& log);

struct VerifyOtOptions {
  std::size_t max_atoms = 8;
  std::size_t max_dim_x = 4;
  std::size_t max_dim_z = 2;
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  int p = 2;
  double perturb = 0.0;  // test hook: offset added to the split cost
};
inline constexpr double kTheoremTolerance = 1e-9;
/// Random linear encoder/decoder instances; exit 0 iff every gap < 1e-9.
int cmd_verify_ot(const VerifyOtOptions& opts, std::ostream& out);

/// Command-line entry point (subcommands train, generate, reconstruct, encode, eval, verify-ot).
int run(int argc, char** argv);

}  // namespace swae::cli
