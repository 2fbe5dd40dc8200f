// chancert: simulate graded-index multi-mode fiber channels, compute
// prepare-and-measure correlations in mutually unbiased bases, and certify
// lower bounds on the channel Schmidt number.
//
// Subcommands:
//   simulate      build (and cache) the multi-spectral transmission matrix
//   sweep         full pipeline over subspace dimensions -> CSV + SVG plots
//   certify       ingest an external correlation CSV and certify it
//   oracle-check  brute-force Choi-state validation battery
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <chrono>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "chancert/config.hpp"
#include "chancert/errors.hpp"
#include "chancert/oracle.hpp"
#include "chancert/sweep.hpp"

namespace {

using namespace chancert;

struct GlobalFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool no_plots = false;
};

RunConfig load_config(const GlobalFlags& flags, bool required) {
  RunConfig config;
  if (!flags.config_path.empty()) {
    config = RunConfig::from_json_file(flags.config_path);
  } else if (required) {
    throw ConfigError("this subcommand needs --config <path>");
  }
  if (flags.seed) config.seed = *flags.seed;
  if (flags.out_dir) config.output_dir = *flags.out_dir;
  if (flags.no_plots) config.emit_plot_files = false;
  return config;
}

int cmd_simulate(const GlobalFlags& flags) {
  const RunConfig config = load_config(flags, false);
  const auto start = std::chrono::steady_clock::now();
  const Mstm mstm = cached_mstm(config.fiber, config.output_dir / "cache");
  const ApproxTm approx = estimate_tm(mstm, config);
  const auto stop = std::chrono::steady_clock::now();

  std::printf("fiber           : %s (L = %g m)\n", config.fiber_name.c_str(),
              config.fiber.length_m);
  std::printf("guided modes    : %lld (largest group %d)\n",
              static_cast<long long>(mstm.dim()),
              mstm.modes.empty() ? 0 : mstm.modes.back().group());
  std::printf("wavelengths     : %lld in [%.6g, %.6g] nm\n",
              static_cast<long long>(mstm.num_wavelengths()), mstm.wavelengths.front() * 1e9,
              mstm.wavelengths.back() * 1e9);
  std::printf("estimator       : %s\n",
              config.estimator == TmEstimator::spectral_mean ? "spectral_mean" : "intensity_fit");
  const Eigen::Index shown = std::min<Eigen::Index>(8, approx.svd.singular_values.size());
  std::printf("leading sigma   :");
  for (Eigen::Index i = 0; i < shown; ++i)
    std::printf(" %.4f", approx.svd.singular_values(i));
  std::printf("\nelapsed         : %lld ms\n",
              static_cast<long long>(
                  std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count()));
  return 0;
}

int cmd_sweep(const GlobalFlags& flags) {
  const RunConfig config = load_config(flags, true);
  const std::vector<SweepRow> rows = run_sweep(config);
  std::filesystem::create_directories(config.output_dir);
  const auto csv_path = config.output_dir / "sweep.csv";
  write_sweep_csv(rows, csv_path);
  std::printf("wrote %zu rows to %s\n", rows.size(), csv_path.string().c_str());
  if (config.emit_plot_files && !rows.empty()) {
    emit_plots(rows, config.output_dir);
    std::printf("wrote plots to %s\n", config.output_dir.string().c_str());
  }
  for (const SweepRow& row : rows)
    std::printf("  L=%gm d=%-4d %-13s m=%-3d p=%.4f lhs=%-12.5f certified n=%d\n",
                row.fiber_length_m, row.d, row.witness.c_str(), row.m, row.p_used, row.lhs,
                row.certified_n);
  return 0;
}

int cmd_certify(const GlobalFlags& flags) {
  const RunConfig config = load_config(flags, true);
  if (config.input_csv.empty())
    throw ConfigError("certify needs 'input_csv' in the config file");
  const CorrelationTensor tensor = load_correlations_csv(config.input_csv);
  std::printf("loaded tensor: d=%lld, %lld bases, normalization defect %.2e\n",
              static_cast<long long>(tensor.dim), static_cast<long long>(tensor.num_bases),
              tensor.normalization_defect());
  const CorrelationTensor noisy = apply_noise(tensor, config.noise);
  for (WitnessKind kind : config.witnesses) {
    if (kind != WitnessKind::ft_morelli && tensor.num_bases != 2) {
      std::fprintf(stderr, "note: skipping %s (needs a two-basis tensor)\n",
                   std::string(witness_name(kind)).c_str());
      continue;
    }
    const CertificationResult result = certify(noisy, kind);
    std::printf("%-13s lhs=%.6f bound(n=%lld)=%.6f certified n=%lld\n",
                std::string(witness_name(kind)).c_str(), result.lhs,
                static_cast<long long>(result.certified_n),
                result.bound_at(result.certified_n), static_cast<long long>(result.certified_n));
  }
  return 0;
}

int cmd_oracle_check(const GlobalFlags& flags) {
  const RunConfig config = load_config(flags, false);
  const auto results = run_oracle_battery(config.seed);
  bool all_pass = true;
  std::printf("%-24s %-6s %s\n", "check", "status", "detail");
  for (const OracleCheckResult& result : results) {
    std::printf("%-24s %-6s %s\n", result.name.c_str(), result.pass ? "PASS" : "FAIL",
                result.detail.c_str());
    all_pass &= result.pass;
  }
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-dimensional quantum channel certification toolkit"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "Path to the JSON run configuration");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Override the config seed");
  std::string out_value;
  auto* out_opt = app.add_option("--out", out_value, "Override the output directory");
  app.add_flag("--no-plots", flags.no_plots, "Skip writing plot files");

  auto* simulate = app.add_subcommand("simulate", "Build and cache the MSTM");
  auto* sweep = app.add_subcommand("sweep", "Run the certification sweep");
  auto* certify_cmd = app.add_subcommand("certify", "Certify an external correlation CSV");
  auto* oracle = app.add_subcommand("oracle-check", "Run the Choi validation battery");
  for (CLI::App* sub : {simulate, sweep, certify_cmd, oracle}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    return app.exit(error) == 0 ? 0 : 2;
  }
  if (*seed_opt) flags.seed = seed_value;
  if (*out_opt) flags.out_dir = out_value;

  try {
    if (simulate->parsed()) return cmd_simulate(flags);
    if (sweep->parsed()) return cmd_sweep(flags);
    if (certify_cmd->parsed()) return cmd_certify(flags);
    if (oracle->parsed()) return cmd_oracle_check(flags);
  } catch (const ConfigError& error) {
    std::fprintf(stderr, "config error: %s\n", error.what());
    return 2;
  } catch (const std::invalid_argument& error) {
    std::fprintf(stderr, "config error: %s\n", error.what());
    return 2;
  } catch (const std::exception& error) {
    std::fprintf(stderr, "numeric failure: %s\n", error.what());
    return 3;
  }
  return 0;
}
