#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "chancert/correlations.hpp"
#include "chancert/fiber.hpp"
#include "chancert/tm_estimation.hpp"
#include "chancert/witness.hpp"

// Run configuration: a single JSON file with a versioned schema. Unknown keys
// are hard errors so typos cannot silently change a run. See README.md for
// the schema reference.
namespace chancert {

// Sentinel inside mub_m meaning "the complete set of d + 1 bases".
inline constexpr int kFullMubSet = -1;

struct RunConfig {
  FiberSpec fiber = FiberSpec::paper_2m();
  std::string fiber_name = "paper-2m";
  TmEstimator estimator = TmEstimator::spectral_mean;
  std::vector<WitnessKind> witnesses = {WitnessKind::ft_bavaresco, WitnessKind::pt_steering};
  std::vector<int> mub_m = {2};
  std::vector<int> dims = {4, 8, 13, 29, 53, 89, 131, 173};
  NoiseModel noise;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  int num_probes = 0;  // 0 -> 4 * D^2
  int fit_iters = 2000;
  std::string input_csv;  // correlation CSV for the certify subcommand
  bool emit_plot_files = true;

  void validate() const;  // throws ConfigError

  static RunConfig from_json_file(const std::filesystem::path& path);
  static RunConfig from_json_text(const std::string& text, const std::string& origin = "<string>");
};

}  // namespace chancert
