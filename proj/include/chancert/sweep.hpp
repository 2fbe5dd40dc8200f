#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "chancert/choi.hpp"
#include "chancert/config.hpp"

// Configuration-driven pipeline: build (or load from cache) the MSTM,
// estimate the single-matrix approximation, sweep subspace dimensions and
// MUB counts, certify, and emit CSV plus plot files.
namespace chancert {

struct SweepRow {
  double fiber_length_m = 0.0;
  int d = 0;
  std::string witness;
  int m = 2;
  double p_used = 1.0;
  double lhs = 0.0;
  int certified_n = 1;
  std::int64_t wall_time_ms = 0;
};

// Builds the MSTM for the spec, consulting / refreshing the binary cache
// under cache_dir (keyed by the spec hash).
Mstm cached_mstm(const FiberSpec& spec, const std::filesystem::path& cache_dir);

// Estimator entry point shared by the sweep and the CLI.
ApproxTm estimate_tm(const Mstm& mstm, const RunConfig& config);

// Correlation tensor of the leading d-dimensional subspace for the given
// basis family (identity first), with the configured noise applied by the
// caller.
CorrelationTensor subspace_correlations(const Mstm& mstm, const ApproxTm& approx, int d,
                                        const MubFamily& mubs);

// One row per (d, witness, m) combination, ordered by (d, witness, m).
// Composite d are skipped for m > 2 with a notice on stderr. Witness/m
// combinations that do not apply (the two-basis witnesses with m != 2) are
// skipped silently. The CSV produced from the rows is deterministic for a
// fixed config and seed except for the wall_time_ms column.
std::vector<SweepRow> run_sweep(const RunConfig& config);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

// Static SVG figures: certified dimension versus subspace dimension, one
// series per (witness, m, fiber length). Rows from the two-basis witnesses go
// to certified_vs_dimension.svg, multi-basis rows to mub_enhancement.svg.
// Throws std::invalid_argument for an empty row list.
void emit_plots(const std::vector<SweepRow>& rows, const std::filesystem::path& output_dir);

}  // namespace chancert
