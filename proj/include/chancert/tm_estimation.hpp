#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "chancert/fiber.hpp"
#include "chancert/numerics.hpp"

// Approximation of the impure channel by a single transmission matrix and
// extraction of the SVD basis used for state preparation and measurement.
// Two estimators are provided: the coherent spectral mean (exact and fast for
// ideal diagonal fibers) and a blind intensity fit closer in spirit to an
// experimental reconstruction from intensity-only data.
namespace chancert {

enum class TmEstimator { spectral_mean, intensity_fit };

struct ProbeDataset {
  std::vector<ComplexVector> probes_in;
  std::vector<ComplexVector> probes_out;
  struct Sample {
    int in_id = 0;
    int out_id = 0;
    double intensity = 0.0;
  };
  std::vector<Sample> samples;

  void validate() const;  // intensities finite and >= 0, ids in range
};

struct ApproxTm {
  ComplexMatrix matrix;
  TmEstimator method = TmEstimator::spectral_mean;
  Svd svd;
  double fit_residual = 0.0;  // zero for the spectral mean
};

// Coherent spectrally weighted mean sum_i w_i T(lambda_i), taken in the
// co-rotating frame of the fundamental mode (the unobservable common spectral
// phase is removed before summing; see the implementation note). For a
// diagonal MSTM the result is diagonal with entries of modulus <= 1; the
// moduli shrink as mode groups dephase across the band relative to the
// fundamental.
ApproxTm spectral_mean_tm(const Mstm& mstm);

// Spectrally averaged intensity sum_i w_i |<out| T(lambda_i) |in>|^2.
double probe_intensity(const Mstm& mstm, const ComplexVector& in, const ComplexVector& out);

// num_probes samples, each with a fresh Haar-random input/output vector pair.
ProbeDataset simulate_probe_dataset(const Mstm& mstm, int num_probes, Rng& rng);

// Least-squares fit of a single matrix T to intensity data,
//   minimize sum_n (intensity_n - |<out_n| T |in_n>|^2)^2,
// by Wirtinger gradient descent with backtracking. Starts are a spectral
// initializer (for dim <= 48) plus random matrices; the best converged start
// wins. Throws OptimizationFailure if the residual increases on ten
// consecutive step attempts, std::invalid_argument for iters < 1.
ApproxTm intensity_fit_tm(const ProbeDataset& dataset, Eigen::Index dim, int iters, Rng& rng);

// First d columns of V (input side) and U (output side), ordered by
// descending singular value. Throws std::invalid_argument if d exceeds the
// matrix dimension.
struct SubspaceBases {
  ComplexMatrix input;   // D x d
  ComplexMatrix output;  // D x d
};
SubspaceBases leading_subspace(const ApproxTm& approx, Eigen::Index d);

// CSV with header probe_in_id,probe_out_id,intensity. Probe vectors are not
// serialized; externally measured data pairs rows with whatever probe set the
// ingesting run regenerates (or supplies) under the same ids.
void save_probe_csv(const ProbeDataset& dataset, const std::filesystem::path& path);
ProbeDataset load_probe_csv(const std::filesystem::path& path);

}  // namespace chancert
