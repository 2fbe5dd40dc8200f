#pragma once

#include <filesystem>
#include <vector>

#include "chancert/fiber.hpp"
#include "chancert/mub.hpp"
#include "chancert/tm_estimation.hpp"

// Prepare-and-measure correlation statistics C_{a,b|x}: the probability of
// output a when preparing the b-th vector of basis x, measuring in the same
// basis, with each column normalized to sum one.
namespace chancert {

struct CorrelationTensor {
  Eigen::Index dim = 0;
  Eigen::Index num_bases = 0;
  std::vector<double> values;  // indexed (x, a, b)

  double& at(Eigen::Index x, Eigen::Index a, Eigen::Index b) {
    return values[static_cast<std::size_t>((x * dim + a) * dim + b)];
  }
  double at(Eigen::Index x, Eigen::Index a, Eigen::Index b) const {
    return values[static_cast<std::size_t>((x * dim + a) * dim + b)];
  }

  double diagonal_sum(Eigen::Index x) const;

  // Worst per-column deviation from sum_a C_{a,b|x} = 1.
  double normalization_defect() const;
  void validate() const;  // throws std::invalid_argument on defect

  // C_{a,b|x} = delta_ab for every basis: the witness-perfect channel.
  static CorrelationTensor perfect(Eigen::Index dim, Eigen::Index num_bases);
};

enum class NoiseKind { none, fixed_p, quadratic_p };

// White-noise model: the ideal correlations are mixed with the fully
// depolarized tensor (all entries 1/d) using a mixing parameter p that is
// either fixed or a quadratic function of the subspace dimension,
// p(d) = a d^2 + b d + c clamped to [0, 1].
struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  double p = 1.0;                      // fixed_p
  double a = 0.0, b = 0.0, c = 1.0;    // quadratic_p coefficients

  double mixing_at(Eigen::Index d) const;

  static NoiseModel none_model() { return {}; }
  static NoiseModel fixed(double p);
  static NoiseModel quadratic(double a, double b, double c);
  // Quadratic coefficient presets fitted for the 2 m and 5 m fibers.
  static NoiseModel paper_2m() { return quadratic(7.415e-6, -2.851e-3, 9.864e-1); }
  static NoiseModel paper_5m() { return quadratic(6.167e-6, -2.549e-3, 8.769e-1); }
};

// Full simulated measurement: for each wavelength, rotate the leading
// subspace bases by W^(x), take squared amplitudes
//   C^(lambda)_{a,b|x} = | (W^(x)^dag (out^dag T(lambda) in) W^(x))_{ab} |^2,
// average over the band with the spectral weights, then normalize each
// column. The lambda reduction order is fixed, so results are bit-stable
// regardless of thread count.
CorrelationTensor mub_correlations(const Mstm& mstm, const SubspaceBases& bases,
                                   const MubFamily& mubs);

// Every entry -> p * C + (1 - p)/d. Normalization is preserved. A fixed p
// outside [0, 1] throws std::invalid_argument.
CorrelationTensor apply_noise(const CorrelationTensor& c, const NoiseModel& model);
CorrelationTensor apply_noise(const CorrelationTensor& c, double p);

// CSV with header x,a,b,value; the ingestion path for external lab data.
void save_correlations_csv(const CorrelationTensor& c, const std::filesystem::path& path);
CorrelationTensor load_correlations_csv(const std::filesystem::path& path);

}  // namespace chancert
