#include "chancert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace chancert {

namespace {

std::string format_double(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.3g", value);
  return buffer;
}

}  // namespace

OracleCheckResult check_choi_equivalence(const std::vector<int>& dims, int trials, int num_kraus,
                                         std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int d : dims) {
    const MubFamily mubs = fourier_pair(d);
    for (int trial = 0; trial < trials; ++trial) {
      const KrausChannel channel = random_channel(d, num_kraus, rng);
      const double channel_side = ft_bavaresco_value(channel_correlations(channel, mubs));
      const double state_side = state_side_ft_value(choi_of(channel), mubs);
      worst = std::max(worst, std::abs(channel_side - state_side));
    }
  }
  OracleCheckResult result;
  result.name = "choi-equivalence";
  result.pass = worst <= tol::oracle_equivalence;
  result.detail = "max |channel - state| = " + format_double(worst) + " over " +
                  std::to_string(trials) + " channels per dimension";
  return result;
}

OracleCheckResult check_soundness(int max_dim, int total_dressings, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> cases;
  for (int d = 2; d <= max_dim; ++d)
    for (int k = 1; k <= d; ++k) cases.emplace_back(d, k);
  const int per_case = std::max(1, total_dressings / static_cast<int>(cases.size()));

  int violations = 0;
  int checked = 0;
  for (const auto& [d, k] : cases) {
    const KrausChannel channel = known_sn_channel(d, k);
    std::vector<MubFamily> families;
    families.push_back(fourier_pair(d));
    if (is_prime(d)) families.push_back(prime_family(d, d + 1));
    for (const MubFamily& mubs : families) {
      const CorrelationTensor ideal = channel_correlations(channel, mubs);
      for (int trial = 0; trial < per_case; ++trial) {
        const CorrelationTensor noisy = apply_noise(ideal, rng.uniform01());
        for (WitnessKind kind : {WitnessKind::ft_bavaresco, WitnessKind::pt_steering,
                                 WitnessKind::ft_morelli}) {
          if (kind == WitnessKind::pt_steering && mubs.num_bases() != 2) continue;
          const CertificationResult result = certify(noisy, kind);
          ++checked;
          if (result.certified_n > k) ++violations;
        }
      }
    }
  }
  OracleCheckResult result;
  result.name = "soundness";
  result.pass = violations == 0;
  result.detail = std::to_string(violations) + " violations over " + std::to_string(checked) +
                  " certifications";
  return result;
}

OracleCheckResult check_pt_bound_consistency(int trials_per_case, std::uint64_t seed) {
  Rng rng(seed);
  double worst_excess = -1e9;
  for (int d : {2, 3}) {
    const MubFamily mubs = fourier_pair(d);
    for (Eigen::Index k = 1; k <= d; ++k) {
      const KrausChannel channel = known_sn_channel(d, k);
      const double bound = witness_bound(WitnessKind::pt_steering, d, 2, k);
      for (int trial = 0; trial < trials_per_case; ++trial) {
        // Trusted MUB inputs, arbitrary projective measurements.
        double lhs = 0.0;
        for (int x = 0; x < 2; ++x) {
          const ComplexMatrix measurement = random_unitary(d, rng);
          const ComplexMatrix& w = mubs.matrices[static_cast<std::size_t>(x)];
          for (Eigen::Index a = 0; a < d; ++a) {
            const ComplexMatrix rho = w.col(a) * w.col(a).adjoint();
            const ComplexMatrix sigma = channel.apply(rho);
            lhs += (measurement.col(a).adjoint() * sigma * measurement.col(a))(0, 0).real();
          }
        }
        worst_excess = std::max(worst_excess, lhs - bound);
      }
    }
  }
  OracleCheckResult result;
  result.name = "pt-bound-consistency";
  result.pass = worst_excess <= tol::oracle_equivalence;
  result.detail = "max LHS - bound = " + format_double(worst_excess) +
                  " over randomized measurements (negative means never violated)";
  return result;
}

OracleCheckResult check_noise_channel_consistency(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int d : {2, 3, 4}) {
    const MubFamily mubs = fourier_pair(d);
    for (int trial = 0; trial < 20; ++trial) {
      const double p = rng.uniform01();
      const ComplexMatrix u = random_unitary(d, rng);
      const CorrelationTensor from_mixed_channel =
          channel_correlations(noisy_unitary_channel(u, p), mubs);
      const CorrelationTensor mixed_tensor =
          apply_noise(channel_correlations(unitary_channel(u), mubs), p);
      for (std::size_t i = 0; i < mixed_tensor.values.size(); ++i)
        worst = std::max(worst,
                         std::abs(mixed_tensor.values[i] - from_mixed_channel.values[i]));
    }
  }
  OracleCheckResult result;
  result.name = "noise-vs-channel";
  result.pass = worst <= 1e-12;
  result.detail = "max |tensor mix - channel mix| = " + format_double(worst);
  return result;
}

std::vector<OracleCheckResult> run_oracle_battery(std::uint64_t seed) {
  return {
      check_choi_equivalence({2, 3, 4, 5}, 100, 2, seed),
      check_soundness(6, 500, seed + 1),
      check_pt_bound_consistency(40, seed + 2),
      check_noise_channel_consistency(seed + 3),
  };
}

}  // namespace chancert
