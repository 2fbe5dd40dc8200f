#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chancert/choi.hpp"

// Brute-force validation battery behind the oracle-check subcommand.
namespace chancert {

struct OracleCheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Channel-picture vs state-picture witness value on the Choi state for
// random channels: trials random num_kraus-operator channels per dimension,
// agreement within tol::oracle_equivalence required.
OracleCheckResult check_choi_equivalence(const std::vector<int>& dims, int trials, int num_kraus,
                                         std::uint64_t seed);

// No witness may certify above k on channels of known Schmidt number k,
// under total_dressings randomized white-noise dressings spread over all
// (d, k) pairs with d <= max_dim.
OracleCheckResult check_soundness(int max_dim, int total_dressings, std::uint64_t seed);

// Steering-type bound: with trusted inputs but randomized projective
// measurements, the two-basis diagonal sum must stay below the bound at the
// channel's Schmidt number. Checked for d in {2, 3}.
OracleCheckResult check_pt_bound_consistency(int trials_per_case, std::uint64_t seed);

// White-noise mixing applied to the correlation tensor must agree exactly
// with running the probabilistically mixed channel.
OracleCheckResult check_noise_channel_consistency(std::uint64_t seed);

std::vector<OracleCheckResult> run_oracle_battery(std::uint64_t seed);

}  // namespace chancert
