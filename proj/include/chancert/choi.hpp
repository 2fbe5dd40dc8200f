#pragma once

#include <vector>

#include "chancert/correlations.hpp"
#include "chancert/mub.hpp"
#include "chancert/numerics.hpp"
#include "chancert/witness.hpp"

// Small-dimension brute-force validation layer. Channels are given as
// explicit Kraus sets, mapped to Choi states, and the witness expressions are
// evaluated in both the channel picture (through correlation tensors) and the
// state picture (directly on the Choi state). The two routes must agree,
// which validates the channel-side witness algebra numerically.
namespace chancert {

struct KrausChannel {
  Eigen::Index dim = 0;
  std::vector<ComplexMatrix> kraus;

  void validate() const;  // throws InvalidChannelError if not trace preserving
  ComplexMatrix apply(const ComplexMatrix& rho) const;
};

// (Lambda x id) applied to |psi+><psi+| with |psi+> = (1/sqrt(d)) sum |ii>.
// Row index ordering is (output subsystem) * d + (reference subsystem).
struct ChoiState {
  Eigen::Index dim = 0;
  ComplexMatrix matrix;  // d^2 x d^2

  void validate() const;  // Hermitian, PSD, unit trace (within tolerances)
};

ChoiState choi_of(const KrausChannel& channel);

// C_{a,b|x} = Tr(Lambda(|e_{b|x}><e_{b|x}|) |e_{a|x}><e_{a|x}|), exact matrix
// arithmetic. Columns sum to one because the channel is trace preserving.
CorrelationTensor channel_correlations(const KrausChannel& channel, const MubFamily& mubs);

// Bavaresco-type witness evaluated on the Choi state itself, in the same
// normalization as ft_bavaresco_value:
//   d * [ sum_a <e_a e_a|rho|e_a e_a>
//         + d * sum_a <f_a f_a*|rho|f_a f_a*>
//         - cross term on the <e_a e_b|rho|e_a e_b> grid ],
// where {e_a} is the computational basis, {f_a} the second basis of the
// family and * complex conjugation in the computational basis. Agreement
// with the channel-side value is the core oracle identity.
double state_side_ft_value(const ChoiState& choi, const MubFamily& mubs);

// Channel of Schmidt number exactly k by construction: the coherent identity
// on the first k modes plus full dephasing on the complement. Kraus set
// {P_k} union {|j><j| : j >= k}; every Kraus operator has rank <= k and the
// Choi state contains a k-dimensional maximally entangled block.
KrausChannel known_sn_channel(Eigen::Index d, Eigen::Index k);

// Random channel with num_kraus Kraus operators, drawn from the Haar measure
// on Stinespring isometries (QR of a (num_kraus * d) x d Ginibre matrix).
KrausChannel random_channel(Eigen::Index d, int num_kraus, Rng& rng);

// p * (unitary conjugation by u) + (1 - p) * fully depolarizing.
KrausChannel noisy_unitary_channel(const ComplexMatrix& u, double p);

// p * identity + (1 - p) * fully depolarizing.
KrausChannel depolarizing_mix_channel(Eigen::Index d, double p);

// Unitary channel with the given unitary as its single Kraus operator.
KrausChannel unitary_channel(const ComplexMatrix& u);

}  // namespace chancert
