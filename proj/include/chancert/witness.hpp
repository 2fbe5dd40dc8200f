#pragma once

#include <string_view>

#include "chancert/correlations.hpp"

// Schmidt-number witnesses evaluated on correlation tensors. Each witness is
// an inequality LHS(C) <= B(n) that holds for every channel of Schmidt number
// at most n; a strict violation certifies a Schmidt number of at least n + 1.
namespace chancert {

enum class WitnessKind {
  ft_bavaresco,  // two bases, trusted measurements, cross-term penalty
  pt_steering,   // two bases, untrusted measurements (steering-type bound)
  ft_morelli,    // m >= 2 bases, trusted measurements, diagonal sums only
};

std::string_view witness_name(WitnessKind kind);
WitnessKind witness_from_name(std::string_view name);  // throws ConfigError

// Cross-term of the Bavaresco-type witness on the basis-0 block:
//   sum over (a, a', b, b') with a != a', a != b, b != b', b' != a' and
//   (a - a' - b + b') = 0 (mod d) of sqrt(c0(a', b') * c0(a, b)).
// Grouped by the residue t = (a - b) mod d this is O(d^2); the index set has
// exactly d (d-1)^2 members.
double bavaresco_cross_sum(const RealMatrix& c0);

// LHS = sum_a C_{a,a|0} + d * sum_a C_{a,a|1} - cross term; bound d (n + 1).
double ft_bavaresco_value(const CorrelationTensor& c);

// LHS = sum over both bases of the diagonal sums;
// bound 2 sqrt(n) (d + sqrt(d)) / (sqrt(n) + 1). Requires exactly two bases.
double pt_steering_value(const CorrelationTensor& c);

// LHS = sum over the first m bases of the diagonal sums; bound d + (m - 1) n.
double ft_morelli_value(const CorrelationTensor& c, Eigen::Index m);

double witness_bound(WitnessKind kind, Eigen::Index d, Eigen::Index m, Eigen::Index n);

struct CertificationResult {
  WitnessKind kind = WitnessKind::ft_bavaresco;
  Eigen::Index dim = 0;
  Eigen::Index num_bases = 2;
  double lhs = 0.0;
  Eigen::Index certified_n = 1;  // 1 + largest n in [1, d-1] strictly violated

  double bound_at(Eigen::Index n) const { return witness_bound(kind, dim, num_bases, n); }
};

// Scans n = d-1 down to 1 for the first strict violation LHS > B(n). Equality
// certifies nothing. m defaults to 2 for the two-basis witnesses and to the
// tensor's basis count for ft_morelli; pass m explicitly to restrict it.
CertificationResult certify(const CorrelationTensor& c, WitnessKind kind, Eigen::Index m = 0);

}  // namespace chancert
