#pragma once

// Central tolerance table. Every numerical comparison threshold used by the
// toolkit lives here so that the conventions are auditable in one place.
namespace chancert::tol {

// ||U^dag U - 1||_max for a matrix to count as unitary.
inline constexpr double unitarity = 1e-10;

// SVD reconstruction residual, relative to ||A||_max.
inline constexpr double svd_reconstruction_rel = 1e-8;

// Relative gap below which adjacent singular values form one degenerate
// cluster (ordering inside a cluster is fixed by a lexicographic convention).
inline constexpr double svd_degenerate_rel_gap = 1e-9;

// | |<phi_i|psi_j>|^2 - 1/d | for two bases to count as mutually unbiased.
inline constexpr double mub_unbiasedness = 1e-9;

// Spectral weights must sum to one within this bound.
inline constexpr double weight_sum = 1e-12;

// Per-column normalization defect allowed in a correlation tensor.
inline constexpr double column_normalization = 1e-9;

// Hermiticity / trace-one / eigenvalue-floor bounds for density operators.
inline constexpr double hermiticity = 1e-10;
inline constexpr double trace_one = 1e-10;
inline constexpr double psd_eigenvalue = 1e-10;

// Kraus completeness: ||sum_k K^dag K - 1||_max.
inline constexpr double trace_preservation = 1e-10;

// Agreement required between the channel-picture and state-picture witness
// evaluations in the brute-force cross-check.
inline constexpr double oracle_equivalence = 1e-9;

}  // namespace chancert::tol
