#pragma once

#include <vector>

#include "chancert/numerics.hpp"

namespace chancert {

// A family of mutually unbiased bases, stored as unitary basis-change
// matrices relative to the standard basis. matrices[0] is always the
// identity; column b of matrices[x] is the b-th vector of basis x. Every
// cross-basis overlap satisfies | <phi_i|psi_j> |^2 = 1/d.
struct MubFamily {
  Eigen::Index dim = 0;
  std::vector<ComplexMatrix> matrices;

  Eigen::Index num_bases() const { return static_cast<Eigen::Index>(matrices.size()); }
};

// {identity, discrete Fourier}: a MUB pair available in every dimension d >= 2.
// The Fourier entries are constructed as exp(2*pi*i*(j*k mod d)/d)/sqrt(d).
MubFamily fourier_pair(Eigen::Index d);

// Identity plus m-1 bases of the standard prime-dimension construction:
// for odd prime d, basis x (x = 1..m-1) has columns
//   (1/sqrt(d)) * omega^(x*j^2 + b*j),  omega = exp(2*pi*i/d),
// so x = d reproduces the plain Fourier basis and m = d+1 is a complete set.
// For d = 2 the three Pauli eigenbases are used. Composite d throws
// UnsupportedDimensionError; m outside [2, d+1] throws std::invalid_argument.
MubFamily prime_family(Eigen::Index d, Eigen::Index m);

bool is_prime(Eigen::Index n);

// Worst deviation | |(Wx^dag Wy)_{ij}|^2 - 1/d | over all basis pairs and all
// entries. Zero for an exact family.
double unbiasedness_defect(const MubFamily& family);

}  // namespace chancert
