#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "chancert/constants.hpp"
#include "chancert/rng.hpp"

// Dense complex linear-algebra substrate shared by every module. Matrices are
// plain Eigen values (immutable-by-convention: all operations return fresh
// values), so read-only sharing across threads is safe.
namespace chancert {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using MatrixStack = std::vector<ComplexMatrix>;

bool all_finite(const ComplexMatrix& a);

// Largest entry modulus; zero for empty matrices.
double max_abs(const ComplexMatrix& a);

// ||A^dag A - 1||_max. Only meaningful for square A.
double unitarity_defect(const ComplexMatrix& a);

bool is_unitary(const ComplexMatrix& a, double tolerance = tol::unitarity);

// Singular value decomposition A = U diag(s) V^dag with two extra conventions
// on top of the factorization itself:
//   - each column pair (u_j, v_j) is rephased so the largest-magnitude entry
//     of u_j is real positive;
//   - inside a degenerate cluster (relative gap < tol::svd_degenerate_rel_gap)
//     columns are ordered by lexicographically descending canonicalized u_j,
//     which keeps e.g. the identity matrix in natural column order.
// Downstream quantities must depend only on the spanned subspaces, never on
// the representative chosen inside a cluster.
struct Svd {
  ComplexMatrix u;
  // Sorted descending up to reordering inside degenerate clusters, where the
  // lexicographic column convention may leave inversions below the cluster
  // width (relative tol::svd_degenerate_rel_gap).
  RealVector singular_values;
  ComplexMatrix v;

  ComplexMatrix reconstruct() const;
};

// Throws std::invalid_argument for non-finite input and NumericFailure (with
// the matrix dimensions in the message) if the factorization does not meet
// the unitarity / reconstruction tolerances.
Svd svd(const ComplexMatrix& a);

// Haar-distributed d x d unitary: QR of a Ginibre matrix with the R diagonal
// rephased to be real positive (Mezzadri's recipe).
ComplexMatrix random_unitary(Eigen::Index d, Rng& rng);

// Haar-random unit vector (normalized complex Gaussian).
ComplexVector random_state(Eigen::Index d, Rng& rng);

}  // namespace chancert
