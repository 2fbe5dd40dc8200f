#include "chancert/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "chancert/errors.hpp"

namespace chancert {

bool all_finite(const ComplexMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

double max_abs(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& a) {
  ComplexMatrix gram = a.adjoint() * a;
  gram -= ComplexMatrix::Identity(a.cols(), a.cols());
  return max_abs(gram);
}

bool is_unitary(const ComplexMatrix& a, double tolerance) {
  return a.rows() == a.cols() && unitarity_defect(a) <= tolerance;
}

ComplexMatrix Svd::reconstruct() const {
  return u * singular_values.asDiagonal() * v.adjoint();
}

namespace {

// Rephase column j of (u, v) jointly so u's largest-magnitude entry is real
// positive. Joint rephasing keeps u_j v_j^dag invariant.
void canonicalize_pair(ComplexMatrix& u, ComplexMatrix& v, Eigen::Index j) {
  Eigen::Index pivot = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double mag = std::abs(u(i, j));
    if (mag > best + 1e-15) {
      best = mag;
      pivot = i;
    }
  }
  if (best <= 0.0) return;
  const Complex phase = std::conj(u(pivot, j)) / best;
  u.col(j) *= phase;
  v.col(j) *= phase;
}

// Lexicographic comparison of canonicalized columns, (Re, Im) pairs in row
// order, descending. Returns true if column a should come before column b.
bool column_lex_before(const ComplexMatrix& u, Eigen::Index a, Eigen::Index b) {
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const Complex& x = u(i, a);
    const Complex& y = u(i, b);
    if (x.real() != y.real()) return x.real() > y.real();
    if (x.imag() != y.imag()) return x.imag() > y.imag();
  }
  return false;
}

}  // namespace

Svd svd(const ComplexMatrix& a) {
  if (!all_finite(a)) throw std::invalid_argument("svd: input has non-finite entries");

  Eigen::JacobiSVD<ComplexMatrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Svd result;
  result.u = solver.matrixU();
  result.v = solver.matrixV();
  result.singular_values = solver.singularValues();

  const Eigen::Index k = result.singular_values.size();
  for (Eigen::Index j = 0; j < k; ++j) canonicalize_pair(result.u, result.v, j);

  // Reorder inside degenerate clusters. Eigen already sorts descending, so
  // clusters are contiguous runs.
  Eigen::Index begin = 0;
  while (begin < k) {
    Eigen::Index end = begin + 1;
    const double scale = std::max(result.singular_values(begin), 1e-300);
    while (end < k &&
           (result.singular_values(begin) - result.singular_values(end)) / scale <
               tol::svd_degenerate_rel_gap) {
      ++end;
    }
    if (end - begin > 1) {
      std::vector<Eigen::Index> order(end - begin);
      std::iota(order.begin(), order.end(), begin);
      std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return column_lex_before(result.u, x, y);
      });
      ComplexMatrix u_block(result.u.rows(), end - begin);
      ComplexMatrix v_block(result.v.rows(), end - begin);
      RealVector s_block(end - begin);
      for (Eigen::Index j = 0; j < end - begin; ++j) {
        u_block.col(j) = result.u.col(order[j]);
        v_block.col(j) = result.v.col(order[j]);
        s_block(j) = result.singular_values(order[j]);
      }
      result.u.middleCols(begin, end - begin) = u_block;
      result.v.middleCols(begin, end - begin) = v_block;
      result.singular_values.segment(begin, end - begin) = s_block;
    }
    begin = end;
  }

  // Inside a degenerate cluster the lexicographic convention may leave
  // inversions below the cluster width; anything larger is a real failure.
  bool ordered = true;
  const double slack =
      tol::svd_degenerate_rel_gap * std::max(k > 0 ? result.singular_values(0) : 0.0, 1e-300);
  for (Eigen::Index i = 0; i + 1 < k; ++i)
    ordered &= result.singular_values(i + 1) <= result.singular_values(i) + slack;

  const double scale = std::max(max_abs(a), 1e-300);
  const bool ok = ordered && unitarity_defect(result.u) <= tol::unitarity &&
                  unitarity_defect(result.v) <= tol::unitarity &&
                  max_abs(result.reconstruct() - a) <= tol::svd_reconstruction_rel * scale;
  if (!ok) {
    throw NumericFailure("svd: factorization of " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " matrix failed validation");
  }
  return result;
}

ComplexMatrix random_unitary(Eigen::Index d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("random_unitary: dimension must be >= 1");
  ComplexMatrix ginibre(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) ginibre(i, j) = rng.complex_gaussian();

  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    q.col(j) *= (mag > 0.0) ? r(j, j) / mag : Complex(1.0, 0.0);
  }
  return q;
}

ComplexVector random_state(Eigen::Index d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("random_state: dimension must be >= 1");
  ComplexVector v(d);
  double norm2 = 0.0;
  do {
    for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.complex_gaussian();
    norm2 = v.squaredNorm();
  } while (norm2 == 0.0);
  return v / std::sqrt(norm2);
}

}  // namespace chancert
