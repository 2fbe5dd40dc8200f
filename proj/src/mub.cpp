#include "chancert/mub.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "chancert/errors.hpp"

namespace chancert {

namespace {

Complex root_of_unity(Eigen::Index d, Eigen::Index exponent) {
  const Eigen::Index e = ((exponent % d) + d) % d;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(d);
  return {std::cos(angle), std::sin(angle)};
}

ComplexMatrix fourier_matrix(Eigen::Index d) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  ComplexMatrix w(d, d);
  for (Eigen::Index b = 0; b < d; ++b)
    for (Eigen::Index j = 0; j < d; ++j) w(j, b) = scale * root_of_unity(d, j * b);
  return w;
}

}  // namespace

bool is_prime(Eigen::Index n) {
  if (n < 2) return false;
  for (Eigen::Index f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

MubFamily fourier_pair(Eigen::Index d) {
  if (d < 2) throw std::invalid_argument("fourier_pair: dimension must be >= 2");
  MubFamily family;
  family.dim = d;
  family.matrices.push_back(ComplexMatrix::Identity(d, d));
  family.matrices.push_back(fourier_matrix(d));
  return family;
}

MubFamily prime_family(Eigen::Index d, Eigen::Index m) {
  if (!is_prime(d)) {
    throw UnsupportedDimensionError("prime_family: d = " + std::to_string(d) +
                                    " is composite; the construction requires prime d");
  }
  if (m < 2 || m > d + 1) {
    throw std::invalid_argument("prime_family: m must lie in [2, d+1], got " + std::to_string(m));
  }

  MubFamily family;
  family.dim = d;
  family.matrices.push_back(ComplexMatrix::Identity(d, d));

  if (d == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix x_basis(2, 2), y_basis(2, 2);
    x_basis << Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0);
    y_basis << Complex(s, 0), Complex(s, 0), Complex(0, s), Complex(0, -s);
    family.matrices.push_back(x_basis);
    if (m == 3) family.matrices.push_back(y_basis);
    return family;
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index x = 1; x < m; ++x) {
    ComplexMatrix w(d, d);
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index j = 0; j < d; ++j) w(j, b) = scale * root_of_unity(d, x * j * j + b * j);
    family.matrices.push_back(std::move(w));
  }
  return family;
}

double unbiasedness_defect(const MubFamily& family) {
  const double target = 1.0 / static_cast<double>(family.dim);
  double worst = 0.0;
  for (std::size_t x = 0; x < family.matrices.size(); ++x) {
    for (std::size_t y = x + 1; y < family.matrices.size(); ++y) {
      ComplexMatrix overlap = family.matrices[x].adjoint() * family.matrices[y];
      for (Eigen::Index j = 0; j < overlap.cols(); ++j)
        for (Eigen::Index i = 0; i < overlap.rows(); ++i)
          worst = std::max(worst, std::abs(std::norm(overlap(i, j)) - target));
    }
  }
  return worst;
}

}  // namespace chancert
