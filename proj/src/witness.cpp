#include "chancert/witness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "chancert/errors.hpp"

namespace chancert {

std::string_view witness_name(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::ft_bavaresco:
      return "ft_bavaresco";
    case WitnessKind::pt_steering:
      return "pt_steering";
    case WitnessKind::ft_morelli:
      return "ft_morelli";
  }
  return "unknown";
}

WitnessKind witness_from_name(std::string_view name) {
  if (name == "ft_bavaresco") return WitnessKind::ft_bavaresco;
  if (name == "pt_steering") return WitnessKind::pt_steering;
  if (name == "ft_morelli") return WitnessKind::ft_morelli;
  throw ConfigError("unknown witness '" + std::string(name) +
                    "' (expected ft_bavaresco, pt_steering or ft_morelli)");
}

double bavaresco_cross_sum(const RealMatrix& c0) {
  const Eigen::Index d = c0.rows();
  double total = 0.0;
  // For fixed residue t = (a - b) mod d != 0 the constraints reduce to
  // a != a', so the cross term is (sum_a r_a)^2 - sum_a r_a^2 with
  // r_a = sqrt(c0(a, a - t)).
  for (Eigen::Index t = 1; t < d; ++t) {
    double linear = 0.0;
    double square = 0.0;
    for (Eigen::Index a = 0; a < d; ++a) {
      const Eigen::Index b = (a - t + d) % d;
      const double r = std::sqrt(c0(a, b));
      linear += r;
      square += r * r;
    }
    total += linear * linear - square;
  }
  return total;
}

double ft_bavaresco_value(const CorrelationTensor& c) {
  if (c.num_bases < 2)
    throw std::invalid_argument("ft_bavaresco_value: tensor must carry at least two bases");
  const Eigen::Index d = c.dim;
  RealMatrix c0(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) c0(a, b) = c.at(0, a, b);
  return c.diagonal_sum(0) + static_cast<double>(d) * c.diagonal_sum(1) - bavaresco_cross_sum(c0);
}

double pt_steering_value(const CorrelationTensor& c) {
  if (c.num_bases != 2)
    throw std::invalid_argument("pt_steering_value: tensor must carry exactly two bases");
  return c.diagonal_sum(0) + c.diagonal_sum(1);
}

double ft_morelli_value(const CorrelationTensor& c, Eigen::Index m) {
  if (m < 2) throw std::invalid_argument("ft_morelli_value: m must be >= 2");
  if (c.num_bases < m)
    throw std::invalid_argument("ft_morelli_value: tensor has " + std::to_string(c.num_bases) +
                                " bases, needs " + std::to_string(m));
  double total = 0.0;
  for (Eigen::Index x = 0; x < m; ++x) total += c.diagonal_sum(x);
  return total;
}

double witness_bound(WitnessKind kind, Eigen::Index d, Eigen::Index m, Eigen::Index n) {
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  switch (kind) {
    case WitnessKind::ft_bavaresco:
      return dd * (nn + 1.0);
    case WitnessKind::pt_steering: {
      const double root_n = std::sqrt(nn);
      return 2.0 * root_n * (dd + std::sqrt(dd)) / (root_n + 1.0);
    }
    case WitnessKind::ft_morelli:
      return dd + static_cast<double>(m - 1) * nn;
  }
  throw std::invalid_argument("witness_bound: unknown kind");
}

CertificationResult certify(const CorrelationTensor& c, WitnessKind kind, Eigen::Index m) {
  CertificationResult result;
  result.kind = kind;
  result.dim = c.dim;
  switch (kind) {
    case WitnessKind::ft_bavaresco:
      result.num_bases = 2;
      result.lhs = ft_bavaresco_value(c);
      break;
    case WitnessKind::pt_steering:
      result.num_bases = 2;
      result.lhs = pt_steering_value(c);
      break;
    case WitnessKind::ft_morelli:
      result.num_bases = (m > 0) ? m : c.num_bases;
      result.lhs = ft_morelli_value(c, result.num_bases);
      break;
  }
  result.certified_n = 1;
  for (Eigen::Index n = c.dim - 1; n >= 1; --n) {
    if (result.lhs > result.bound_at(n)) {
      result.certified_n = n + 1;
      break;
    }
  }
  return result;
}

}  // namespace chancert
