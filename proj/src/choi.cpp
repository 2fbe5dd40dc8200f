#include "chancert/choi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "chancert/errors.hpp"

namespace chancert {

void KrausChannel::validate() const {
  if (dim < 1) throw InvalidChannelError("KrausChannel: dimension must be >= 1");
  if (kraus.empty()) throw InvalidChannelError("KrausChannel: empty Kraus set");
  ComplexMatrix completeness = ComplexMatrix::Zero(dim, dim);
  for (const ComplexMatrix& k : kraus) {
    if (k.rows() != dim || k.cols() != dim)
      throw InvalidChannelError("KrausChannel: Kraus operator has wrong shape");
    completeness += k.adjoint() * k;
  }
  completeness -= ComplexMatrix::Identity(dim, dim);
  if (max_abs(completeness) > tol::trace_preservation)
    throw InvalidChannelError("KrausChannel: Kraus set is not trace preserving (defect " +
                              std::to_string(max_abs(completeness)) + ")");
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const ComplexMatrix& k : kraus) out.noalias() += k * rho * k.adjoint();
  return out;
}

void ChoiState::validate() const {
  const Eigen::Index d2 = dim * dim;
  if (matrix.rows() != d2 || matrix.cols() != d2)
    throw std::invalid_argument("ChoiState: matrix must be d^2 x d^2");
  if (max_abs(matrix - matrix.adjoint()) > tol::hermiticity)
    throw std::invalid_argument("ChoiState: matrix is not Hermitian");
  if (std::abs(matrix.trace().real() - 1.0) > tol::trace_one ||
      std::abs(matrix.trace().imag()) > tol::trace_one)
    throw std::invalid_argument("ChoiState: trace is not one");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol::psd_eigenvalue)
    throw std::invalid_argument("ChoiState: matrix has a negative eigenvalue");
}

ChoiState choi_of(const KrausChannel& channel) {
  channel.validate();
  const Eigen::Index d = channel.dim;
  ChoiState choi;
  choi.dim = d;
  choi.matrix = ComplexMatrix::Zero(d * d, d * d);
  for (const ComplexMatrix& k : channel.kraus) {
    // (K x 1) sum_i |ii> = sum_i (K|i>) x |i>.
    ComplexVector w = ComplexVector::Zero(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index a = 0; a < d; ++a) w(a * d + i) = k(a, i);
    choi.matrix.noalias() += w * w.adjoint();
  }
  choi.matrix /= static_cast<double>(d);
  choi.validate();
  return choi;
}

CorrelationTensor channel_correlations(const KrausChannel& channel, const MubFamily& mubs) {
  channel.validate();
  if (mubs.dim != channel.dim)
    throw std::invalid_argument("channel_correlations: MUB dimension does not match the channel");
  const Eigen::Index d = channel.dim;
  const Eigen::Index m = mubs.num_bases();

  CorrelationTensor tensor;
  tensor.dim = d;
  tensor.num_bases = m;
  tensor.values.assign(static_cast<std::size_t>(m * d * d), 0.0);
  for (Eigen::Index x = 0; x < m; ++x) {
    const ComplexMatrix& w = mubs.matrices[static_cast<std::size_t>(x)];
    for (Eigen::Index b = 0; b < d; ++b) {
      const ComplexMatrix rho = w.col(b) * w.col(b).adjoint();
      const ComplexMatrix sigma = channel.apply(rho);
      for (Eigen::Index a = 0; a < d; ++a)
        tensor.at(x, a, b) = std::max(0.0, (w.col(a).adjoint() * sigma * w.col(a))(0, 0).real());
    }
  }
  return tensor;
}

double state_side_ft_value(const ChoiState& choi, const MubFamily& mubs) {
  if (mubs.dim != choi.dim)
    throw std::invalid_argument("state_side_ft_value: MUB dimension does not match the state");
  if (mubs.num_bases() < 2)
    throw std::invalid_argument("state_side_ft_value: family must carry at least two bases");
  const Eigen::Index d = choi.dim;
  const ComplexMatrix& rho = choi.matrix;

  // Computational-basis grid q(a, b) = <e_a e_b| rho |e_a e_b>.
  RealMatrix q(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) q(a, b) = std::max(0.0, rho(a * d + b, a * d + b).real());

  double diag0 = 0.0;
  for (Eigen::Index a = 0; a < d; ++a) diag0 += q(a, a);

  // Second-basis projectors |f_a f_a*> with the conjugate on the reference
  // subsystem, taken in the computational basis.
  const ComplexMatrix& w = mubs.matrices[1];
  double diag1 = 0.0;
  for (Eigen::Index a = 0; a < d; ++a) {
    ComplexVector pair(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) pair(i * d + j) = w(i, a) * std::conj(w(j, a));
    diag1 += std::max(0.0, (pair.adjoint() * rho * pair)(0, 0).real());
  }

  const double scaled_q_cross = bavaresco_cross_sum(static_cast<double>(d) * q);
  return static_cast<double>(d) * diag0 + static_cast<double>(d * d) * diag1 - scaled_q_cross;
}

KrausChannel known_sn_channel(Eigen::Index d, Eigen::Index k) {
  if (k < 1 || k > d)
    throw std::invalid_argument("known_sn_channel: k must lie in [1, d], got " + std::to_string(k));
  KrausChannel channel;
  channel.dim = d;
  ComplexMatrix coherent = ComplexMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < k; ++j) coherent(j, j) = 1.0;
  channel.kraus.push_back(coherent);
  for (Eigen::Index j = k; j < d; ++j) {
    ComplexMatrix dephase = ComplexMatrix::Zero(d, d);
    dephase(j, j) = 1.0;
    channel.kraus.push_back(dephase);
  }
  channel.validate();
  return channel;
}

KrausChannel random_channel(Eigen::Index d, int num_kraus, Rng& rng) {
  if (num_kraus < 1) throw std::invalid_argument("random_channel: need at least one Kraus operator");
  ComplexMatrix ginibre(num_kraus * d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < num_kraus * d; ++i) ginibre(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre);
  const ComplexMatrix isometry =
      qr.householderQ() * ComplexMatrix::Identity(num_kraus * d, d);

  KrausChannel channel;
  channel.dim = d;
  for (int b = 0; b < num_kraus; ++b) channel.kraus.push_back(isometry.middleRows(b * d, d));
  channel.validate();
  return channel;
}

KrausChannel noisy_unitary_channel(const ComplexMatrix& u, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("noisy_unitary_channel: p must lie in [0, 1]");
  if (!is_unitary(u)) throw std::invalid_argument("noisy_unitary_channel: matrix is not unitary");
  const Eigen::Index d = u.rows();
  KrausChannel channel;
  channel.dim = d;
  channel.kraus.push_back(std::sqrt(p) * u);
  // The fully depolarizing part rho -> Tr(rho) 1/d has Kraus set
  // {|i><j| / sqrt(d)}.
  const double scale = std::sqrt((1.0 - p) / static_cast<double>(d));
  if (p < 1.0) {
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        ComplexMatrix k = ComplexMatrix::Zero(d, d);
        k(i, j) = scale;
        channel.kraus.push_back(std::move(k));
      }
  }
  channel.validate();
  return channel;
}

KrausChannel depolarizing_mix_channel(Eigen::Index d, double p) {
  return noisy_unitary_channel(ComplexMatrix::Identity(d, d), p);
}

KrausChannel unitary_channel(const ComplexMatrix& u) {
  if (!is_unitary(u)) throw std::invalid_argument("unitary_channel: matrix is not unitary");
  KrausChannel channel;
  channel.dim = u.rows();
  channel.kraus.push_back(u);
  return channel;
}

}  // namespace chancert
