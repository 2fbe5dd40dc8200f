#include "chancert/tm_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "chancert/errors.hpp"

namespace chancert {

void ProbeDataset::validate() const {
  for (const Sample& s : samples) {
    if (!(s.intensity >= 0.0) || !std::isfinite(s.intensity))
      throw std::invalid_argument("ProbeDataset: intensities must be finite and non-negative");
    if (s.in_id < 0 || s.in_id >= static_cast<int>(probes_in.size()) || s.out_id < 0 ||
        s.out_id >= static_cast<int>(probes_out.size()))
      throw std::invalid_argument("ProbeDataset: sample references an unknown probe id");
  }
}

ApproxTm spectral_mean_tm(const Mstm& mstm) {
  const Eigen::Index dim = mstm.dim();
  if (dim == 0) throw std::invalid_argument("spectral_mean_tm: empty mode set");

  // The common spectral phase (dominated by exp(-i n1 k(lambda) L), some 1e5
  // radians across the band at meter lengths) is unobservable: it cancels in
  // every intensity. Averaging the raw matrices would null the whole mean, so
  // the sum is taken in the co-rotating frame of the fundamental mode and the
  // center-wavelength frame phase is re-attached afterwards. For a single
  // wavelength this reproduces T(lambda_0) identically.
  ComplexVector mean;
  if (mstm.num_wavelengths() == 1) {
    mean = mstm.diagonals[0];
  } else {
    mean = ComplexVector::Zero(dim);
    for (Eigen::Index i = 0; i < mstm.num_wavelengths(); ++i) {
      const ComplexVector& diag = mstm.diagonals[static_cast<std::size_t>(i)];
      Complex frame = diag(0);
      const double mag = std::abs(frame);
      frame = (mag > 0.0) ? std::conj(frame) / mag : Complex(1.0, 0.0);
      mean += (mstm.weights[static_cast<std::size_t>(i)] * frame) * diag;
    }
    const ComplexVector& center =
        mstm.diagonals[static_cast<std::size_t>(mstm.num_wavelengths() / 2)];
    mean *= center(0);
  }

  ApproxTm approx;
  approx.matrix = ComplexMatrix::Zero(dim, dim);
  approx.matrix.diagonal() = mean;
  approx.method = TmEstimator::spectral_mean;
  approx.svd = svd(approx.matrix);
  return approx;
}

double probe_intensity(const Mstm& mstm, const ComplexVector& in, const ComplexVector& out) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < mstm.num_wavelengths(); ++i) {
    const ComplexVector& diag = mstm.diagonals[static_cast<std::size_t>(i)];
    const Complex amplitude = (out.array().conjugate() * diag.array() * in.array()).sum();
    total += mstm.weights[static_cast<std::size_t>(i)] * std::norm(amplitude);
  }
  return total;
}

ProbeDataset simulate_probe_dataset(const Mstm& mstm, int num_probes, Rng& rng) {
  if (num_probes < 1) throw std::invalid_argument("simulate_probe_dataset: need num_probes >= 1");
  const Eigen::Index dim = mstm.dim();
  ProbeDataset dataset;
  dataset.probes_in.reserve(num_probes);
  dataset.probes_out.reserve(num_probes);
  dataset.samples.reserve(num_probes);
  for (int p = 0; p < num_probes; ++p) {
    dataset.probes_in.push_back(random_state(dim, rng));
    dataset.probes_out.push_back(random_state(dim, rng));
    dataset.samples.push_back(
        {p, p, probe_intensity(mstm, dataset.probes_in.back(), dataset.probes_out.back())});
  }
  return dataset;
}

namespace {

double fit_residual_of(const ProbeDataset& data, const ComplexMatrix& t) {
  double total = 0.0;
  for (const auto& s : data.samples) {
    const Complex z = data.probes_out[s.out_id].dot(t * data.probes_in[s.in_id]);
    const double r = std::norm(z) - s.intensity;
    total += r * r;
  }
  return total;
}

ComplexMatrix fit_gradient(const ProbeDataset& data, const ComplexMatrix& t) {
  ComplexMatrix grad = ComplexMatrix::Zero(t.rows(), t.cols());
  for (const auto& s : data.samples) {
    const ComplexVector& in = data.probes_in[s.in_id];
    const ComplexVector& out = data.probes_out[s.out_id];
    const Complex z = out.dot(t * in);
    const double r = std::norm(z) - s.intensity;
    grad.noalias() += (2.0 * r * z) * (out * in.adjoint());
  }
  return grad;
}

// Spectral initializer: leading eigenvector of sum_n I_n a_n a_n^dag with
// a_n = vec(out_n in_n^dag), computed by power iteration without forming the
// dim^2 x dim^2 matrix. Skipped for large dim where random starts suffice.
ComplexMatrix spectral_start(const ProbeDataset& data, Eigen::Index dim, Rng& rng) {
  ComplexMatrix t(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) t(i, j) = rng.complex_gaussian();
  t /= t.norm();
  for (int iter = 0; iter < 60; ++iter) {
    ComplexMatrix next = ComplexMatrix::Zero(dim, dim);
    for (const auto& s : data.samples) {
      const ComplexVector& in = data.probes_in[s.in_id];
      const ComplexVector& out = data.probes_out[s.out_id];
      next.noalias() += (s.intensity * out.dot(t * in)) * (out * in.adjoint());
    }
    const double norm = next.norm();
    if (norm == 0.0) break;
    t = next / norm;
  }
  double mean_intensity = 0.0;
  for (const auto& s : data.samples) mean_intensity += s.intensity;
  mean_intensity /= static_cast<double>(data.samples.size());
  // |<out|T|in>|^2 averages ~ ||T||_F^2 / dim^2 over Haar probe pairs.
  return t * (static_cast<double>(dim) * std::sqrt(mean_intensity));
}

}  // namespace

ApproxTm intensity_fit_tm(const ProbeDataset& dataset, Eigen::Index dim, int iters, Rng& rng) {
  if (iters < 1) throw std::invalid_argument("intensity_fit_tm: iters must be >= 1");
  if (dataset.samples.empty()) throw std::invalid_argument("intensity_fit_tm: empty dataset");
  dataset.validate();
  for (const auto& v : dataset.probes_in)
    if (v.size() != dim) throw std::invalid_argument("intensity_fit_tm: probe dimension mismatch");
  for (const auto& v : dataset.probes_out)
    if (v.size() != dim) throw std::invalid_argument("intensity_fit_tm: probe dimension mismatch");

  constexpr int kRandomStarts = 3;
  double data_scale = 0.0;
  for (const auto& s : dataset.samples) data_scale += s.intensity * s.intensity;
  data_scale = std::max(data_scale, 1e-300);

  ComplexMatrix best;
  double best_residual = std::numeric_limits<double>::infinity();

  for (int start = 0; start < kRandomStarts + 1; ++start) {
    if (best_residual < 1e-14 * data_scale) break;  // already at the exact-fit floor
    ComplexMatrix t;
    if (start == 0 && dim <= 48) {
      t = spectral_start(dataset, dim, rng);
    } else {
      t = ComplexMatrix(dim, dim);
      for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) t(i, j) = rng.complex_gaussian();
      t /= std::sqrt(static_cast<double>(dim));
    }

    double residual = fit_residual_of(dataset, t);
    double step = 0.0;
    int stalled_checks = 0;
    for (int iter = 0; iter < iters; ++iter) {
      const ComplexMatrix grad = fit_gradient(dataset, t);
      const double grad_norm2 = grad.squaredNorm();
      if (grad_norm2 < 1e-300) break;
      if (step <= 0.0) step = residual / grad_norm2;

      // Backtracking line search; a step that fails to decrease the residual
      // even after full backtracking counts as one divergence check.
      bool accepted = false;
      for (int backtrack = 0; backtrack < 60; ++backtrack) {
        const ComplexMatrix candidate = t - step * grad;
        const double next_residual = fit_residual_of(dataset, candidate);
        if (next_residual <= residual) {
          t = candidate;
          residual = next_residual;
          step *= 1.25;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (accepted) {
        stalled_checks = 0;
      } else if (++stalled_checks >= 10) {
        throw OptimizationFailure(
            "intensity_fit_tm: residual increased on 10 consecutive checks, last residual = " +
                std::to_string(residual),
            residual);
      }
      if (residual < 1e-28) break;
    }
    if (residual < best_residual) {
      best_residual = residual;
      best = t;
    }
  }

  ApproxTm approx;
  approx.matrix = best;
  approx.method = TmEstimator::intensity_fit;
  approx.fit_residual = best_residual;
  approx.svd = svd(best);
  return approx;
}

SubspaceBases leading_subspace(const ApproxTm& approx, Eigen::Index d) {
  const Eigen::Index full = approx.svd.singular_values.size();
  if (d < 1 || d > full) {
    throw std::invalid_argument("leading_subspace: d = " + std::to_string(d) +
                                " outside [1, " + std::to_string(full) + "]");
  }
  return {approx.svd.v.leftCols(d), approx.svd.u.leftCols(d)};
}

void save_probe_csv(const ProbeDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out << "probe_in_id,probe_out_id,intensity\n";
  char line[96];
  for (const auto& s : dataset.samples) {
    std::snprintf(line, sizeof(line), "%d,%d,%.17g\n", s.in_id, s.out_id, s.intensity);
    out << line;
  }
}

ProbeDataset load_probe_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "probe_in_id,probe_out_id,intensity")
    throw ConfigError("'" + path.string() + "': expected header probe_in_id,probe_out_id,intensity");
  ProbeDataset dataset;
  int max_in = -1, max_out = -1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ProbeDataset::Sample s;
    char extra = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf%c", &s.in_id, &s.out_id, &s.intensity, &extra) != 3)
      throw ConfigError("'" + path.string() + "' line " + std::to_string(line_no) +
                        ": malformed row '" + line + "'");
    max_in = std::max(max_in, s.in_id);
    max_out = std::max(max_out, s.out_id);
    dataset.samples.push_back(s);
  }
  // Probe vectors are supplied separately by the caller; size the id space.
  dataset.probes_in.resize(max_in + 1);
  dataset.probes_out.resize(max_out + 1);
  return dataset;
}

}  // namespace chancert
