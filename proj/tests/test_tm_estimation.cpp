#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "chancert/correlations.hpp"
#include "chancert/errors.hpp"
#include "chancert/tm_estimation.hpp"
#include "chancert/witness.hpp"
#include "test_helpers.hpp"

using namespace chancert;

namespace {

// Hand-built two-mode MSTM with two equally weighted wavelengths: the
// fundamental keeps phase zero, the second mode swings by +-theta.
Mstm two_phase_mstm(double theta) {
  Mstm mstm;
  mstm.spec = testing::small_fiber(1.0, 8e-6, 11);
  mstm.modes = {ModeIndex{0, 0}, ModeIndex{0, 1}};
  mstm.wavelengths = {809e-9, 811e-9};
  mstm.weights = {0.5, 0.5};
  ComplexVector plus(2), minus(2);
  plus << Complex(1, 0), Complex(std::cos(theta), std::sin(theta));
  minus << Complex(1, 0), Complex(std::cos(theta), -std::sin(theta));
  mstm.diagonals = {plus, minus};
  return mstm;
}

}  // namespace

TEST_SUITE("tm_estimation") {

TEST_CASE("spectral mean of a monochromatic stack is the single matrix") {
  const Mstm mstm = build_mstm(testing::small_fiber(2.0).monochromatic());
  const ApproxTm approx = spectral_mean_tm(mstm);
  CHECK(max_abs(approx.matrix - mstm.matrix(0)) == 0.0);
  for (Eigen::Index i = 0; i < approx.svd.singular_values.size(); ++i)
    CHECK(approx.svd.singular_values(i) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("opposite phases average to cos(theta)") {
  const ApproxTm approx = spectral_mean_tm(two_phase_mstm(0.8));
  CHECK(approx.matrix(1, 1).real() == doctest::Approx(std::cos(0.8)).epsilon(1e-14));
  CHECK(approx.matrix(1, 1).imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(approx.matrix(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dispersed fiber keeps leading singular values near one, tail decaying") {
  const ApproxTm approx = spectral_mean_tm(build_mstm(testing::small_fiber(5.0)));
  const RealVector& s = approx.svd.singular_values;
  CHECK(s(0) > 0.99);
  CHECK(s(s.size() - 1) < 0.9 * s(0));
  for (Eigen::Index i = 0; i < s.size(); ++i) CHECK(s(i) <= 1.0 + 1e-12);
}

TEST_CASE("probe intensities on a monochromatic stack pick out |T_jk|^2") {
  const Mstm mstm = build_mstm(testing::small_fiber(2.0, 5e-6).monochromatic());
  const Eigen::Index dim = mstm.dim();
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      ComplexVector in = ComplexVector::Zero(dim), out = ComplexVector::Zero(dim);
      in(k) = 1.0;
      out(j) = 1.0;
      const double expected = (j == k) ? 1.0 : 0.0;
      CHECK(probe_intensity(mstm, in, out) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("probe dataset is reproducible and bounded by one") {
  const Mstm mstm = build_mstm(testing::small_fiber(2.0, 5e-6));
  Rng a(5), b(5);
  const ProbeDataset first = simulate_probe_dataset(mstm, 32, a);
  const ProbeDataset second = simulate_probe_dataset(mstm, 32, b);
  for (std::size_t i = 0; i < first.samples.size(); ++i) {
    CHECK(first.samples[i].intensity == second.samples[i].intensity);
    CHECK(first.samples[i].intensity <= 1.0 + 1e-12);
    CHECK(first.samples[i].intensity >= 0.0);
  }
}

TEST_CASE("intensity fit recovers a unitary from 4 d^2 probes") {
  const Eigen::Index d = 4;
  Rng rng(2024);
  const ComplexMatrix truth = random_unitary(d, rng);

  ProbeDataset dataset;
  for (int p = 0; p < 4 * d * d; ++p) {
    dataset.probes_in.push_back(random_state(d, rng));
    dataset.probes_out.push_back(random_state(d, rng));
    const Complex z = dataset.probes_out.back().dot(truth * dataset.probes_in.back());
    dataset.samples.push_back({p, p, std::norm(z)});
  }

  const ApproxTm fit = intensity_fit_tm(dataset, d, 3000, rng);
  CHECK(fit.fit_residual <= 1e-6);
  CHECK(fit.method == TmEstimator::intensity_fit);
  for (const auto& s : dataset.samples) {
    const Complex z = dataset.probes_out[s.out_id].dot(fit.matrix * dataset.probes_in[s.in_id]);
    CHECK(std::abs(std::norm(z) - s.intensity) <= 1e-4);
  }
}

TEST_CASE("fit of a monochromatic stack agrees with the spectral mean") {
  const Mstm mstm = build_mstm(testing::small_fiber(2.0, 4e-6).monochromatic());
  const Eigen::Index d = mstm.dim();
  Rng rng(77);
  const ProbeDataset dataset = simulate_probe_dataset(mstm, static_cast<int>(4 * d * d), rng);
  const ApproxTm fit = intensity_fit_tm(dataset, d, 3000, rng);
  const ApproxTm mean = spectral_mean_tm(mstm);
  CHECK(fit.fit_residual <= 1e-6);

  // Global phase is the only gauge freedom left by intensity data here.
  Eigen::Index row = 0, col = 0;
  mean.matrix.cwiseAbs().maxCoeff(&row, &col);
  const Complex gauge = mean.matrix(row, col) / fit.matrix(row, col);
  CHECK(std::abs(std::abs(gauge) - 1.0) < 1e-4);
  CHECK(max_abs(fit.matrix * gauge - mean.matrix) < 1e-4);

  // All singular values are degenerate at one, so the only invariant subspace
  // statement is about the full space.
  const ComplexMatrix p_fit = fit.svd.v * fit.svd.v.adjoint();
  const ComplexMatrix p_mean = mean.svd.v * mean.svd.v.adjoint();
  CHECK(max_abs(p_fit - p_mean) <= 1e-6);
}

TEST_CASE("certified dimension is estimator independent within one") {
  // Mild dispersion: the single-matrix model is a faithful description, so
  // the blind fit and the spectral mean must rank the same leading modes.
  const Mstm mstm = build_mstm(testing::small_fiber(2.0, 6.5e-6, 21));
  const Eigen::Index full = mstm.dim();
  Rng rng(99);
  const ProbeDataset dataset = simulate_probe_dataset(mstm, static_cast<int>(4 * full * full), rng);
  const ApproxTm fit = intensity_fit_tm(dataset, full, 1200, rng);
  const ApproxTm mean = spectral_mean_tm(mstm);
  for (int d : {4, 8, 13}) {
    const MubFamily mubs = fourier_pair(d);
    const auto certified = [&](const ApproxTm& approx) {
      const CorrelationTensor c = mub_correlations(mstm, leading_subspace(approx, d), mubs);
      return certify(c, WitnessKind::ft_bavaresco).certified_n;
    };
    CHECK(std::abs(static_cast<long long>(certified(fit)) -
                   static_cast<long long>(certified(mean))) <= 1);
  }
}

TEST_CASE("iters below one is rejected") {
  ProbeDataset dataset;
  dataset.probes_in.push_back(ComplexVector::Ones(2).normalized());
  dataset.probes_out.push_back(ComplexVector::Ones(2).normalized());
  dataset.samples.push_back({0, 0, 0.5});
  Rng rng(1);
  CHECK_THROWS_AS(intensity_fit_tm(dataset, 2, 0, rng), std::invalid_argument);
}

TEST_CASE("leading subspace extraction") {
  const ApproxTm approx = spectral_mean_tm(build_mstm(testing::small_fiber(5.0)));
  const Eigen::Index full = approx.svd.singular_values.size();

  SUBCASE("full d returns complete unitaries") {
    const SubspaceBases bases = leading_subspace(approx, full);
    CHECK(is_unitary(bases.input));
    CHECK(is_unitary(bases.output));
  }
  SUBCASE("d = 1 is the dominant pair") {
    const SubspaceBases bases = leading_subspace(approx, 1);
    CHECK(bases.input.cols() == 1);
    CHECK(max_abs(bases.input - approx.svd.v.col(0)) == 0.0);
  }
  SUBCASE("columns orthonormal for intermediate d") {
    const SubspaceBases bases = leading_subspace(approx, 7);
    CHECK(unitarity_defect(bases.input) <= tol::unitarity);
    CHECK(unitarity_defect(bases.output) <= tol::unitarity);
  }
  SUBCASE("columns are standard basis vectors for a diagonal stack") {
    const SubspaceBases bases = leading_subspace(approx, full);
    for (Eigen::Index j = 0; j < full; ++j)
      CHECK(bases.input.col(j).cwiseAbs().maxCoeff() >= 1.0 - 1e-9);
  }
  SUBCASE("d beyond the mode count is rejected") {
    CHECK_THROWS_AS(leading_subspace(approx, full + 1), std::invalid_argument);
  }
}

TEST_CASE("probe CSV round trip") {
  ProbeDataset dataset;
  dataset.probes_in.resize(3);
  dataset.probes_out.resize(2);
  dataset.samples = {{0, 0, 0.125}, {1, 1, 0.6789012345678901}, {2, 0, 1e-12}};
  const auto path = std::filesystem::temp_directory_path() / "chancert_probes_test.csv";
  save_probe_csv(dataset, path);
  const ProbeDataset loaded = load_probe_csv(path);
  std::filesystem::remove(path);
  REQUIRE(loaded.samples.size() == dataset.samples.size());
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    CHECK(loaded.samples[i].in_id == dataset.samples[i].in_id);
    CHECK(loaded.samples[i].out_id == dataset.samples[i].out_id);
    CHECK(loaded.samples[i].intensity == dataset.samples[i].intensity);
  }
}

}  // TEST_SUITE
