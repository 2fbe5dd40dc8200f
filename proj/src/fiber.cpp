#include "chancert/fiber.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "chancert/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "MSTM cache layout assumes a little-endian host");

namespace chancert {

namespace {

constexpr char kMagic[8] = {'M', 'S', 'T', 'M', 'B', 'I', 'N', '1'};

double wavenumber(double lambda_m) { return 2.0 * std::numbers::pi / lambda_m; }

// V = k r n1 sqrt(2 Delta) = k r NA.
double v_number(double lambda_m, const FiberSpec& spec) {
  return wavenumber(lambda_m) * spec.core_radius_m * spec.numerical_aperture;
}

// Group eigenvalue B(g); see the header for the closed form at alpha = 2.
double group_eigenvalue(int group, double lambda_m, const FiberSpec& spec) {
  const double a = spec.alpha;
  const double v = v_number(lambda_m, spec);
  const double bracket = std::tgamma(1.0 / a + 0.5) * (a + 2.0) * static_cast<double>(group) *
                         std::sqrt(std::numbers::pi) * std::pow(v, 2.0 / a) /
                         (2.0 * std::tgamma(1.0 / a));
  return std::pow(bracket, 2.0 * a / (a + 2.0));
}

}  // namespace

double FiberSpec::n_cladding() const {
  return std::sqrt(n_core * n_core - numerical_aperture * numerical_aperture);
}

void FiberSpec::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("FiberSpec: ") + what);
  };
  require(length_m > 0, "length must be positive");
  require(core_radius_m > 0, "core radius must be positive");
  require(n_core > 0, "core index must be positive");
  require(numerical_aperture > 0, "numerical aperture must be positive");
  require(numerical_aperture < n_core, "numerical aperture must be smaller than the core index");
  require(alpha > 0, "profile exponent must be positive");
  require(center_wavelength_m > 0, "center wavelength must be positive");
  require(sigma_m > 0, "spectral sigma must be positive");
  require(num_wavelengths >= 1, "wavelength count must be >= 1");
  require(num_wavelengths % 2 == 1, "wavelength count must be odd");
  require(num_wavelengths == 1 || bandwidth_m > 0, "bandwidth must be positive for N > 1");
  require(bandwidth_m >= 0, "bandwidth must be non-negative");
}

std::uint64_t FiberSpec::cache_key() const {
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a
  auto mix = [&hash](const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash ^= bytes[i];
      hash *= 0x100000001b3ULL;
    }
  };
  const double doubles[] = {length_m,  core_radius_m, n_core,      numerical_aperture,
                            alpha,     center_wavelength_m, bandwidth_m, sigma_m};
  mix(doubles, sizeof(doubles));
  mix(&num_wavelengths, sizeof(num_wavelengths));
  return hash;
}

FiberSpec FiberSpec::paper_2m() {
  FiberSpec spec;
  spec.length_m = 2.0;
  return spec;
}

FiberSpec FiberSpec::paper_5m() {
  FiberSpec spec;
  spec.length_m = 5.0;
  return spec;
}

FiberSpec FiberSpec::monochromatic() const {
  FiberSpec spec = *this;
  spec.num_wavelengths = 1;
  spec.bandwidth_m = 0.0;
  return spec;
}

ComplexMatrix Mstm::matrix(std::size_t i) const {
  ComplexMatrix t = ComplexMatrix::Zero(dim(), dim());
  t.diagonal() = diagonals.at(i);
  return t;
}

double propagation_constant(ModeIndex mode, double lambda_m, const FiberSpec& spec) {
  const double nkr = spec.n_core * wavenumber(lambda_m) * spec.core_radius_m;
  const double b = group_eigenvalue(mode.group(), lambda_m, spec);
  if (nkr * nkr < b) {
    throw UnguidedModeError("mode (" + std::to_string(mode.m) + "," + std::to_string(mode.n) +
                            ") is unguided at lambda = " + std::to_string(lambda_m * 1e9) + " nm");
  }
  return std::sqrt(nkr * nkr - b) / spec.core_radius_m;
}

bool is_guided(ModeIndex mode, double lambda_m, const FiberSpec& spec) {
  const double v = v_number(lambda_m, spec);
  return group_eigenvalue(mode.group(), lambda_m, spec) <= v * v;
}

std::vector<ModeIndex> enumerate_modes(const FiberSpec& spec) {
  spec.validate();
  std::vector<ModeIndex> modes;
  for (int group = 1;; ++group) {
    if (!is_guided(ModeIndex{0, group - 1}, spec.center_wavelength_m, spec)) break;
    for (int m = 0; m < group; ++m) modes.push_back(ModeIndex{m, group - 1 - m});
  }
  return modes;
}

Mstm build_mstm(const FiberSpec& spec) {
  spec.validate();
  Mstm mstm;
  mstm.spec = spec;
  mstm.modes = enumerate_modes(spec);

  const int n = spec.num_wavelengths;
  mstm.wavelengths.resize(n);
  mstm.weights.resize(n);
  if (n == 1) {
    mstm.wavelengths[0] = spec.center_wavelength_m;
    mstm.weights[0] = 1.0;
  } else {
    const double step = spec.bandwidth_m / static_cast<double>(n - 1);
    const double start = spec.center_wavelength_m - spec.bandwidth_m / 2.0;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      mstm.wavelengths[i] = start + step * static_cast<double>(i);
      const double detune = mstm.wavelengths[i] - spec.center_wavelength_m;
      mstm.weights[i] = std::exp(-detune * detune / (2.0 * spec.sigma_m * spec.sigma_m));
      total += mstm.weights[i];
    }
    for (double& w : mstm.weights) w /= total;
  }

  const Eigen::Index dim = mstm.dim();
  mstm.diagonals.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double lambda = mstm.wavelengths[i];
    ComplexVector diag(dim);
    // One propagation constant per group; modes inside a group share it.
    int cached_group = -1;
    Complex cached_phase;
    for (Eigen::Index j = 0; j < dim; ++j) {
      const ModeIndex mode = mstm.modes[static_cast<std::size_t>(j)];
      if (mode.group() != cached_group) {
        if (!is_guided(mode, lambda, spec)) {
          throw UnguidedModeError("mode group " + std::to_string(mode.group()) +
                                  " leaves the guided band at lambda = " +
                                  std::to_string(lambda * 1e9) + " nm");
        }
        const double beta = propagation_constant(mode, lambda, spec);
        const double phase = -beta * spec.length_m;
        // exp(-i beta L) with the argument reduced first for accuracy.
        const double reduced = std::remainder(phase, 2.0 * std::numbers::pi);
        cached_phase = {std::cos(reduced), std::sin(reduced)};
        cached_group = mode.group();
      }
      diag(j) = cached_phase;
    }
    mstm.diagonals.push_back(std::move(diag));
  }
  return mstm;
}

namespace {

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_raw(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
}

}  // namespace

void save_mstm(const Mstm& mstm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t dim = static_cast<std::uint32_t>(mstm.dim());
  const std::uint32_t num = static_cast<std::uint32_t>(mstm.num_wavelengths());
  write_raw(out, dim);
  write_raw(out, num);
  const FiberSpec& s = mstm.spec;
  for (double value : {s.length_m, s.core_radius_m, s.n_core, s.numerical_aperture, s.alpha,
                       s.center_wavelength_m, s.bandwidth_m, s.sigma_m})
    write_raw(out, value);
  write_raw(out, static_cast<std::int32_t>(s.num_wavelengths));
  for (const ModeIndex& mode : mstm.modes) {
    write_raw(out, static_cast<std::int32_t>(mode.m));
    write_raw(out, static_cast<std::int32_t>(mode.n));
  }
  for (double w : mstm.wavelengths) write_raw(out, w);
  for (double w : mstm.weights) write_raw(out, w);
  for (const ComplexVector& diag : mstm.diagonals)
    for (Eigen::Index j = 0; j < diag.size(); ++j) {
      write_raw(out, diag(j).real());
      write_raw(out, diag(j).imag());
    }
  if (!out) throw ConfigError("failed while writing '" + path.string() + "'");
}

Mstm load_mstm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "' for reading");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ConfigError("'" + path.string() + "' is not an MSTM cache file");

  std::uint32_t dim = 0, num = 0;
  read_raw(in, dim);
  read_raw(in, num);
  Mstm mstm;
  FiberSpec& s = mstm.spec;
  for (double* field : {&s.length_m, &s.core_radius_m, &s.n_core, &s.numerical_aperture, &s.alpha,
                        &s.center_wavelength_m, &s.bandwidth_m, &s.sigma_m})
    read_raw(in, *field);
  std::int32_t stored_n = 0;
  read_raw(in, stored_n);
  s.num_wavelengths = stored_n;

  mstm.modes.resize(dim);
  for (auto& mode : mstm.modes) {
    std::int32_t m = 0, n = 0;
    read_raw(in, m);
    read_raw(in, n);
    mode = ModeIndex{m, n};
  }
  mstm.wavelengths.resize(num);
  for (double& w : mstm.wavelengths) read_raw(in, w);
  mstm.weights.resize(num);
  for (double& w : mstm.weights) read_raw(in, w);
  mstm.diagonals.reserve(num);
  for (std::uint32_t i = 0; i < num; ++i) {
    ComplexVector diag(dim);
    for (std::uint32_t j = 0; j < dim; ++j) {
      double re = 0, im = 0;
      read_raw(in, re);
      read_raw(in, im);
      diag(j) = {re, im};
    }
    mstm.diagonals.push_back(std::move(diag));
  }
  if (!in) throw ConfigError("'" + path.string() + "' is truncated");
  return mstm;
}

}  // namespace chancert
