#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "chancert/numerics.hpp"

// Idealized graded-index multi-mode fiber model: no bends, no mode coupling,
// only modal dispersion. Each wavelength sees a diagonal unitary transmission
// matrix in the eigenmode basis; the stack over a wavelength grid with
// Gaussian source weights is the multi-spectral transmission matrix (MSTM).
namespace chancert {

struct FiberSpec {
  double length_m = 2.0;
  double core_radius_m = 25e-6;
  double n_core = 1.444;
  double numerical_aperture = 0.22;
  double alpha = 2.0;  // power-law index exponent; 2 = parabolic core
  double center_wavelength_m = 810e-9;
  double bandwidth_m = 3e-9;  // full span of the wavelength grid
  int num_wavelengths = 201;  // odd, so the center wavelength is on-grid
  double sigma_m = 0.75e-9;   // std of the Gaussian spectral intensity profile

  double n_cladding() const;  // sqrt(n_core^2 - NA^2)
  void validate() const;      // throws std::invalid_argument
  std::uint64_t cache_key() const;

  static FiberSpec paper_2m();
  static FiberSpec paper_5m();

  // Zero-bandwidth variant: a single transmission matrix at the center
  // wavelength (a unitary, hence noiseless, channel).
  FiberSpec monochromatic() const;
};

struct ModeIndex {
  int m = 0;
  int n = 0;
  int group() const { return m + n + 1; }
};

// N diagonal unitaries on an ascending wavelength grid plus normalized
// spectral weights. Diagonal entries are stored directly; diagonals[i][j] is
// the transmission of mode j at wavelengths[i]. Immutable after construction.
struct Mstm {
  FiberSpec spec;
  std::vector<double> wavelengths;
  std::vector<double> weights;
  std::vector<ComplexVector> diagonals;
  std::vector<ModeIndex> modes;

  Eigen::Index dim() const { return modes.empty() ? 0 : static_cast<Eigen::Index>(modes.size()); }
  Eigen::Index num_wavelengths() const { return static_cast<Eigen::Index>(wavelengths.size()); }
  ComplexMatrix matrix(std::size_t i) const;  // dense D x D diagonal T(lambda_i)
};

// Bound modes at the center wavelength, ordered by ascending mode group and
// ascending m inside a group. Group g contributes g modes, so a fiber guiding
// G full groups carries G(G+1)/2 modes.
std::vector<ModeIndex> enumerate_modes(const FiberSpec& spec);

// Propagation constant of a parabolic-profile (general power-law) eigenmode:
//   beta = (1/r) * sqrt((n1 k r)^2 - B(g)),  g = m + n + 1, k = 2 pi / lambda,
//   B(g) = [ Gamma(1/a + 1/2) (a+2) g sqrt(pi) V^(2/a) / (2 Gamma(1/a)) ]^(2a/(a+2)),
//   V = k r n1 sqrt(2 Delta),  Delta = (n1^2 - n2^2) / (2 n1^2).
// For a = 2 this reduces to B(g) = 2 g V, the exact spectrum of a parabolic
// medium. Throws UnguidedModeError when (n1 k r)^2 < B(g) (beta imaginary).
double propagation_constant(ModeIndex mode, double lambda_m, const FiberSpec& spec);

// True when the mode is bound at the given wavelength: beta >= n2 k, i.e.
// B(g) <= V^2. This is stricter than beta being real and is the condition
// used for mode enumeration.
bool is_guided(ModeIndex mode, double lambda_m, const FiberSpec& spec);

// Builds the full MSTM: diagonal entries exp(-i beta L) on the inclusive grid
// center +- bandwidth/2, weights ~ exp(-(lambda-lambda0)^2 / (2 sigma^2))
// renormalized to sum one. Throws UnguidedModeError if a mode enumerated at
// the center wavelength stops being guided inside the band.
Mstm build_mstm(const FiberSpec& spec);

// Binary cache. Layout (all little-endian): 8-byte magic "MSTMBIN1",
// uint32 {D, N}, the 8 double + 1 int32 spec fields, D x (int32 m, int32 n),
// N doubles wavelengths, N doubles weights, then N*D complex entries stored
// as (float64 re, float64 im) pairs in wavelength-major order.
void save_mstm(const Mstm& mstm, const std::filesystem::path& path);
Mstm load_mstm(const std::filesystem::path& path);

}  // namespace chancert
