#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rdm/dos.hpp"
#include "rdm/spectrum.hpp"

namespace rdm {

using Rng = std::mt19937_64;
using ComplexMatrix = Eigen::MatrixXcd;

struct McConfig {
  Ensemble ensemble = Ensemble::HS;
  /// Draws (estimate_dos_mc) or the cap on draws (shell estimators).
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  double shell_center = 0.0;
  /// Half-width of the energy window; <= 0 means 0.5% of the span.
  double shell_half_width = 0.0;
  /// Shell estimators stop once this many samples were accepted (0: use all draws).
  std::int64_t target_accepted = 0;
  int bins = 100;
  /// 0: hardware concurrency. Results do not depend on it.
  int threads = 0;
};

/// Samples [chunk * kChunkSize, (chunk + 1) * kChunkSize) come from one
/// generator seeded by (seed, chunk).
inline constexpr std::int64_t kChunkSize = 1 << 13;
Rng chunk_rng(std::uint64_t seed, std::uint64_t chunk);

struct DensityMatrixSample {
  ComplexMatrix rho;
  double energy;
};

/// Haar unitary: QR of a complex Ginibre matrix with the phases of diag(R)
/// moved into Q.
ComplexMatrix haar_unitary(int d, Rng& rng);
ComplexMatrix ginibre(int rows, int cols, Rng& rng);

ComplexMatrix sample_hs(int d, Rng& rng);
ComplexMatrix sample_bh(int d, Rng& rng);
ComplexMatrix sample_pure(int d, Rng& rng);
ComplexMatrix sample_state(Ensemble ensemble, int d, Rng& rng);

/// tr(H rho) with H = diag(flat).
double energy_of(const ComplexMatrix& rho, const std::vector<double>& flat);
DensityMatrixSample make_sample(ComplexMatrix rho, const std::vector<double>& flat);

/// tr(H rho) of one draw without forming rho (row norms of the factor).
double sample_energy(Ensemble ensemble, const std::vector<double>& flat, Rng& rng);

/// config.samples energies in canonical order.
std::vector<double> sample_energies(const McConfig& config, const Spectrum& spectrum);

struct Histogram {
  double lower = 0.0, upper = 0.0;
  std::vector<std::int64_t> counts;
  /// Density normalized over the whole sample set.
  std::vector<double> density;
  /// Half-width of the one-sigma Wilson interval, in density units.
  std::vector<double> density_error;
  std::int64_t total = 0;
  std::int64_t in_range = 0;
  bool empty = false;

  double bin_width() const { return (upper - lower) / static_cast<double>(counts.size()); }
  double bin_center(std::size_t i) const { return lower + (static_cast<double>(i) + 0.5) * bin_width(); }
};

Histogram estimate_dos_mc(const McConfig& config, const Spectrum& spectrum);
Histogram histogram_of(const std::vector<double>& energies, double lower, double upper, int bins);

struct ConditionalAverage {
  ComplexMatrix mean;
  /// Standard errors of the real and imaginary parts, entrywise.
  Eigen::MatrixXd stderr_real, stderr_imag;
  double mean_energy = 0.0, mean_energy_stderr = 0.0;
  /// tr(H^2 rho)
  double mean_h2 = 0.0, mean_h2_stderr = 0.0;
  std::int64_t accepted = 0;
  std::int64_t drawn = 0;
  double acceptance = 0.0;
  double half_width = 0.0;
  /// The window had to be widened to reach an acceptance of 1e-4.
  bool widened = false;
};

ConditionalAverage conditional_average_state(const McConfig& config, const Spectrum& spectrum);

struct StationarityResult {
  double commutator_norm;  // ||mean [rho, H]||_F
  double standard_error;   // sqrt(sum Var(C_ij) / n)
  double statistic;        // ratio of the two
  std::int64_t accepted;
  bool passed;             // statistic < 3
};

StationarityResult stationarity_check(const McConfig& config, const Spectrum& spectrum);

}  // namespace rdm
