#pragma once

#include <cstddef>
#include <vector>

#include "rdm/hs_dos.hpp"
#include "rdm/spectrum.hpp"

namespace rdm {

/// Cut: real branch-cut reduction, segment by segment. Contour: the Stieltjes
/// inversion contour |s| = E - E_0 evaluated numerically. Auto picks Cut unless
/// the smallest gap of the flattened spectrum is below auto_gap_ratio * span.
enum class BhMethod { Auto, Cut, Contour };

struct BhOptions {
  double tolerance = 1e-9;
  int max_depth = 15;
  BhMethod method = BhMethod::Auto;
  double auto_gap_ratio = 1e-2;
};

struct MagnitudePhase {
  double magnitude;  // R_k(s)
  double phase;      // theta_k(s) reduced to [0, 2pi)
};

/// Shifted spectrum (ground at 0) in both flattened and distinct form.
class BhIntegrandContext {
 public:
  explicit BhIntegrandContext(const Spectrum& spectrum, BhOptions options = {});
  const Spectrum& spectrum() const noexcept { return spectrum_; }

  std::size_t dim() const noexcept { return flat_.size(); }
  double ground() const noexcept { return ground_; }
  double span() const noexcept { return flat_.back(); }
  const std::vector<double>& flattened_shifted() const noexcept { return flat_; }
  const std::vector<double>& distinct_shifted() const noexcept { return distinct_; }
  const std::vector<std::int64_t>& multiplicities() const noexcept { return mult_; }
  const BhOptions& options() const noexcept { return options_; }
  /// Method actually used after resolving Auto.
  BhMethod method() const noexcept { return method_; }
  /// Power of (E - s) in the integrand, d^2/2 - 1.
  double power() const noexcept { return power_; }
  /// ln of the raw value above the top level, ln(pi) - d(d-1) ln 2.
  double log_plateau() const noexcept { return log_plateau_; }

 private:
  Spectrum spectrum_;
  std::vector<double> flat_, distinct_;
  std::vector<std::int64_t> mult_;
  double ground_;
  double power_;
  double log_plateau_;
  BhOptions options_;
  BhMethod method_;
};

/// Context for the reflected spectrum -H; its Omega at -E is the complement
/// plateau - Omega(E) of the original.
BhIntegrandContext reflected(const BhIntegrandContext& ctx);

/// R_k and theta_k at shifted position s strictly inside flattened segment k.
MagnitudePhase bh_magnitude_phase(const BhIntegrandContext& ctx, std::size_t k, double s);

/// Omega is 0 below E_0 and constant above E_max.
double bh_omega_integrated(const BhIntegrandContext& ctx, double energy, Normalization norm = Normalization::Plateau);
double bh_omega_density(const BhIntegrandContext& ctx, double energy, Normalization norm = Normalization::Plateau);

/// Raw logarithms, evaluated with the magnitudes factored out so they stay
/// finite where the raw values under- or overflow.
double bh_log_omega_integrated(const BhIntegrandContext& ctx, double energy);
double bh_log_omega_density(const BhIntegrandContext& ctx, double energy);

/// ((2E - eps)/eps^2) sqrt(eps E - E^2) + arcsin(sqrt(E/eps)), raw.
double bh_qubit_closed_form(double eps, double energy);

}  // namespace rdm
