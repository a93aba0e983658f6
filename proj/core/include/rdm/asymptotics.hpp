#pragma once

#include "rdm/rational.hpp"
#include "rdm/spectrum.hpp"

namespace rdm {

/// Low-energy expansion of the Bures-Hall volume for a non-degenerate ground
/// level, Omega ~ a0 dE^q (1 + r1 dE + ...), q = (d^2 - 1)/2.
struct LowEnergyCoefficients {
  double exponent;
  double log_a0;
  /// a1/a0 in the closed form quoted alongside a0, (sum_k dE_k^{-1/2})^2 / (2(d^2-1)).
  double a1_over_a0;
  /// r1 from expanding the inversion integrand to first order:
  /// -3 (sum_k dE_k^{-1/2})^2 / (2(d^2+1)).
  double next_order_ratio;
  /// ln of the factor taking a0 dE^q to the raw volume of bh_log_omega_integrated.
  double log_raw_factor;
};

LowEnergyCoefficients low_energy_a0_a1(const Spectrum& spectrum);

/// Volume entropy of N free spins at dE = E - E_0 above the ground state, to
/// first order in dE, up to an additive constant.
double spin_entropy_low_energy(int n, double b, double delta_e);

struct LowTemperatureEnergy {
  double value;
  /// False once the linear term exceeds B/10 in magnitude.
  bool valid;
};

/// Mean energy per spin, -B/2 + (2^{2N} - 1) T / (2N).
LowTemperatureEnergy spin_energy_per_spin_lowT(int n, double b, double t);

/// Squared relative energy fluctuations of N free spins at energy per spin eps.
struct RelativeFluctuations {
  double exact_n;
  double large_n;
  double limit;
  /// O(1/N) term of the large-N expansion, B (eps + B/2) / (8 N eps^2).
  double first_order_correction;
  /// eps inside (-B/2, 0), where the expansion was derived.
  bool in_regime;
};

RelativeFluctuations spin_relative_fluctuations(int n, double b, double eps);

struct BinomialSqrtSums {
  BigFloat sum_sqrt;      // sum_k C(N,k) sqrt(k)
  BigFloat sum_inv_sqrt;  // sum_{k>=1} C(N,k) / sqrt(k)
  double mean_sqrt;       // E[sqrt K], K ~ Binom(N, 1/2)
  double mean_inv_sqrt;   // sum_inv_sqrt / 2^N
  double asymptotic_mean_sqrt;      // sqrt(N/2) (1 - 1/(8N))
  double asymptotic_mean_inv_sqrt;  // sqrt(2/N) (1 + 3/(8N))
};

BinomialSqrtSums binomial_sqrt_sums(int n);

}  // namespace rdm
