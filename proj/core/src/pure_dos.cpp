#include "rdm/pure_dos.hpp"

#include <cmath>

#include "rdm/error.hpp"

namespace rdm {

namespace {

void require_simple(const Spectrum& spectrum) {
  if (spectrum.degenerate())
    fail(ErrorCode::Unsupported, "closed-form pure density needs a non-degenerate spectrum; use pure_table");
}

// 1 / prod_{j != k} (E_k - E_j)
double inverse_gap_product(const Spectrum& s, std::size_t k) {
  long double p = 1.0L;
  for (std::size_t j = 0; j < s.distinct(); ++j)
    if (j != k) p *= static_cast<long double>(s.level(k)) - s.level(j);
  return static_cast<double>(1.0L / p);
}

}  // namespace

double pure_omega_density(const Spectrum& spectrum, double energy) {
  require_simple(spectrum);
  if (std::isnan(energy)) fail(ErrorCode::InvalidArgument, "energy is NaN");
  if (!(energy > spectrum.ground() && energy < spectrum.top())) return 0.0;
  const auto d = static_cast<int>(spectrum.dim());
  long double sum = 0.0L;
  for (std::size_t k = 0; k < spectrum.distinct(); ++k) {
    const double x = spectrum.level(k) - energy;
    if (x > 0.0) sum += std::pow(static_cast<long double>(x), d - 2) * inverse_gap_product(spectrum, k);
  }
  return static_cast<double>((d - 1) * sum);
}

double pure_omega_integrated(const Spectrum& spectrum, double energy) {
  require_simple(spectrum);
  if (std::isnan(energy)) fail(ErrorCode::InvalidArgument, "energy is NaN");
  if (energy <= spectrum.ground()) return 0.0;
  if (energy >= spectrum.top()) return 1.0;
  const auto d = static_cast<int>(spectrum.dim());
  long double sum = 0.0L;
  for (std::size_t k = 0; k < spectrum.distinct(); ++k) {
    const long double full = std::pow(static_cast<long double>(spectrum.level(k) - spectrum.ground()), d - 1);
    const double x = spectrum.level(k) - energy;
    const long double cut = x > 0.0 ? std::pow(static_cast<long double>(x), d - 1) : 0.0L;
    sum += (full - cut) * inverse_gap_product(spectrum, k);
  }
  return static_cast<double>(sum);
}

HsCoefficientTable pure_table(const Spectrum& spectrum, Arithmetic arithmetic) {
  return residue_table(spectrum, 1, arithmetic);
}

}  // namespace rdm
