#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdm/dos.hpp"
#include "rdm/spectrum.hpp"

namespace rdm {

/// S(E) = ln Omega(E), Plateau-normalized so S(E_max) = 0; -inf at or below E_0.
double entropy(const DosFunction& dos, double energy);

/// T = Omega / omega. 0 at or below E_0; +inf where omega vanishes (including
/// at and above E_max).
double temperature(const DosFunction& dos, double energy);

struct TemperatureRoot {
  double energy;
  /// T(E) crosses the target more than once inside the bracket; the smallest
  /// root is returned.
  bool multiple_roots;
};

/// Smallest E in the bracket (default [E_0, E_max]) with T(E) = target.
TemperatureRoot energy_at_temperature(const DosFunction& dos, double target,
                                      std::optional<std::pair<double, double>> bracket = std::nullopt);

/// H + lambda * O for an O diagonal in the energy basis, as lambda -> Spectrum.
class PerturbedSpectrumFamily {
 public:
  enum class Kind { EnergySquared, Scale, FieldShift, LevelProjector, LevelShift };

  /// O = (H - center)^2.
  static PerturbedSpectrumFamily energy_squared(const Spectrum& base, const Rational& center = 0);
  /// O = H.
  static PerturbedSpectrumFamily scale(const Spectrum& base);
  /// O = dH/dB (spin models): B -> B + lambda.
  static PerturbedSpectrumFamily field_shift(const ModelSpec& model, const SpectrumLimits& limits = {});
  /// O = projector onto one unit of level k; that unit splits off.
  static PerturbedSpectrumFamily level_projector(const Spectrum& base, std::size_t k);
  /// O = projector onto the whole level k.
  static PerturbedSpectrumFamily level_shift(const Spectrum& base, std::size_t k);

  Kind kind() const noexcept { return kind_; }
  const Spectrum& base() const noexcept { return base_; }
  Spectrum at(const Rational& lambda) const;

  /// Per distinct base level, the mean of O's diagonal over that level.
  const std::vector<double>& level_diagonal_mean() const noexcept { return diag_mean_; }
  /// Largest shift of any level per unit lambda.
  double max_level_velocity() const noexcept;
  /// Dyadic lambda moving levels by about `fraction` of the span and never
  /// more than a tenth of the smallest gap.
  Rational natural_step(double fraction = 1e-3) const;

 private:
  PerturbedSpectrumFamily(Kind kind, Spectrum base) : kind_(kind), base_(std::move(base)) {}

  Kind kind_;
  Spectrum base_;
  Rational center_ = 0;
  std::size_t level_ = 0;
  std::optional<ModelSpec> model_;
  SpectrumLimits limits_;
  std::vector<double> diag_mean_;
  std::vector<double> level_velocity_;
};

struct ExpectationOptions {
  /// Base step; defaults to natural_step().
  std::optional<Rational> step;
  double step_fraction = 1e-3;
  double convergence_tolerance = 1e-4;
  int max_halvings = 40;
  /// Largest edge displacement as a fraction of the distance from E to that edge.
  double edge_margin = 1.0 / 128.0;
};

struct Expectation {
  double value = 0.0;
  /// dS/dlambda after Richardson extrapolation.
  double derivative = 0.0;
  double temperature = 0.0;
  /// T |D(h) - D(h/2)|.
  double difference_estimate = 0.0;
  double step = 0.0;
  bool converged = true;
  /// Value taken from the shell limit at E_0 or E_max.
  bool endpoint = false;
  /// Differenced ln(plateau - Omega) instead of ln Omega (upper half of the spectrum).
  bool complement = false;
};

/// <O>_E = -T(E) dS_lambda(E)/dlambda at 0, by central differences on raw ln Omega.
Expectation observable_expectation(const DosBuilder& builder, const PerturbedSpectrumFamily& family, double energy,
                                   const ExpectationOptions& options = {});

struct Fluctuation {
  double variance;
  double delta_e;
  bool converged;
};

/// dE^2 = <(H - E)^2>_E.
Fluctuation energy_variance(const DosBuilder& builder, const Spectrum& spectrum, double energy,
                            const ExpectationOptions& options = {});

struct LevelPopulation {
  double level;
  std::int64_t multiplicity;
  /// Per degeneracy unit.
  double population;
};

struct Populations {
  std::vector<LevelPopulation> levels;
  /// sum_k n_k p_k - 1 before renormalization.
  double raw_deviation = 0.0;
  bool converged = true;
};

Populations average_state_populations(const DosBuilder& builder, const Spectrum& spectrum, double energy,
                                      const ExpectationOptions& options = {});

struct Magnetization {
  double value;
  bool converged;
};

/// M(E) = tr(S_z rho(E)) = T dS/dB.
Magnetization magnetization(const DosBuilder& builder, const ModelSpec& model, double energy,
                            const ExpectationOptions& options = {}, const SpectrumLimits& limits = {});

/// Tabulated records, one row per grid point.
struct ThermoCurve {
  Ensemble ensemble = Ensemble::HS;
  std::string spectrum_hash;
  std::string grid;
  std::vector<std::string> columns;
  std::vector<std::string> units;
  std::vector<std::vector<double>> rows;
  /// Free-form flags per row (e.g. "nonconverged"), empty when clean.
  std::vector<std::string> notes;
};

}  // namespace rdm
