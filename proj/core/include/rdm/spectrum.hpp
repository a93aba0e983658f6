#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rdm/rational.hpp"

namespace rdm {

/// Distinct energy levels of a Hamiltonian with their degeneracies.
///
/// Levels are strictly increasing; degeneracy lives in the multiplicities.
/// Every level is carried both as a double and as an exact rational. When a
/// spectrum is built from doubles the rational is the exact dyadic value of
/// the double, so the exact engines never see rounding they did not cause.
class Spectrum {
 public:
  static Spectrum from_exact(std::vector<Rational> levels, std::vector<std::int64_t> multiplicities);
  static Spectrum from_levels(std::vector<double> levels, std::vector<std::int64_t> multiplicities);
  /// All multiplicities 1.
  static Spectrum from_levels(std::vector<double> levels);

  std::size_t distinct() const noexcept { return levels_.size(); }
  std::int64_t dim() const noexcept { return dim_; }

  std::span<const double> levels() const noexcept { return levels_; }
  std::span<const std::int64_t> multiplicities() const noexcept { return multiplicities_; }
  std::span<const Rational> exact_levels() const noexcept { return exact_; }

  double level(std::size_t k) const { return levels_.at(k); }
  std::int64_t multiplicity(std::size_t k) const { return multiplicities_.at(k); }

  double ground() const noexcept { return levels_.front(); }
  double top() const noexcept { return levels_.back(); }
  double span() const noexcept { return levels_.back() - levels_.front(); }

  bool degenerate() const noexcept;

  /// Degeneracy-expanded list of length dim(), ascending.
  std::vector<double> flattened() const;

  /// Stable 64-bit FNV-1a digest of the exact levels and multiplicities, hex.
  std::string hash() const;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  Spectrum() = default;
  void validate();

  std::vector<double> levels_;
  std::vector<std::int64_t> multiplicities_;
  std::vector<Rational> exact_;
  std::int64_t dim_ = 0;
};

struct LinearModel {
  int d = 2;
  Rational hbar_omega = 1;
};

struct SpinChainModel {
  int n = 1;
  Rational b = 1;
};

struct CurieWeissModel {
  int n = 1;
  Rational b = 1;
  Rational j = 0;
};

struct CustomModel {
  std::vector<Rational> levels;
  std::vector<std::int64_t> multiplicities;
};

using ModelSpec = std::variant<LinearModel, SpinChainModel, CurieWeissModel, CustomModel>;

struct SpectrumLimits {
  /// Largest spin count whose binomials and 2^N still fit in 64 bits.
  int max_spins = 62;
  /// Relative (to the largest gap) tolerance under which Curie-Weiss energies merge.
  double merge_tolerance = 1e-12;
};

Spectrum linear_spectrum(int d, double hbar_omega);
Spectrum linear_spectrum(int d, const Rational& hbar_omega);

Spectrum noninteracting_spins(int n, double b, const SpectrumLimits& limits = {});
Spectrum noninteracting_spins(int n, const Rational& b, const SpectrumLimits& limits = {});

Spectrum curie_weiss(int n, double b, double j, const SpectrumLimits& limits = {});
Spectrum curie_weiss(int n, const Rational& b, const Rational& j, const SpectrumLimits& limits = {});

Spectrum build_spectrum(const ModelSpec& model, const SpectrumLimits& limits = {});

/// Per distinct level of build_spectrum(model), the multiplicity-weighted mean
/// of dE/dB (that is, the diagonal of -S_z averaged over the level). Only
/// defined for the spin models.
std::vector<double> field_derivative(const ModelSpec& model, const SpectrumLimits& limits = {});

/// Returns the model with its field B replaced by b + delta (spin models only).
ModelSpec with_field_offset(const ModelSpec& model, const Rational& delta);

Spectrum shift_to_ground(const Spectrum& spectrum);

/// {"levels": [...], "multiplicities": [...]}; levels may be numbers or
/// exact strings ("p/q" or decimals). Missing multiplicities default to 1.
Spectrum parse_spectrum_json(const std::string& text);
Spectrum load_spectrum_json(const std::string& path);
std::string spectrum_to_json(const Spectrum& spectrum);

std::string describe(const ModelSpec& model);

}  // namespace rdm
