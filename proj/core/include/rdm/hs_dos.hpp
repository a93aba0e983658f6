#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rdm/rational.hpp"
#include "rdm/spectrum.hpp"

namespace rdm {

enum class Arithmetic { Exact, Float };
enum class Normalization { Plateau, Raw };

/// Residue coefficients of the piecewise-polynomial integrated density of
/// states
///
///   Omega(E) = sum_{E_k <= E} sum_m g[k][m] (E - E_k)^(m + W - w_k) / (m + W - w_k)!
///
/// where level k carries integer weight w_k and W = sum_k w_k. The
/// Hilbert-Schmidt ensemble uses w_k = n_k * d (so W = d^2); Haar pure states
/// use w_k = n_k. In both cases Omega is the CDF of sum_k E_k p_k with p
/// Dirichlet-distributed, scaled by 1/(W-1)!, so the raw plateau above the top
/// level is 1/(W-1)! for every spectrum.
class HsCoefficientTable {
 public:
  Arithmetic arithmetic() const noexcept { return arithmetic_; }
  std::size_t levels() const noexcept { return energies_.size(); }
  std::int64_t weight_per_unit() const noexcept { return weight_per_unit_; }
  std::int64_t weight(std::size_t k) const { return weights_.at(k); }
  std::int64_t total_weight() const noexcept { return total_weight_; }
  /// Lowest power of (E - E_k) contributed by level k: W - w_k.
  std::int64_t exponent_base(std::size_t k) const { return total_weight_ - weights_.at(k); }
  /// Number of stored g coefficients, sum_k w_k.
  std::size_t entry_count() const noexcept;
  /// Degree of the polynomial pieces, W - 1.
  std::int64_t degree() const noexcept { return total_weight_ - 1; }

  const Rational& exact_level(std::size_t k) const { return energies_.at(k); }
  double level(std::size_t k) const { return energies_double_.at(k); }
  double ground() const { return energies_double_.front(); }
  double top() const { return energies_double_.back(); }

  /// g[k][m]; exact tables only.
  const std::vector<Rational>& coefficients(std::size_t k) const;
  /// g[k][m] in long double; float tables only.
  const std::vector<long double>& float_coefficients(std::size_t k) const;

  /// Raw value of Omega above the top level, 1/(W-1)!.
  const Rational& plateau() const noexcept { return plateau_; }
  double log_plateau() const noexcept { return log_plateau_; }

  const std::string& spectrum_hash() const noexcept { return hash_; }

 private:
  friend HsCoefficientTable residue_table(const Spectrum&, std::int64_t, Arithmetic);
  friend HsCoefficientTable table_from_json(const std::string&);
  friend struct HsTableAccess;
  void finalize();

  Arithmetic arithmetic_ = Arithmetic::Exact;
  std::int64_t weight_per_unit_ = 0;
  std::vector<Rational> energies_;
  std::vector<double> energies_double_;
  std::vector<std::int64_t> weights_;
  std::int64_t total_weight_ = 0;
  std::vector<std::vector<Rational>> g_;
  std::vector<std::vector<long double>> g_float_;
  // g / (m + base)! and g / (m + base - 1)!, ready for Horner evaluation.
  std::vector<std::vector<Rational>> horner_int_, horner_den_;
  std::vector<std::vector<long double>> horner_int_f_, horner_den_f_;
  Rational plateau_;
  double log_plateau_ = 0.0;
  std::string hash_;
};

/// Generic residue table with w_k = n_k * weight_per_unit.
HsCoefficientTable residue_table(const Spectrum& spectrum, std::int64_t weight_per_unit,
                                 Arithmetic arithmetic = Arithmetic::Exact);

/// Hilbert-Schmidt table (weight_per_unit = d).
HsCoefficientTable hs_coefficients(const Spectrum& spectrum, Arithmetic arithmetic = Arithmetic::Exact);

double hs_omega_integrated(const HsCoefficientTable& table, double energy,
                           Normalization norm = Normalization::Plateau);
double hs_omega_density(const HsCoefficientTable& table, double energy, Normalization norm = Normalization::Plateau);

Rational hs_omega_integrated_exact(const HsCoefficientTable& table, const Rational& energy,
                                   Normalization norm = Normalization::Plateau);
Rational hs_omega_density_exact(const HsCoefficientTable& table, const Rational& energy,
                                Normalization norm = Normalization::Plateau);

/// ln of the raw values; -inf where the value is zero. These never round
/// through double before the log, so they stay finite when 1/(W-1)! does not.
double hs_log_omega_integrated(const HsCoefficientTable& table, double energy);
double hs_log_omega_density(const HsCoefficientTable& table, double energy);
/// ln(plateau - Omega(E)), raw; -inf at and above the top level.
double hs_log_omega_complement(const HsCoefficientTable& table, double energy);

std::string table_to_json(const HsCoefficientTable& table);
HsCoefficientTable table_from_json(const std::string& text);

/// On-disk cache of exact tables, one JSON file per spectrum hash.
class HsTableCache {
 public:
  explicit HsTableCache(std::filesystem::path directory);
  HsCoefficientTable get(const Spectrum& spectrum);
  std::filesystem::path path_for(const Spectrum& spectrum) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace rdm
