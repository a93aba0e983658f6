#include "rdm/hs_dos.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "rdm/error.hpp"

namespace rdm {

namespace {

constexpr std::int64_t kMaxTotalWeight = 1 << 14;

Rational rational_pow(const Rational& x, std::int64_t e) {
  Rational r = 1, base = x;
  while (e > 0) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return r;
}

// Neumaier-compensated accumulator.
struct CompensatedSum {
  long double sum = 0.0L, carry = 0.0L;
  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  long double value() const { return sum + carry; }
};

void check_energy(double e) {
  if (std::isnan(e)) fail(ErrorCode::InvalidArgument, "energy is NaN");
}

}  // namespace

std::size_t HsCoefficientTable::entry_count() const noexcept {
  std::size_t n = 0;
  for (auto w : weights_) n += static_cast<std::size_t>(w);
  return n;
}

const std::vector<Rational>& HsCoefficientTable::coefficients(std::size_t k) const {
  if (arithmetic_ != Arithmetic::Exact) fail(ErrorCode::InvalidArgument, "float table has no exact coefficients");
  return g_.at(k);
}

const std::vector<long double>& HsCoefficientTable::float_coefficients(std::size_t k) const {
  if (arithmetic_ != Arithmetic::Float) fail(ErrorCode::InvalidArgument, "exact table has no float coefficients");
  return g_float_.at(k);
}

void HsCoefficientTable::finalize() {
  total_weight_ = 0;
  for (auto w : weights_) total_weight_ += w;
  energies_double_.clear();
  for (const auto& q : energies_) energies_double_.push_back(to_double(q));
  const auto W = static_cast<unsigned>(total_weight_);
  plateau_ = Rational(1) / Rational(factorial(W - 1));
  log_plateau_ = log_rational(plateau_);

  // Factorials 0..W as exact integers, once per table.
  std::vector<BigInt> fact(W + 1);
  fact[0] = 1;
  for (unsigned i = 1; i <= W; ++i) fact[i] = fact[i - 1] * i;

  const std::size_t D = energies_.size();
  if (arithmetic_ == Arithmetic::Exact) {
    horner_int_.assign(D, {});
    horner_den_.assign(D, {});
    for (std::size_t k = 0; k < D; ++k) {
      const auto base = static_cast<std::size_t>(exponent_base(k));
      for (std::size_t m = 0; m < g_[k].size(); ++m) {
        horner_int_[k].push_back(g_[k][m] / Rational(fact[m + base]));
        horner_den_[k].push_back(g_[k][m] / Rational(fact[m + base - 1]));
      }
    }
  } else {
    horner_int_f_.assign(D, {});
    horner_den_f_.assign(D, {});
    for (std::size_t k = 0; k < D; ++k) {
      const auto base = static_cast<std::size_t>(exponent_base(k));
      for (std::size_t m = 0; m < g_float_[k].size(); ++m) {
        horner_int_f_[k].push_back(g_float_[k][m] / std::tgamma(static_cast<long double>(m + base + 1)));
        horner_den_f_[k].push_back(g_float_[k][m] / std::tgamma(static_cast<long double>(m + base)));
      }
    }
  }
}

HsCoefficientTable residue_table(const Spectrum& spectrum, std::int64_t weight_per_unit, Arithmetic arithmetic) {
  const std::size_t D = spectrum.distinct();
  if (D < 2) fail(ErrorCode::InvalidDimension, "residue table needs at least two distinct levels");
  if (weight_per_unit < 1) fail(ErrorCode::InvalidArgument, "weight per unit must be positive");

  HsCoefficientTable t;
  t.arithmetic_ = arithmetic;
  t.weight_per_unit_ = weight_per_unit;
  t.hash_ = spectrum.hash();
  t.energies_.assign(spectrum.exact_levels().begin(), spectrum.exact_levels().end());
  std::int64_t W = 0;
  for (auto n : spectrum.multiplicities()) {
    if (n > kMaxTotalWeight / weight_per_unit) fail(ErrorCode::OverflowGuard, "total weight too large");
    t.weights_.push_back(n * weight_per_unit);
    W += t.weights_.back();
    if (W > kMaxTotalWeight) fail(ErrorCode::OverflowGuard, "total weight too large for the residue engine");
  }

  if (arithmetic == Arithmetic::Exact) {
    t.g_.resize(D);
    for (std::size_t k = 0; k < D; ++k) {
      const auto wk = static_cast<std::size_t>(t.weights_[k]);
      std::vector<Rational> inv_gap;
      std::vector<std::int64_t> w_other;
      Rational c0 = 1;
      for (std::size_t j = 0; j < D; ++j) {
        if (j == k) continue;
        const Rational gap = t.energies_[j] - t.energies_[k];
        if (gap == 0) fail(ErrorCode::DegenerateGap, "coincident levels; merge them into a multiplicity");
        inv_gap.push_back(Rational(1) / gap);
        w_other.push_back(t.weights_[j]);
        c0 *= rational_pow(inv_gap.back(), t.weights_[j]);
      }
      // Power sums s_r = sum_j w_j / gap_j^(r+1) drive the
      // logarithmic-derivative recurrence for the composition sums.
      std::vector<Rational> s(wk > 1 ? wk - 1 : 0);
      std::vector<Rational> pw = inv_gap;
      for (std::size_t r = 0; r < s.size(); ++r) {
        Rational acc = 0;
        for (std::size_t j = 0; j < pw.size(); ++j) acc += Rational(w_other[j]) * pw[j];
        s[r] = acc;
        for (std::size_t j = 0; j < pw.size(); ++j) pw[j] *= inv_gap[j];
      }
      std::vector<Rational> c(wk);
      c[0] = c0;
      for (std::size_t m = 0; m + 1 < wk; ++m) {
        Rational acc = 0;
        for (std::size_t i = 0; i <= m; ++i) acc += c[i] * s[m - i];
        c[m + 1] = acc / Rational(static_cast<long>(m + 1));
      }
      t.g_[k].resize(wk);
      for (std::size_t m = 0; m < wk; ++m) {
        Rational g = c[m] / Rational(factorial(static_cast<unsigned>(wk - m - 1)));
        t.g_[k][m] = (m % 2 == 0) ? g : Rational(-g);
      }
    }
  } else {
    t.g_float_.resize(D);
    for (std::size_t k = 0; k < D; ++k) {
      const auto wk = static_cast<std::size_t>(t.weights_[k]);
      const long double ek = static_cast<long double>(spectrum.level(k));
      std::vector<long double> inv_gap;
      std::vector<long double> w_other;
      long double log_c0 = 0.0L;
      int sign_c0 = 1;
      for (std::size_t j = 0; j < D; ++j) {
        if (j == k) continue;
        const long double gap = static_cast<long double>(spectrum.level(j)) - ek;
        if (gap == 0.0L) fail(ErrorCode::DegenerateGap, "coincident levels in float mode");
        inv_gap.push_back(1.0L / gap);
        w_other.push_back(static_cast<long double>(t.weights_[j]));
        log_c0 -= w_other.back() * std::log(std::fabs(gap));
        if (gap < 0 && (t.weights_[j] % 2 == 1)) sign_c0 = -sign_c0;
      }
      std::vector<long double> s(wk > 1 ? wk - 1 : 0);
      std::vector<long double> pw = inv_gap;
      for (std::size_t r = 0; r < s.size(); ++r) {
        long double acc = 0.0L;
        for (std::size_t j = 0; j < pw.size(); ++j) acc += w_other[j] * pw[j];
        s[r] = acc;
        for (std::size_t j = 0; j < pw.size(); ++j) pw[j] *= inv_gap[j];
      }
      std::vector<long double> c(wk);
      c[0] = sign_c0 * std::exp(log_c0);
      for (std::size_t m = 0; m + 1 < wk; ++m) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i <= m; ++i) acc += c[i] * s[m - i];
        c[m + 1] = acc / static_cast<long double>(m + 1);
      }
      t.g_float_[k].resize(wk);
      for (std::size_t m = 0; m < wk; ++m) {
        const long double g = c[m] / std::tgamma(static_cast<long double>(wk - m));
        if (!std::isfinite(g))
          fail(ErrorCode::PrecisionFailure, "float residue coefficients overflow; use exact arithmetic");
        t.g_float_[k][m] = (m % 2 == 0) ? g : -g;
      }
    }
  }
  t.finalize();

  if (arithmetic == Arithmetic::Float) {
    // The plateau identity is a sum of huge terms cancelling to 1/(W-1)!; if
    // it does not survive in long double, nothing else will either.
    const double top = hs_omega_integrated(t, spectrum.top(), Normalization::Plateau);
    if (!std::isfinite(top) || std::fabs(top - 1.0) > 1e-6)
      fail(ErrorCode::PrecisionFailure, "float residue sum lost the plateau identity (got " + std::to_string(top) +
                                            "); use exact arithmetic");
  }
  return t;
}

HsCoefficientTable hs_coefficients(const Spectrum& spectrum, Arithmetic arithmetic) {
  return residue_table(spectrum, spectrum.dim(), arithmetic);
}

namespace {

// sum_{E_k <= E} (E - E_k)^(base_k + shift) * P_k(E - E_k), exact.
Rational evaluate_exact(const HsCoefficientTable& t, const std::vector<std::vector<Rational>>& horner,
                        const Rational& energy, std::int64_t shift) {
  Rational total = 0;
  for (std::size_t k = 0; k < t.levels(); ++k) {
    if (t.exact_level(k) > energy) break;
    const Rational x = energy - t.exact_level(k);
    const auto& h = horner[k];
    Rational acc = 0;
    for (std::size_t m = h.size(); m-- > 0;) acc = acc * x + h[m];
    const std::int64_t e = t.exponent_base(k) + shift;
    if (e > 0) acc *= rational_pow(x, e);
    total += acc;
  }
  return total;
}

long double evaluate_float(const HsCoefficientTable& t, const std::vector<std::vector<long double>>& horner,
                           double energy, std::int64_t shift) {
  CompensatedSum total;
  for (std::size_t k = 0; k < t.levels(); ++k) {
    if (t.level(k) > energy) break;
    const long double x = static_cast<long double>(energy) - static_cast<long double>(t.level(k));
    const auto& h = horner[k];
    long double acc = 0.0L;
    for (std::size_t m = h.size(); m-- > 0;) acc = acc * x + h[m];
    const std::int64_t e = t.exponent_base(k) + shift;
    if (e > 0) acc *= std::pow(x, static_cast<long double>(e));
    total.add(acc);
  }
  return total.value();
}

}  // namespace

struct HsTableAccess {
  static const auto& integrated(const HsCoefficientTable& t) { return t.horner_int_; }
  static const auto& density(const HsCoefficientTable& t) { return t.horner_den_; }
  static const auto& integrated_f(const HsCoefficientTable& t) { return t.horner_int_f_; }
  static const auto& density_f(const HsCoefficientTable& t) { return t.horner_den_f_; }
};

Rational hs_omega_integrated_exact(const HsCoefficientTable& table, const Rational& energy, Normalization norm) {
  if (table.arithmetic() != Arithmetic::Exact) fail(ErrorCode::InvalidArgument, "exact evaluation needs an exact table");
  if (energy < table.exact_level(0)) return 0;
  Rational v = evaluate_exact(table, HsTableAccess::integrated(table), energy, 0);
  return norm == Normalization::Plateau ? Rational(v / table.plateau()) : v;
}

Rational hs_omega_density_exact(const HsCoefficientTable& table, const Rational& energy, Normalization norm) {
  if (table.arithmetic() != Arithmetic::Exact) fail(ErrorCode::InvalidArgument, "exact evaluation needs an exact table");
  if (energy < table.exact_level(0)) return 0;
  Rational v = evaluate_exact(table, HsTableAccess::density(table), energy, -1);
  return norm == Normalization::Plateau ? Rational(v / table.plateau()) : v;
}

double hs_omega_integrated(const HsCoefficientTable& table, double energy, Normalization norm) {
  check_energy(energy);
  if (energy < table.ground()) return 0.0;
  if (table.arithmetic() == Arithmetic::Exact) {
    if (norm == Normalization::Raw) return std::exp(hs_log_omega_integrated(table, energy));
    return to_double(hs_omega_integrated_exact(table, to_rational(energy), norm));
  }
  const long double v = evaluate_float(table, HsTableAccess::integrated_f(table), energy, 0);
  if (norm == Normalization::Raw) return static_cast<double>(v);
  return static_cast<double>(v / to_double(table.plateau()));
}

double hs_omega_density(const HsCoefficientTable& table, double energy, Normalization norm) {
  check_energy(energy);
  if (energy < table.ground()) return 0.0;
  if (table.arithmetic() == Arithmetic::Exact) {
    if (norm == Normalization::Raw) return std::exp(hs_log_omega_density(table, energy));
    return to_double(hs_omega_density_exact(table, to_rational(energy), norm));
  }
  const long double v = evaluate_float(table, HsTableAccess::density_f(table), energy, -1);
  if (norm == Normalization::Raw) return static_cast<double>(v);
  return static_cast<double>(v / to_double(table.plateau()));
}

namespace {

double log_or_minus_inf(const Rational& q) {
  if (q <= 0) return -std::numeric_limits<double>::infinity();
  return log_rational(q);
}

}  // namespace

double hs_log_omega_integrated(const HsCoefficientTable& table, double energy) {
  check_energy(energy);
  if (energy <= table.ground()) return -std::numeric_limits<double>::infinity();
  if (table.arithmetic() == Arithmetic::Exact)
    return log_or_minus_inf(hs_omega_integrated_exact(table, to_rational(energy), Normalization::Raw));
  const double v = hs_omega_integrated(table, energy, Normalization::Plateau);
  return v > 0 ? std::log(v) + table.log_plateau() : -std::numeric_limits<double>::infinity();
}

double hs_log_omega_density(const HsCoefficientTable& table, double energy) {
  check_energy(energy);
  if (energy < table.ground()) return -std::numeric_limits<double>::infinity();
  if (table.arithmetic() == Arithmetic::Exact)
    return log_or_minus_inf(hs_omega_density_exact(table, to_rational(energy), Normalization::Raw));
  const double v = hs_omega_density(table, energy, Normalization::Plateau);
  return v > 0 ? std::log(v) + table.log_plateau() : -std::numeric_limits<double>::infinity();
}

double hs_log_omega_complement(const HsCoefficientTable& table, double energy) {
  check_energy(energy);
  if (energy >= table.top()) return -std::numeric_limits<double>::infinity();
  if (energy <= table.ground()) return table.log_plateau();
  if (table.arithmetic() == Arithmetic::Exact)
    return log_or_minus_inf(table.plateau() - hs_omega_integrated_exact(table, to_rational(energy), Normalization::Raw));
  const double v = 1.0 - hs_omega_integrated(table, energy, Normalization::Plateau);
  return v > 0 ? std::log(v) + table.log_plateau() : -std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------

std::string table_to_json(const HsCoefficientTable& table) {
  if (table.arithmetic() != Arithmetic::Exact) fail(ErrorCode::InvalidArgument, "only exact tables are serialized");
  nlohmann::json doc;
  doc["spectrum_hash"] = table.spectrum_hash();
  doc["weight_per_unit"] = table.weight_per_unit();
  doc["levels"] = nlohmann::json::array();
  doc["weights"] = nlohmann::json::array();
  doc["coefficients"] = nlohmann::json::array();
  for (std::size_t k = 0; k < table.levels(); ++k) {
    doc["levels"].push_back(to_string(table.exact_level(k)));
    doc["weights"].push_back(table.weight(k));
    nlohmann::json row = nlohmann::json::array();
    for (const auto& g : table.coefficients(k)) row.push_back(to_string(g));
    doc["coefficients"].push_back(std::move(row));
  }
  return doc.dump();
}

HsCoefficientTable table_from_json(const std::string& text) {
  HsCoefficientTable t;
  try {
    const auto doc = nlohmann::json::parse(text);
    t.arithmetic_ = Arithmetic::Exact;
    t.hash_ = doc.at("spectrum_hash").get<std::string>();
    t.weight_per_unit_ = doc.at("weight_per_unit").get<std::int64_t>();
    for (const auto& v : doc.at("levels")) t.energies_.push_back(parse_rational(v.get<std::string>()));
    for (const auto& v : doc.at("weights")) t.weights_.push_back(v.get<std::int64_t>());
    for (const auto& row : doc.at("coefficients")) {
      std::vector<Rational> g;
      for (const auto& v : row) g.push_back(parse_rational(v.get<std::string>()));
      t.g_.push_back(std::move(g));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("coefficient table JSON: ") + e.what());
  }
  if (t.energies_.size() < 2 || t.weights_.size() != t.energies_.size() || t.g_.size() != t.energies_.size())
    fail(ErrorCode::Parse, "coefficient table JSON is inconsistent");
  for (std::size_t k = 0; k < t.g_.size(); ++k)
    if (static_cast<std::int64_t>(t.g_[k].size()) != t.weights_[k])
      fail(ErrorCode::Parse, "coefficient row length does not match its weight");
  t.finalize();
  return t;
}

HsTableCache::HsTableCache(std::filesystem::path directory) : dir_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(ErrorCode::Io, "cannot create cache directory '" + dir_.string() + "'");
}

std::filesystem::path HsTableCache::path_for(const Spectrum& spectrum) const {
  return dir_ / ("hs-" + spectrum.hash() + ".json");
}

HsCoefficientTable HsTableCache::get(const Spectrum& spectrum) {
  const auto path = path_for(spectrum);
  if (std::ifstream in(path); in) {
    std::stringstream buf;
    buf << in.rdbuf();
    auto table = table_from_json(buf.str());
    if (table.spectrum_hash() == spectrum.hash() && table.weight_per_unit() == spectrum.dim()) return table;
  }
  auto table = hs_coefficients(spectrum, Arithmetic::Exact);
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write cache file '" + path.string() + "'");
  out << table_to_json(table);
  return table;
}

}  // namespace rdm
