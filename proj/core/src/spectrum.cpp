#include "rdm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "rdm/error.hpp"

namespace rdm {

Spectrum Spectrum::from_exact(std::vector<Rational> levels, std::vector<std::int64_t> multiplicities) {
  if (levels.size() != multiplicities.size())
    fail(ErrorCode::InvalidArgument, "levels and multiplicities differ in length");
  Spectrum s;
  s.exact_ = std::move(levels);
  s.multiplicities_ = std::move(multiplicities);
  s.levels_.reserve(s.exact_.size());
  for (const auto& q : s.exact_) s.levels_.push_back(to_double(q));
  s.validate();
  return s;
}

Spectrum Spectrum::from_levels(std::vector<double> levels, std::vector<std::int64_t> multiplicities) {
  std::vector<Rational> exact;
  exact.reserve(levels.size());
  for (double x : levels) exact.push_back(to_rational(x));
  return from_exact(std::move(exact), std::move(multiplicities));
}

Spectrum Spectrum::from_levels(std::vector<double> levels) {
  std::vector<std::int64_t> ones(levels.size(), 1);
  return from_levels(std::move(levels), std::move(ones));
}

void Spectrum::validate() {
  if (exact_.empty()) fail(ErrorCode::InvalidDimension, "spectrum has no levels");
  for (std::size_t k = 1; k < exact_.size(); ++k) {
    if (!(exact_[k - 1] < exact_[k]))
      fail(ErrorCode::InvalidArgument, "levels must be strictly increasing (merge degeneracies into multiplicities)");
    if (!(levels_[k - 1] < levels_[k]))
      fail(ErrorCode::DegenerateGap, "levels coincide in double precision");
  }
  dim_ = 0;
  for (auto n : multiplicities_) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "multiplicities must be positive");
    if (dim_ > std::numeric_limits<std::int64_t>::max() - n) fail(ErrorCode::OverflowGuard, "dimension overflows 64 bits");
    dim_ += n;
  }
  if (dim_ < 2) fail(ErrorCode::InvalidDimension, "Hilbert-space dimension must be at least 2");
}

bool Spectrum::degenerate() const noexcept {
  return std::any_of(multiplicities_.begin(), multiplicities_.end(), [](auto n) { return n > 1; });
}

std::vector<double> Spectrum::flattened() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(dim_));
  for (std::size_t k = 0; k < levels_.size(); ++k)
    out.insert(out.end(), static_cast<std::size_t>(multiplicities_[k]), levels_[k]);
  return out;
}

std::string Spectrum::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::string_view bytes) {
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (std::size_t k = 0; k < exact_.size(); ++k) {
    mix(to_string(exact_[k]));
    mix("x");
    mix(std::to_string(multiplicities_[k]));
    mix(";");
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

// ---------------------------------------------------------------------------

Spectrum linear_spectrum(int d, const Rational& hbar_omega) {
  if (d < 2) fail(ErrorCode::InvalidDimension, "linear spectrum needs d >= 2");
  if (hbar_omega <= 0) fail(ErrorCode::InvalidArgument, "hbar*omega must be positive");
  std::vector<Rational> levels;
  for (int k = 0; k < d; ++k) levels.emplace_back(hbar_omega * k);
  return Spectrum::from_exact(std::move(levels), std::vector<std::int64_t>(static_cast<std::size_t>(d), 1));
}

Spectrum linear_spectrum(int d, double hbar_omega) { return linear_spectrum(d, to_rational(hbar_omega)); }

namespace {

void check_spins(int n, const Rational& b, const SpectrumLimits& limits) {
  if (n < 1) fail(ErrorCode::InvalidSize, "need at least one spin");
  if (n > limits.max_spins)
    fail(ErrorCode::OverflowGuard, "N=" + std::to_string(n) + " exceeds the 64-bit degeneracy guard (max " +
                                        std::to_string(limits.max_spins) + ")");
  if (b <= 0) fail(ErrorCode::InvalidArgument, "field B must be positive");
}

std::int64_t to_i64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max()) fail(ErrorCode::OverflowGuard, "degeneracy exceeds 64 bits");
  return v.convert_to<std::int64_t>();
}

struct RawLevel {
  Rational energy;
  std::int64_t count;
  double field_slope;  // dE/dB for this (s, m) block
};

std::vector<RawLevel> curie_weiss_table(int n, const Rational& b, const Rational& j) {
  std::vector<RawLevel> raw;
  const auto un = static_cast<unsigned>(n);
  // Work with twice the quantum numbers so everything stays integral.
  for (int two_s = n % 2; two_s <= n; two_s += 2) {
    const unsigned lower = static_cast<unsigned>((n - two_s) / 2);
    BigInt ns = binomial(un, lower);
    if (lower >= 1) ns -= binomial(un, lower - 1);
    const std::int64_t count = to_i64(ns);
    const Rational s_term = Rational(two_s * (two_s + 2), 4) - Rational(3 * n, 4);
    const Rational exchange = j / (2 * n) * s_term;
    for (int two_m = -two_s; two_m <= two_s; two_m += 2) {
      const Rational m(two_m, 2);
      raw.push_back({Rational(-b * m - exchange), count, -static_cast<double>(two_m) / 2.0});
    }
  }
  return raw;
}

struct MergedLevels {
  std::vector<Rational> levels;
  std::vector<std::int64_t> counts;
  std::vector<double> mean_slope;
};

MergedLevels merge_levels(std::vector<RawLevel> raw, double rel_tol) {
  std::sort(raw.begin(), raw.end(), [](const RawLevel& a, const RawLevel& b) { return a.energy < b.energy; });
  double max_gap = 0.0;
  for (std::size_t i = 1; i < raw.size(); ++i)
    max_gap = std::max(max_gap, to_double(raw[i].energy) - to_double(raw[i - 1].energy));
  const double tol = rel_tol * max_gap;

  MergedLevels out;
  std::vector<double> slope_sum;
  for (const auto& r : raw) {
    const bool same = !out.levels.empty() &&
                      (r.energy == out.levels.back() || to_double(r.energy) - to_double(out.levels.back()) <= tol);
    if (same) {
      out.counts.back() += r.count;
      slope_sum.back() += r.field_slope * static_cast<double>(r.count);
    } else {
      out.levels.push_back(r.energy);
      out.counts.push_back(r.count);
      slope_sum.push_back(r.field_slope * static_cast<double>(r.count));
    }
  }
  for (std::size_t k = 0; k < out.levels.size(); ++k)
    out.mean_slope.push_back(slope_sum[k] / static_cast<double>(out.counts[k]));
  return out;
}

std::vector<RawLevel> spin_chain_table(int n, const Rational& b) {
  std::vector<RawLevel> raw;
  const auto un = static_cast<unsigned>(n);
  for (int k = 0; k <= n; ++k) {
    const Rational e = -(Rational(n, 2) - k) * b;
    raw.push_back({e, to_i64(binomial(un, static_cast<unsigned>(k))), -(n / 2.0 - k)});
  }
  return raw;
}

}  // namespace

Spectrum noninteracting_spins(int n, const Rational& b, const SpectrumLimits& limits) {
  check_spins(n, b, limits);
  auto merged = merge_levels(spin_chain_table(n, b), 0.0);
  return Spectrum::from_exact(std::move(merged.levels), std::move(merged.counts));
}

Spectrum noninteracting_spins(int n, double b, const SpectrumLimits& limits) {
  return noninteracting_spins(n, to_rational(b), limits);
}

Spectrum curie_weiss(int n, const Rational& b, const Rational& j, const SpectrumLimits& limits) {
  check_spins(n, b, limits);
  auto merged = merge_levels(curie_weiss_table(n, b, j), limits.merge_tolerance);
  return Spectrum::from_exact(std::move(merged.levels), std::move(merged.counts));
}

Spectrum curie_weiss(int n, double b, double j, const SpectrumLimits& limits) {
  return curie_weiss(n, to_rational(b), to_rational(j), limits);
}

Spectrum build_spectrum(const ModelSpec& model, const SpectrumLimits& limits) {
  return std::visit(
      [&](const auto& m) -> Spectrum {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          return linear_spectrum(m.d, m.hbar_omega);
        } else if constexpr (std::is_same_v<T, SpinChainModel>) {
          return noninteracting_spins(m.n, m.b, limits);
        } else if constexpr (std::is_same_v<T, CurieWeissModel>) {
          return curie_weiss(m.n, m.b, m.j, limits);
        } else {
          return Spectrum::from_exact(m.levels, m.multiplicities);
        }
      },
      model);
}

std::vector<double> field_derivative(const ModelSpec& model, const SpectrumLimits& limits) {
  if (const auto* sc = std::get_if<SpinChainModel>(&model)) {
    check_spins(sc->n, sc->b, limits);
    return merge_levels(spin_chain_table(sc->n, sc->b), 0.0).mean_slope;
  }
  if (const auto* cw = std::get_if<CurieWeissModel>(&model)) {
    check_spins(cw->n, cw->b, limits);
    return merge_levels(curie_weiss_table(cw->n, cw->b, cw->j), limits.merge_tolerance).mean_slope;
  }
  fail(ErrorCode::Unsupported, "field derivative needs a spin model");
}

ModelSpec with_field_offset(const ModelSpec& model, const Rational& delta) {
  if (const auto* sc = std::get_if<SpinChainModel>(&model)) return SpinChainModel{sc->n, sc->b + delta};
  if (const auto* cw = std::get_if<CurieWeissModel>(&model)) return CurieWeissModel{cw->n, cw->b + delta, cw->j};
  fail(ErrorCode::Unsupported, "field shift needs a spin model");
}

Spectrum shift_to_ground(const Spectrum& spectrum) {
  const auto exact = spectrum.exact_levels();
  std::vector<Rational> shifted;
  shifted.reserve(exact.size());
  for (const auto& q : exact) shifted.emplace_back(q - exact.front());
  const auto mult = spectrum.multiplicities();
  return Spectrum::from_exact(std::move(shifted), {mult.begin(), mult.end()});
}

// ---------------------------------------------------------------------------

Spectrum parse_spectrum_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("spectrum JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("levels") || !doc["levels"].is_array())
    fail(ErrorCode::Parse, "spectrum JSON needs a \"levels\" array");
  std::vector<Rational> levels;
  for (const auto& v : doc["levels"]) {
    if (v.is_string()) {
      levels.push_back(parse_rational(v.get<std::string>()));
    } else if (v.is_number()) {
      levels.push_back(v.is_number_integer() ? Rational(v.get<std::int64_t>()) : to_rational(v.get<double>()));
    } else {
      fail(ErrorCode::Parse, "levels must be numbers or \"p/q\" strings");
    }
  }
  std::vector<std::int64_t> mult(levels.size(), 1);
  if (doc.contains("multiplicities")) {
    const auto& m = doc["multiplicities"];
    if (!m.is_array() || m.size() != levels.size())
      fail(ErrorCode::Parse, "\"multiplicities\" must be an array matching \"levels\"");
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (!m[k].is_number_integer()) fail(ErrorCode::Parse, "multiplicities must be integers");
      mult[k] = m[k].get<std::int64_t>();
    }
  }
  return Spectrum::from_exact(std::move(levels), std::move(mult));
}

Spectrum load_spectrum_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open spectrum file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spectrum_json(buf.str());
}

std::string spectrum_to_json(const Spectrum& spectrum) {
  nlohmann::json doc;
  doc["levels"] = nlohmann::json::array();
  for (const auto& q : spectrum.exact_levels()) doc["levels"].push_back(to_string(q));
  doc["multiplicities"] = std::vector<std::int64_t>(spectrum.multiplicities().begin(), spectrum.multiplicities().end());
  return doc.dump();
}

std::string describe(const ModelSpec& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          return "linear(d=" + std::to_string(m.d) + ", hw=" + to_string(m.hbar_omega) + ")";
        } else if constexpr (std::is_same_v<T, SpinChainModel>) {
          return "spins(N=" + std::to_string(m.n) + ", B=" + to_string(m.b) + ")";
        } else if constexpr (std::is_same_v<T, CurieWeissModel>) {
          return "curie-weiss(N=" + std::to_string(m.n) + ", B=" + to_string(m.b) + ", J=" + to_string(m.j) + ")";
        } else {
          return "custom(D=" + std::to_string(m.levels.size()) + ")";
        }
      },
      model);
}

}  // namespace rdm
