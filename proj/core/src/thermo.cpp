#include "rdm/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "rdm/error.hpp"

namespace rdm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double entropy(const DosFunction& dos, double energy) {
  if (std::isnan(energy)) fail(ErrorCode::InvalidArgument, "energy is NaN");
  if (energy <= dos.spectrum().ground()) return -kInf;
  if (energy >= dos.spectrum().top()) return 0.0;
  return dos.log_integrated_raw(energy) - dos.log_plateau();
}

double temperature(const DosFunction& dos, double energy) {
  if (std::isnan(energy)) fail(ErrorCode::InvalidArgument, "energy is NaN");
  if (energy <= dos.spectrum().ground()) return 0.0;
  if (energy >= dos.spectrum().top()) return kInf;
  const double log_density = dos.log_density_raw(energy);
  if (log_density == -kInf) return kInf;
  return std::exp(dos.log_integrated_raw(energy) - log_density);
}

TemperatureRoot energy_at_temperature(const DosFunction& dos, double target,
                                      std::optional<std::pair<double, double>> bracket) {
  if (std::isnan(target) || target < 0.0) fail(ErrorCode::InvalidArgument, "temperature must be nonnegative");
  const double e0 = dos.spectrum().ground(), e1 = dos.spectrum().top();
  auto [lo, hi] = bracket.value_or(std::pair{e0, e1});
  if (!(lo < hi)) fail(ErrorCode::InvalidArgument, "empty energy bracket");
  if (!bracket) {
    if (target == 0.0) return {e0, false};
    if (target == kInf) return {e1, false};
  }
  // (T - target)/(T + target) has the roots and signs of T - target but stays
  // finite where T does not.
  auto g = [&](double e) {
    const double t = temperature(dos, e);
    if (t == kInf) return 1.0;
    return (t - target) / (t + target);
  };
  constexpr int kScan = 64;
  std::vector<double> xs(kScan + 1), gs(kScan + 1);
  for (int i = 0; i <= kScan; ++i) {
    xs[i] = (i == kScan) ? hi : lo + (hi - lo) * i / kScan;
    gs[i] = g(xs[i]);
  }
  int first = -1, changes = 0;
  for (int i = 0; i < kScan; ++i) {
    if (gs[i] == 0.0) {
      if (first < 0) first = i;
      ++changes;
      continue;
    }
    if ((gs[i] < 0.0) != (gs[i + 1] < 0.0) && gs[i + 1] != 0.0) {
      if (first < 0) first = i;
      ++changes;
    }
  }
  if (first < 0) fail(ErrorCode::BracketFailure, "T(E) - target has no sign change in the bracket");
  if (gs[first] == 0.0) return {xs[first], changes > 1};
  const double scale = std::max(hi - lo, std::max(std::fabs(lo), std::fabs(hi)));
  auto tol = [scale](double a, double b) { return std::fabs(b - a) <= 1e-13 * scale; };
  std::uintmax_t iters = 200;
  const auto r =
      boost::math::tools::toms748_solve(g, xs[first], xs[first + 1], gs[first], gs[first + 1], tol, iters);
  return {0.5 * (r.first + r.second), changes > 1};
}

// ---------------------------------------------------------------------------

PerturbedSpectrumFamily PerturbedSpectrumFamily::energy_squared(const Spectrum& base, const Rational& center) {
  PerturbedSpectrumFamily f(Kind::EnergySquared, base);
  f.center_ = center;
  for (const auto& e : base.exact_levels()) {
    const double v = to_double(Rational((e - center) * (e - center)));
    f.diag_mean_.push_back(v);
    f.level_velocity_.push_back(v);
  }
  return f;
}

PerturbedSpectrumFamily PerturbedSpectrumFamily::scale(const Spectrum& base) {
  PerturbedSpectrumFamily f(Kind::Scale, base);
  for (double e : base.levels()) {
    f.diag_mean_.push_back(e);
    f.level_velocity_.push_back(std::fabs(e));
  }
  return f;
}

PerturbedSpectrumFamily PerturbedSpectrumFamily::field_shift(const ModelSpec& model, const SpectrumLimits& limits) {
  PerturbedSpectrumFamily f(Kind::FieldShift, build_spectrum(model, limits));
  f.model_ = model;
  f.limits_ = limits;
  f.diag_mean_ = field_derivative(model, limits);
  // Levels inside one merged level can move at different rates; the extreme
  // rate is |m| <= N/2.
  const int n = std::visit(
      [](const auto& m) -> int {
        if constexpr (requires { m.n; }) return m.n; else return 0;
      },
      model);
  f.level_velocity_.assign(f.base_.distinct(), 0.5 * n);
  return f;
}

PerturbedSpectrumFamily PerturbedSpectrumFamily::level_projector(const Spectrum& base, std::size_t k) {
  if (k >= base.distinct()) fail(ErrorCode::InvalidArgument, "level index out of range");
  PerturbedSpectrumFamily f(Kind::LevelProjector, base);
  f.level_ = k;
  f.diag_mean_.assign(base.distinct(), 0.0);
  f.diag_mean_[k] = 1.0 / static_cast<double>(base.multiplicity(k));
  f.level_velocity_.assign(base.distinct(), 0.0);
  f.level_velocity_[k] = 1.0;
  return f;
}

PerturbedSpectrumFamily PerturbedSpectrumFamily::level_shift(const Spectrum& base, std::size_t k) {
  if (k >= base.distinct()) fail(ErrorCode::InvalidArgument, "level index out of range");
  PerturbedSpectrumFamily f(Kind::LevelShift, base);
  f.level_ = k;
  f.diag_mean_.assign(base.distinct(), 0.0);
  f.diag_mean_[k] = 1.0;
  f.level_velocity_.assign(base.distinct(), 0.0);
  f.level_velocity_[k] = 1.0;
  return f;
}

Spectrum PerturbedSpectrumFamily::at(const Rational& lambda) const {
  if (lambda == 0) return base_;
  std::vector<Rational> levels(base_.exact_levels().begin(), base_.exact_levels().end());
  std::vector<std::int64_t> mult(base_.multiplicities().begin(), base_.multiplicities().end());
  switch (kind_) {
    case Kind::EnergySquared:
      for (auto& e : levels) e += lambda * (e - center_) * (e - center_);
      break;
    case Kind::Scale:
      for (auto& e : levels) e *= Rational(1) + lambda;
      break;
    case Kind::FieldShift:
      return build_spectrum(with_field_offset(*model_, lambda), limits_);
    case Kind::LevelShift:
      levels[level_] += lambda;
      break;
    case Kind::LevelProjector:
      if (mult[level_] == 1) {
        levels[level_] += lambda;
      } else {
        --mult[level_];
        const auto pos = static_cast<std::ptrdiff_t>(level_) + (lambda > 0 ? 1 : 0);
        levels.insert(levels.begin() + pos, levels[level_] + lambda);
        mult.insert(mult.begin() + pos, 1);
      }
      break;
  }
  return Spectrum::from_exact(std::move(levels), std::move(mult));
}

double PerturbedSpectrumFamily::max_level_velocity() const noexcept {
  double v = 0.0;
  for (double x : level_velocity_) v = std::max(v, std::fabs(x));
  return v;
}

Rational PerturbedSpectrumFamily::natural_step(double fraction) const {
  double min_gap = kInf;
  for (std::size_t k = 1; k < base_.distinct(); ++k) min_gap = std::min(min_gap, base_.level(k) - base_.level(k - 1));
  const double v = max_level_velocity();
  if (!(v > 0.0)) return Rational(1, 1024);
  const double target = std::min(fraction * base_.span(), 0.1 * min_gap) / v;
  const int e = static_cast<int>(std::floor(std::log2(target)));
  Rational step = 1;
  for (int i = 0; i < std::abs(e); ++i) step = e < 0 ? Rational(step / 2) : Rational(step * 2);
  return step;
}

// ---------------------------------------------------------------------------

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// Both spectrum edges stay on their side of E, each moving at most `margin`
// of its distance to E.
bool edges_clear(const Spectrum& base, const Spectrum& s, double energy, double margin) {
  const double lower = energy - base.ground(), upper = base.top() - energy;
  return std::fabs(s.ground() - base.ground()) <= margin * lower && std::fabs(s.top() - base.top()) <= margin * upper;
}

}  // namespace

Expectation observable_expectation(const DosBuilder& builder, const PerturbedSpectrumFamily& family, double energy,
                                   const ExpectationOptions& options) {
  if (std::isnan(energy)) fail(ErrorCode::InvalidArgument, "energy is NaN");
  const Spectrum& base = family.base();
  const auto& diag = family.level_diagonal_mean();
  Expectation out;
  if (energy <= base.ground() || energy >= base.top()) {
    // The shell collapses onto the ground (top) eigenspace.
    out.endpoint = true;
    out.value = energy <= base.ground() ? diag.front() : diag.back();
    out.temperature = energy <= base.ground() ? 0.0 : kInf;
    return out;
  }
  const auto dos = builder(base);
  out.temperature = temperature(*dos, energy);
  // Below the midpoint of the volume difference ln Omega; above it the
  // complement, where <O> = (Omega_bar/omega) d ln(Omega_bar)/d lambda.
  const double log_omega = dos->log_integrated_raw(energy);
  out.complement = log_omega - dos->log_plateau() > -std::numbers::ln2;
  const double prefactor = out.complement
                               ? std::exp(dos->log_complement_raw(energy) - dos->log_density_raw(energy))
                               : -out.temperature;

  Rational h = options.step.value_or(family.natural_step(options.step_fraction));
  if (!(h > 0)) fail(ErrorCode::InvalidArgument, "step must be positive");
  std::vector<Spectrum> perturbed;
  for (int halving = 0;; ++halving) {
    perturbed.clear();
    bool ok = true;
    for (const Rational& lam : {Rational(h), Rational(-h), Rational(h / 2), Rational(-h / 2)}) {
      perturbed.push_back(family.at(lam));
      if (!edges_clear(base, perturbed.back(), energy, options.edge_margin)) {
        ok = false;
        break;
      }
    }
    if (ok) break;
    if (halving >= options.max_halvings)
      fail(ErrorCode::StepTooLarge, "perturbation moves the spectrum edge too close to E even after step reduction");
    h /= 2;
  }
  double s[4];
  for (int i = 0; i < 4; ++i) {
    const auto p = builder(perturbed[i]);
    s[i] = out.complement ? p->log_complement_raw(energy) : p->log_integrated_raw(energy);
  }
  const double hd = to_double(h);
  const double d1 = (s[0] - s[1]) / (2.0 * hd);
  const double d2 = (s[2] - s[3]) / hd;
  out.derivative = (4.0 * d2 - d1) / 3.0;
  out.value = prefactor * out.derivative;
  out.step = hd;
  out.difference_estimate = std::fabs(prefactor) * std::fabs(d1 - d2);
  out.converged = out.difference_estimate <=
                  options.convergence_tolerance * std::max(std::fabs(out.value), 1e-3 * max_abs(diag));
  return out;
}

Fluctuation energy_variance(const DosBuilder& builder, const Spectrum& spectrum, double energy,
                            const ExpectationOptions& options) {
  if (std::isnan(energy)) fail(ErrorCode::InvalidArgument, "energy is NaN");
  const double clamped = std::clamp(energy, spectrum.ground(), spectrum.top());
  const auto family = PerturbedSpectrumFamily::energy_squared(spectrum, to_rational(clamped));
  const auto r = observable_expectation(builder, family, energy, options);
  const double var = std::max(0.0, r.value);
  return {var, std::sqrt(var), r.converged};
}

Populations average_state_populations(const DosBuilder& builder, const Spectrum& spectrum, double energy,
                                      const ExpectationOptions& options) {
  Populations out;
  double total = 0.0;
  for (std::size_t k = 0; k < spectrum.distinct(); ++k) {
    const auto family = PerturbedSpectrumFamily::level_shift(spectrum, k);
    const auto r = observable_expectation(builder, family, energy, options);
    const auto n = spectrum.multiplicity(k);
    const double p = r.value / static_cast<double>(n);
    out.levels.push_back({spectrum.level(k), n, p});
    out.converged = out.converged && r.converged;
    total += r.value;
  }
  out.raw_deviation = total - 1.0;
  if (total > 0.0)
    for (auto& l : out.levels) l.population /= total;
  return out;
}

Magnetization magnetization(const DosBuilder& builder, const ModelSpec& model, double energy,
                            const ExpectationOptions& options, const SpectrumLimits& limits) {
  if (!std::holds_alternative<SpinChainModel>(model) && !std::holds_alternative<CurieWeissModel>(model))
    fail(ErrorCode::InvalidArgument, "magnetization needs a spin model");
  const auto family = PerturbedSpectrumFamily::field_shift(model, limits);
  // dH/dB = -S_z, so <S_z> = -<dH/dB>.
  const auto r = observable_expectation(builder, family, energy, options);
  return {-r.value, r.converged};
}

}  // namespace rdm
