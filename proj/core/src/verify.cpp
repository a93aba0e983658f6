#include "rdm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include <json.hpp>

#include "rdm/asymptotics.hpp"
#include "rdm/bh_dos.hpp"
#include "rdm/error.hpp"
#include "rdm/pure_dos.hpp"
#include "rdm/sampling.hpp"
#include "rdm/stats.hpp"
#include "rdm/thermo.hpp"

namespace rdm {

namespace {

CheckResult below(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value < threshold, value, threshold, std::move(detail)};
}

CheckResult holds(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok, ok ? 0.0 : 1.0, 0.5, std::move(detail)};
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct NamedSpectrum {
  std::string name;
  Spectrum spectrum;
};

std::vector<NamedSpectrum> plateau_spectra() {
  std::vector<NamedSpectrum> out;
  for (int d = 2; d <= 6; ++d) out.push_back({"linear d=" + std::to_string(d), linear_spectrum(d, Rational(1))});
  for (int n = 1; n <= 3; ++n)
    out.push_back({"spins N=" + std::to_string(n), noninteracting_spins(n, Rational(1))});
  return out;
}

void plateau_suite(SuiteReport& r, const VerifyOptions&) {
  for (const auto& [name, s] : plateau_spectra()) {
    for (const auto& [label, table] : {std::pair{"hs", hs_coefficients(s)}, std::pair{"pure", pure_table(s)}}) {
      const Rational top = s.exact_levels().back();
      const Rational span = top - s.exact_levels().front();
      bool ok = true;
      for (const Rational& beyond : std::vector<Rational>{Rational(0), Rational(span / 8), span, Rational(span * 10)}) {
        ok = ok && hs_omega_integrated_exact(table, top + beyond, Normalization::Raw) == table.plateau();
        ok = ok && hs_omega_density_exact(table, top + beyond) == 0;
      }
      r.checks.push_back(holds(std::string(label) + " exact plateau " + name, ok, "Omega(E >= E_max) == 1/(W-1)!"));
    }
  }
  for (int d = 2; d <= 5; ++d) {
    const BhIntegrandContext ctx(linear_spectrum(d, 1.0));
    const double top = bh_omega_integrated(ctx, static_cast<double>(d - 1));
    r.checks.push_back(below("bh plateau linear d=" + std::to_string(d), std::fabs(top - 1.0), 1e-8,
                             "|Omega(E_max) - 1| with raw plateau pi 2^{-d(d-1)}"));
  }
}

void qubit_suite(SuiteReport& r, const VerifyOptions&) {
  const double eps = 1.0;
  const auto qubit = linear_spectrum(2, eps);
  const BhIntegrandContext ctx(qubit);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double e = eps * i / 100.0;
    const double closed = bh_qubit_closed_form(eps, e);
    const double general = bh_omega_integrated(ctx, e) * bh_qubit_closed_form(eps, eps);
    const double err = closed == 0.0 ? std::fabs(general) : std::fabs(general / closed - 1.0);
    worst = std::max(worst, err);
  }
  r.checks.push_back(below("bh qubit closed form (101 points)", worst, 1e-8, "max relative error"));
  const double ratio = bh_omega_integrated(ctx, eps / 2) / bh_omega_integrated(ctx, eps);
  r.checks.push_back(below("bh qubit Omega(eps/2)/Omega(eps)", std::fabs(ratio - 0.5), 1e-9, "|ratio - 1/2|"));

  const auto table = hs_coefficients(linear_spectrum(2, Rational(1)));
  bool cubic = true;
  for (int i = 0; i <= 16; ++i) {
    const Rational x(i, 16);
    cubic = cubic && hs_omega_integrated_exact(table, x) == 3 * x * x - 2 * x * x * x;
  }
  r.checks.push_back(holds("hs qubit Omega = 3x^2 - 2x^3", cubic, "exact at 17 dyadic points"));

  double pure = 0.0;
  for (int i = 0; i <= 20; ++i) pure = std::max(pure, std::fabs(pure_omega_integrated(qubit, i / 20.0) - i / 20.0));
  r.checks.push_back(below("pure qubit Omega = E/eps", pure, 1e-14));

  for (auto ens : {Ensemble::HS, Ensemble::BH}) {
    const auto builder = dos_builder(ens);
    double err = 0.0;
    for (int i = 1; i <= 9; ++i) {
      const double e = i / 10.0;
      const auto p = average_state_populations(builder, qubit, e);
      err = std::max({err, std::fabs(p.levels[1].population - e / eps), std::fabs(p.levels[0].population - (1 - e / eps))});
    }
    r.checks.push_back(below(std::string(to_string(ens)) + " qubit populations (E/eps, 1 - E/eps)", err, 1e-6));
  }
}

std::vector<NamedSpectrum> ks_spectra() {
  std::vector<NamedSpectrum> out;
  for (int d = 2; d <= 5; ++d) out.push_back({"linear d=" + std::to_string(d), linear_spectrum(d, 1.0)});
  out.push_back({"spins N=2", noninteracting_spins(2, 1.0)});
  return out;
}

void mc_ks_suite(SuiteReport& r, const VerifyOptions& o) {
  // 0.005 at 10^6 draws; the same multiple of 1/sqrt(n) for other sample sizes.
  const double threshold = 0.005 * std::max(1.0, std::sqrt(1e6 / static_cast<double>(o.samples)));
  for (auto ens : {Ensemble::HS, Ensemble::BH, Ensemble::PureHaar}) {
    for (const auto& [name, s] : ks_spectra()) {
      McConfig cfg;
      cfg.ensemble = ens;
      cfg.samples = o.samples;
      cfg.seed = o.seed;
      cfg.threads = o.threads;
      auto energies = sample_energies(cfg, s);
      std::sort(energies.begin(), energies.end());
      const auto dos = make_dos(ens, s);
      const auto cdf = make_cdf_table(*dos);
      const double ks = ks_distance(energies, [&](double e) { return cdf(e); });
      r.checks.push_back(below(std::string(to_string(ens)) + " KS " + name, ks, threshold,
                               "n=" + std::to_string(o.samples)));
    }
  }
}

void stationarity_suite(SuiteReport& r, const VerifyOptions& o) {
  for (auto ens : {Ensemble::HS, Ensemble::BH, Ensemble::PureHaar}) {
    for (int d : {2, 4}) {
      const auto s = linear_spectrum(d, 1.0);
      McConfig cfg;
      cfg.ensemble = ens;
      cfg.seed = o.seed;
      cfg.threads = o.threads;
      cfg.shell_center = 0.5 * (s.ground() + s.top());
      cfg.target_accepted = o.shell_samples;
      cfg.samples = std::max<std::int64_t>(o.shell_samples * 2000, 1'000'000);
      const auto st = stationarity_check(cfg, s);
      r.checks.push_back(below(std::string(to_string(ens)) + " stationarity d=" + std::to_string(d), st.statistic, 3.0,
                               "||mean [rho,H]||_F / SE, accepted=" + std::to_string(st.accepted)));
    }
  }
}

void identity_suite(SuiteReport& r, const VerifyOptions&) {
  for (auto [ens, d] : {std::pair{Ensemble::BH, 3}, std::pair{Ensemble::HS, 4}}) {
    const auto s = linear_spectrum(d, 1.0);
    const auto builder = dos_builder(ens);
    const auto family = PerturbedSpectrumFamily::scale(s);
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double e = s.ground() + s.span() * i / 10.0;
      const auto x = observable_expectation(builder, family, e);
      const double rel = e == 0.0 ? std::fabs(x.value) / s.span() : std::fabs(x.value / e - 1.0);
      worst = std::max(worst, rel);
    }
    r.checks.push_back(below(std::string(to_string(ens)) + " <H>_E = E, linear d=" + std::to_string(d), worst, 1e-6,
                             "max relative error over 11 points"));
  }
}

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void asymptotics_suite(SuiteReport& r, const VerifyOptions&) {
  for (int n : {1, 2}) {
    const auto s = noninteracting_spins(n, 1.0);
    const auto dos = make_dos(Ensemble::BH, s);
    std::vector<double> x, y;
    for (int i = 0; i <= 8; ++i) {
      const double de = std::pow(10.0, -4.0 + 2.0 * i / 8.0);
      x.push_back(std::log(de));
      y.push_back(dos->log_integrated_raw(s.ground() + de));
    }
    const double expected = (std::pow(4.0, n) - 1.0) / 2.0;
    const double slope = fit_slope(x, y);
    r.checks.push_back(below("bh spins N=" + std::to_string(n) + " ln Omega slope", std::fabs(slope / expected - 1.0), 0.01,
                             "slope " + fmt("%.6g", slope) + " vs " + fmt("%.6g", expected)));
    const double de = 1e-3;
    const double t = temperature(*dos, s.ground() + de);
    const double heat = (de / n) / t;
    const double law = (std::pow(4.0, n) - 1.0) / (2.0 * n);
    r.checks.push_back(below("bh spins N=" + std::to_string(n) + " low-T energy slope", std::fabs(heat / law - 1.0), 0.02,
                             "dE/dT per spin " + fmt("%.6g", heat) + " vs " + fmt("%.6g", law)));
  }

  r.checks.push_back(holds("fluctuation limit at eps = -B/2 is 0", spin_relative_fluctuations(10, 1.0, -0.5).limit == 0.0));
  const std::vector<int> ns{5, 10, 20, 40};
  std::vector<double> exact;
  bool sign = true;
  for (int n : ns) {
    const auto f = spin_relative_fluctuations(n, 1.0, -0.4);
    exact.push_back(f.exact_n);
    sign = sign && (f.exact_n - f.limit > 0.0) == (f.first_order_correction > 0.0);
  }
  r.checks.push_back(holds("finite-N correction sign at eps = -0.4B", sign, "N = 5, 10, 20, 40"));
  r.checks.push_back(holds("finite-N values decrease toward the limit", exact[1] > exact[2] && exact[2] > exact[3],
                           "N = 10, 20, 40"));

  const auto sums = binomial_sqrt_sums(400);
  r.checks.push_back(below("binomial E[sqrt K] to O(1/N^2)", std::fabs(sums.mean_sqrt / sums.asymptotic_mean_sqrt - 1.0),
                           1e-5, "N = 400"));
  r.checks.push_back(below("binomial E[1/sqrt K] to O(1/N^2)",
                           std::fabs(sums.mean_inv_sqrt / sums.asymptotic_mean_inv_sqrt - 1.0), 1e-5, "N = 400"));
}

using SuiteFn = std::function<void(SuiteReport&, const VerifyOptions&)>;

const std::map<std::string, SuiteFn>& suites() {
  static const std::map<std::string, SuiteFn> table{
      {"plateau", plateau_suite},         {"qubit-closed-forms", qubit_suite}, {"mc-ks", mc_ks_suite},
      {"stationarity", stationarity_suite}, {"eq14-identity", identity_suite},    {"asymptotics", asymptotics_suite},
  };
  return table;
}

}  // namespace

bool SuiteReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"plateau",      "qubit-closed-forms", "mc-ks",
                                              "stationarity", "eq14-identity",      "asymptotics"};
  return names;
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& options) {
  const auto it = suites().find(name);
  if (it == suites().end()) fail(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
  SuiteReport report{name, {}};
  it->second(report, options);
  return report;
}

std::string report_to_json(const SuiteReport& report) {
  nlohmann::ordered_json j;
  j["suite"] = report.suite;
  j["passed"] = report.passed();
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold},
                      {"detail", c.detail}});
  j["checks"] = std::move(checks);
  return j.dump(1) + "\n";
}

std::string report_to_text(const SuiteReport& report) {
  std::string out;
  for (const auto& c : report.checks) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " value=%.4e threshold=%.4e", c.value, c.threshold);
    out += (c.passed ? "PASS " : "FAIL ") + c.name + buf + (c.detail.empty() ? "" : " (" + c.detail + ")") + "\n";
  }
  out += "suite " + report.suite + ": " + (report.passed() ? "PASS" : "FAIL") + "\n";
  return out;
}

}  // namespace rdm
