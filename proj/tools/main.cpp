#include <algorithm>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "rdm/curve_io.hpp"
#include "rdm/curves.hpp"
#include "rdm/error.hpp"
#include "rdm/sampling.hpp"
#include "rdm/verify.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitVerify = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelFlags {
  std::string model = "linear";
  std::vector<int> d;
  std::string eps = "1";
  int n = 1;
  std::string b = "1";
  std::string j = "0";
  std::string file;
};

struct CommonFlags {
  std::string ensemble;
  std::string output = "-";
  int threads = 0;
  std::string arithmetic = "exact";
  std::string bh_method = "auto";
};

void add_model_flags(CLI::App* app, ModelFlags& m) {
  app->add_option("--model", m.model, "linear | spins | cw | custom")
      ->check(CLI::IsMember({"linear", "spins", "cw", "custom"}));
  app->add_option("--d", m.d, "Dimension(s) of the linear model, comma separated (default 3,4,5,6)")
      ->delimiter(',')
      ->check(CLI::Range(2, 4096));
  app->add_option("--eps", m.eps, "Level spacing of the linear model (exact: 1, 0.5, 1/3)");
  app->add_option("--n", m.n, "Number of spins")->check(CLI::Range(1, 62));
  app->add_option("--b", m.b, "Field B");
  app->add_option("--j", m.j, "Curie-Weiss coupling J");
  app->add_option("--file", m.file, "Spectrum JSON for --model custom");
}

void add_common_flags(CLI::App* app, CommonFlags& c) {
  app->add_option("--ensemble", c.ensemble, "hs | bh | pure")
      ->required()
      ->check(CLI::IsMember({"hs", "bh", "pure", "haar"}, CLI::ignore_case));
  app->add_option("--output", c.output, "Output path; .json selects JSON, '-' is stdout");
  app->add_option("--threads", c.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  app->add_option("--arithmetic", c.arithmetic, "Residue tables: exact | float")
      ->check(CLI::IsMember({"exact", "float"}));
  app->add_option("--bh-method", c.bh_method, "auto | cut | contour")->check(CLI::IsMember({"auto", "cut", "contour"}));
}

void forbid(const CLI::App* app, const std::string& flag, const std::string& model) {
  if (app->count(flag) > 0) throw UsageError(flag + " does not apply to --model " + model);
}

std::vector<rdm::ModelSpec> build_models(const CLI::App* app, const ModelFlags& m) {
  using namespace rdm;
  std::vector<ModelSpec> out;
  if (m.model == "linear") {
    for (auto f : {"--n", "--b", "--j", "--file"}) forbid(app, f, m.model);
    const auto ds = m.d.empty() ? std::vector<int>{3, 4, 5, 6} : m.d;
    for (int d : ds) out.push_back(LinearModel{d, parse_rational(m.eps)});
  } else if (m.model == "spins") {
    for (auto f : {"--d", "--eps", "--j", "--file"}) forbid(app, f, m.model);
    out.push_back(SpinChainModel{m.n, parse_rational(m.b)});
  } else if (m.model == "cw") {
    for (auto f : {"--d", "--eps", "--file"}) forbid(app, f, m.model);
    out.push_back(CurieWeissModel{m.n, parse_rational(m.b), parse_rational(m.j)});
  } else {
    for (auto f : {"--d", "--eps", "--n", "--b", "--j"}) forbid(app, f, m.model);
    if (m.file.empty()) throw UsageError("--model custom needs --file");
    const auto s = load_spectrum_json(m.file);
    CustomModel c;
    c.levels.assign(s.exact_levels().begin(), s.exact_levels().end());
    c.multiplicities.assign(s.multiplicities().begin(), s.multiplicities().end());
    out.push_back(std::move(c));
  }
  return out;
}

int resolve_threads(int t) {
  if (t > 0) return t;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

rdm::DosOptions dos_options(const CommonFlags& c) {
  rdm::DosOptions o;
  o.arithmetic = c.arithmetic == "float" ? rdm::Arithmetic::Float : rdm::Arithmetic::Exact;
  o.bh.method = c.bh_method == "cut" ? rdm::BhMethod::Cut
                : c.bh_method == "contour" ? rdm::BhMethod::Contour
                                           : rdm::BhMethod::Auto;
  return o;
}

// Flags as the user set them (command line or config), for provenance.
std::vector<std::pair<std::string, std::string>> collect_flags(const CLI::App* app) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto* opt : app->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help" || opt->get_name() == "--config") continue;
    std::string joined;
    for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
    out.emplace_back(opt->get_name(), joined);
  }
  return out;
}

// Several model instances stack into one table with a leading d column.
rdm::ThermoCurve stack(std::vector<rdm::ThermoCurve> curves, const std::vector<rdm::ModelSpec>& models) {
  if (curves.size() == 1) return std::move(curves.front());
  rdm::ThermoCurve out = curves.front();
  out.columns.insert(out.columns.begin(), "d");
  out.units.insert(out.units.begin(), "");
  out.rows.clear();
  out.notes.clear();
  out.spectrum_hash.clear();
  bool notes = false;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double d = std::get<rdm::LinearModel>(models[i]).d;
    out.spectrum_hash += (i ? "," : "") + curves[i].spectrum_hash;
    for (std::size_t r = 0; r < curves[i].rows.size(); ++r) {
      auto row = curves[i].rows[r];
      row.insert(row.begin(), d);
      out.rows.push_back(std::move(row));
      out.notes.push_back(curves[i].notes.empty() ? "" : curves[i].notes[r]);
      notes = notes || !curves[i].notes.empty();
    }
  }
  if (!notes) out.notes.clear();
  return out;
}

void emit(const rdm::ThermoCurve& curve, const CLI::App* app, const CommonFlags& c, std::optional<std::uint64_t> seed,
          const CLI::Option* config) {
  rdm::Provenance p{app->get_name(), seed, collect_flags(app)};
  if (config->count() > 0) p.flags.emplace_back("--config", config->as<std::string>());
  rdm::write_output(c.output, rdm::format_curve(curve, p, rdm::format_for_path(c.output)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermodynamics of energy-constrained random density matrices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(RDM_VERSION));
  // Config keys are the flag names, grouped under a [dos], [thermo], [sample] or [verify] table.
  auto* config = app.set_config("--config", "", "TOML file with the same keys as the flags");
  app.fallthrough();

  ModelFlags dm, tm, sm;
  CommonFlags dc, tc, sc;

  auto* dos = app.add_subcommand("dos", "Omega, omega, S and T on an energy grid");
  add_model_flags(dos, dm);
  add_common_flags(dos, dc);
  int grid = 201;
  double extend = 0.0;
  dos->add_option("--grid", grid, "Number of energies from E_0 to E_max")->check(CLI::Range(2, 1000000));
  dos->add_option("--extend", extend, "Extend the grid past E_max by this fraction of the span")
      ->check(CLI::NonNegativeNumber);

  auto* thermo = app.add_subcommand("thermo", "Thermodynamic curves over a temperature or energy grid");
  add_model_flags(thermo, tm);
  add_common_flags(thermo, tc);
  std::string tgrid;
  int egrid = 0;
  std::vector<std::string> cols{"energy"};
  thermo->add_option("--tgrid", tgrid, "lin:a:b:n or log:a:b:n temperatures");
  auto* egrid_opt = thermo->add_option("--grid", egrid, "Number of energies from E_0 to E_max")->check(CLI::Range(2, 1000000));
  thermo->add_option("--cols", cols, "energy, fluct, populations, magnetization")->delimiter(',');
  thermo->get_option("--tgrid")->excludes(egrid_opt);

  auto* sample = app.add_subcommand("sample", "Monte Carlo histogram of tr(H rho)");
  add_model_flags(sample, sm);
  add_common_flags(sample, sc);
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  int bins = 100;
  sample->add_option("--samples", samples, "Number of draws")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "Seed");
  sample->add_option("--bins", bins, "Histogram bins")->check(CLI::Range(10, 1000000));

  auto* verify = app.add_subcommand("verify", "Run an invariant suite");
  std::string suite;
  std::string format = "text";
  rdm::VerifyOptions vo;
  verify->add_option("--suite", suite, "plateau, qubit-closed-forms, mc-ks, stationarity, eq14-identity, asymptotics, all")
      ->required();
  verify->add_option("--seed", vo.seed, "Seed");
  verify->add_option("--samples", vo.samples, "Draws per KS comparison")->check(CLI::PositiveNumber);
  verify->add_option("--shell-samples", vo.shell_samples, "Accepted shell samples per stationarity check")
      ->check(CLI::PositiveNumber);
  verify->add_option("--threads", vo.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  verify->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (dos->parsed()) {
      const auto models = build_models(dos, dm);
      const auto ens = rdm::parse_ensemble(dc.ensemble);
      std::vector<rdm::ThermoCurve> curves;
      for (const auto& m : models) {
        const auto s = rdm::build_spectrum(m);
        const auto f = rdm::make_dos(ens, s, dos_options(dc));
        auto curve = rdm::dos_curve(*f, rdm::energy_grid(s, grid, extend), resolve_threads(dc.threads));
        curve.grid = "E:" + std::to_string(grid) + (extend > 0 ? ":extend=" + std::to_string(extend) : "");
        curves.push_back(std::move(curve));
      }
      emit(stack(std::move(curves), models), dos, dc, std::nullopt, config);
    } else if (thermo->parsed()) {
      const auto models = build_models(thermo, tm);
      rdm::ThermoRequest req;
      req.ensemble = rdm::parse_ensemble(tc.ensemble);
      req.dos = dos_options(tc);
      req.threads = resolve_threads(tc.threads);
      for (const auto& c : cols) req.columns.push_back(rdm::parse_thermo_column(c));
      std::vector<rdm::ThermoCurve> curves;
      for (const auto& m : models) {
        req.model = m;
        if (!tgrid.empty()) {
          curves.push_back(rdm::thermo_curve_at_temperatures(req, rdm::parse_temperature_grid(tgrid)));
        } else {
          const int points = egrid > 0 ? egrid : 101;
          const auto s = rdm::build_spectrum(m);
          curves.push_back(rdm::thermo_curve_at_energies(req, rdm::energy_grid(s, points), "E:" + std::to_string(points)));
        }
      }
      emit(stack(std::move(curves), models), thermo, tc, std::nullopt, config);
    } else if (sample->parsed()) {
      const auto models = build_models(sample, sm);
      if (models.size() != 1) throw UsageError("sample takes a single --d");
      const auto s = rdm::build_spectrum(models.front());
      rdm::McConfig cfg;
      cfg.ensemble = rdm::parse_ensemble(sc.ensemble);
      cfg.samples = samples;
      cfg.seed = seed;
      cfg.bins = bins;
      cfg.threads = sc.threads;
      const auto h = rdm::estimate_dos_mc(cfg, s);
      emit(rdm::histogram_curve(h, cfg.ensemble, s), sample, sc, seed, config);
    } else if (verify->parsed()) {
      std::vector<std::string> names;
      if (suite == "all") {
        names = rdm::suite_names();
      } else if (std::find(rdm::suite_names().begin(), rdm::suite_names().end(), suite) != rdm::suite_names().end()) {
        names = {suite};
      } else {
        throw UsageError("unknown suite '" + suite + "'");
      }
      bool ok = true;
      for (const auto& name : names) {
        const auto report = rdm::run_suite(name, vo);
        std::cout << (format == "json" ? rdm::report_to_json(report) : rdm::report_to_text(report)) << std::flush;
        ok = ok && report.passed();
      }
      return ok ? 0 : kExitVerify;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rdm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return 0;
}
