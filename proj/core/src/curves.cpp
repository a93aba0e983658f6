#include "rdm/curves.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <cmath>
#include <thread>

#include "rdm/error.hpp"

namespace rdm {

namespace {

// Fills out[i] = f(i); each index is written by exactly one worker so the
// result does not depend on the thread count.
template <class F>
void parallel_for(std::size_t n, int threads, F f) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
  };
  const auto t = static_cast<std::size_t>(std::max(1, threads));
  if (t <= 1 || n <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_lock;
  for (std::size_t k = 0; k < std::min(t, n); ++k)
    pool.emplace_back([&] {
      try {
        worker();
      } catch (...) {
        std::lock_guard lock(error_lock);
        if (!error) error = std::current_exception();
        next = n;
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

int parse_count(const std::string& s) {
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) fail(ErrorCode::Parse, "bad grid count '" + s + "'");
  return n;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) fail(ErrorCode::Parse, "bad grid bound '" + s + "'");
  return x;
}

struct RowContext {
  const ThermoRequest& request;
  Spectrum spectrum;
  DosBuilder builder;
  DosPtr dos;
};

void append_headers(ThermoCurve& curve, const RowContext& ctx) {
  for (auto c : ctx.request.columns) {
    switch (c) {
      case ThermoColumn::Energy:
        break;
      case ThermoColumn::Fluct:
        curve.columns.insert(curve.columns.end(), {"dE"});
        curve.units.insert(curve.units.end(), {"energy"});
        break;
      case ThermoColumn::Populations:
        for (std::size_t k = 0; k < ctx.spectrum.distinct(); ++k) {
          curve.columns.push_back("p" + std::to_string(k));
          curve.units.emplace_back();
        }
        break;
      case ThermoColumn::Magnetization:
        curve.columns.push_back("M");
        curve.units.emplace_back("hbar");
        break;
    }
  }
}

void append_values(std::vector<double>& row, std::string& note, const RowContext& ctx, double e) {
  const auto& opt = ctx.request.expectation;
  for (auto c : ctx.request.columns) {
    switch (c) {
      case ThermoColumn::Energy:
        break;
      case ThermoColumn::Fluct: {
        const auto f = energy_variance(ctx.builder, ctx.spectrum, e, opt);
        row.push_back(f.delta_e);
        if (!f.converged) note = "nonconverged";
        break;
      }
      case ThermoColumn::Populations: {
        const auto p = average_state_populations(ctx.builder, ctx.spectrum, e, opt);
        for (const auto& l : p.levels) row.push_back(l.population);
        if (!p.converged) note = "nonconverged";
        break;
      }
      case ThermoColumn::Magnetization: {
        const auto m = magnetization(ctx.builder, ctx.request.model, e, opt);
        row.push_back(m.value);
        if (!m.converged) note = "nonconverged";
        break;
      }
    }
  }
}

RowContext make_context(const ThermoRequest& request) {
  RowContext ctx{request, build_spectrum(request.model), dos_builder(request.ensemble, request.dos), nullptr};
  ctx.dos = ctx.builder(ctx.spectrum);
  for (auto c : request.columns)
    if (c == ThermoColumn::Magnetization && !std::holds_alternative<SpinChainModel>(request.model) &&
        !std::holds_alternative<CurieWeissModel>(request.model))
      fail(ErrorCode::InvalidArgument, "magnetization needs a spin model (spins or cw)");
  return ctx;
}

void finish_notes(ThermoCurve& curve) {
  for (const auto& n : curve.notes)
    if (!n.empty()) return;
  curve.notes.clear();
}

}  // namespace

std::vector<double> energy_grid(const Spectrum& spectrum, int points, double extend) {
  if (points < 2) fail(ErrorCode::InvalidArgument, "grid needs at least 2 points");
  if (!(extend >= 0.0)) fail(ErrorCode::InvalidArgument, "grid extension must be nonnegative");
  const double lo = spectrum.ground(), hi = spectrum.top() + extend * spectrum.span();
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  out.back() = hi;
  return out;
}

TemperatureGrid parse_temperature_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t pos; (pos = text.find(':', start)) != std::string::npos; start = pos + 1)
    parts.push_back(text.substr(start, pos - start));
  parts.push_back(text.substr(start));
  if (parts.size() != 4 || (parts[0] != "lin" && parts[0] != "log"))
    fail(ErrorCode::Parse, "temperature grid must be lin:a:b:n or log:a:b:n");
  const double a = parse_real(parts[1]), b = parse_real(parts[2]);
  const int n = parse_count(parts[3]);
  if (n < 2 || !(a < b) || a < 0.0) fail(ErrorCode::InvalidArgument, "temperature grid needs 0 <= a < b and n >= 2");
  const bool log = parts[0] == "log";
  if (log && a <= 0.0) fail(ErrorCode::InvalidArgument, "log temperature grid needs a > 0");
  TemperatureGrid g{text, {}};
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    g.values.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
  }
  g.values.front() = a;
  g.values.back() = b;
  return g;
}

ThermoCurve dos_curve(const DosFunction& dos, const std::vector<double>& energies, int threads) {
  ThermoCurve curve;
  curve.ensemble = dos.ensemble();
  curve.spectrum_hash = dos.spectrum().hash();
  curve.columns = {"E", "Omega", "omega", "S", "T"};
  curve.units = {"energy", "", "1/energy", "", "energy"};
  curve.rows.resize(energies.size());
  parallel_for(energies.size(), threads, [&](std::size_t i) {
    const double e = energies[i];
    curve.rows[i] = {e, dos.integrated(e), dos.density(e), entropy(dos, e), temperature(dos, e)};
  });
  return curve;
}

ThermoColumn parse_thermo_column(const std::string& name) {
  if (name == "energy") return ThermoColumn::Energy;
  if (name == "fluct") return ThermoColumn::Fluct;
  if (name == "populations") return ThermoColumn::Populations;
  if (name == "magnetization") return ThermoColumn::Magnetization;
  fail(ErrorCode::InvalidArgument, "unknown column '" + name + "' (energy, fluct, populations, magnetization)");
}

ThermoCurve thermo_curve_at_temperatures(const ThermoRequest& request, const TemperatureGrid& grid) {
  const auto ctx = make_context(request);
  ThermoCurve curve;
  curve.ensemble = request.ensemble;
  curve.spectrum_hash = ctx.spectrum.hash();
  curve.grid = grid.text;
  curve.columns = {"T", "E", "S"};
  curve.units = {"energy", "energy", ""};
  append_headers(curve, ctx);
  curve.rows.resize(grid.values.size());
  curve.notes.resize(grid.values.size());
  parallel_for(grid.values.size(), request.threads, [&](std::size_t i) {
    const double t = grid.values[i];
    const auto root = energy_at_temperature(*ctx.dos, t);
    std::vector<double> row{t, root.energy, entropy(*ctx.dos, root.energy)};
    std::string note = root.multiple_roots ? "multiple_roots" : "";
    append_values(row, note, ctx, root.energy);
    curve.rows[i] = std::move(row);
    curve.notes[i] = note;
  });
  finish_notes(curve);
  return curve;
}

ThermoCurve thermo_curve_at_energies(const ThermoRequest& request, const std::vector<double>& energies,
                                     const std::string& grid_text) {
  const auto ctx = make_context(request);
  ThermoCurve curve;
  curve.ensemble = request.ensemble;
  curve.spectrum_hash = ctx.spectrum.hash();
  curve.grid = grid_text;
  curve.columns = {"E", "S", "T"};
  curve.units = {"energy", "", "energy"};
  append_headers(curve, ctx);
  curve.rows.resize(energies.size());
  curve.notes.resize(energies.size());
  parallel_for(energies.size(), request.threads, [&](std::size_t i) {
    const double e = energies[i];
    std::vector<double> row{e, entropy(*ctx.dos, e), temperature(*ctx.dos, e)};
    std::string note;
    append_values(row, note, ctx, e);
    curve.rows[i] = std::move(row);
    curve.notes[i] = note;
  });
  finish_notes(curve);
  return curve;
}

}  // namespace rdm
