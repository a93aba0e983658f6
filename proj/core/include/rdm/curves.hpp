#pragma once

#include <string>
#include <vector>

#include "rdm/dos.hpp"
#include "rdm/thermo.hpp"

namespace rdm {

/// `points` equally spaced energies from E_0 to E_max + extend * span.
std::vector<double> energy_grid(const Spectrum& spectrum, int points, double extend = 0.0);

/// "lin:a:b:n" or "log:a:b:n" (n >= 2, 0 < a < b for log).
struct TemperatureGrid {
  std::string text;
  std::vector<double> values;
};
TemperatureGrid parse_temperature_grid(const std::string& text);

/// Columns E, Omega, omega, S, T (Plateau-normalized).
ThermoCurve dos_curve(const DosFunction& dos, const std::vector<double>& energies, int threads = 1);

/// Observable columns selectable for thermo curves.
enum class ThermoColumn { Energy, Fluct, Populations, Magnetization };
ThermoColumn parse_thermo_column(const std::string& name);

struct ThermoRequest {
  Ensemble ensemble = Ensemble::HS;
  ModelSpec model;
  DosOptions dos;
  std::vector<ThermoColumn> columns;
  ExpectationOptions expectation;
  int threads = 1;
};

/// Rows over a temperature grid: T, E(T), S, then the requested columns at E(T).
ThermoCurve thermo_curve_at_temperatures(const ThermoRequest& request, const TemperatureGrid& grid);
/// Rows over an energy grid: E, S, T, then the requested columns.
ThermoCurve thermo_curve_at_energies(const ThermoRequest& request, const std::vector<double>& energies,
                                     const std::string& grid_text);

}  // namespace rdm
