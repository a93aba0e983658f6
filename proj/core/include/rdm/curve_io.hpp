#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdm/sampling.hpp"
#include "rdm/thermo.hpp"

namespace rdm {

/// Everything needed to regenerate an output file.
struct Provenance {
  std::string command;
  std::optional<std::uint64_t> seed;
  /// Flag name and value as given (after config-file merging), in order.
  std::vector<std::pair<std::string, std::string>> flags;
};

enum class CurveFormat { Csv, Json };

/// Json for a ".json" suffix, Csv otherwise (including "-").
CurveFormat format_for_path(const std::string& path);

/// First line "# {provenance json}", then the header row "name [unit],...",
/// then one row per record. Non-finite values print as inf, -inf, nan.
std::string curve_to_csv(const ThermoCurve& curve, const Provenance& provenance);
/// {"provenance": {...}, "columns": [...], "units": [...], "rows": [[...]]};
/// non-finite values become the strings "inf", "-inf", "nan".
std::string curve_to_json(const ThermoCurve& curve, const Provenance& provenance);
std::string format_curve(const ThermoCurve& curve, const Provenance& provenance, CurveFormat format);

/// Reads back curve_to_csv output (provenance line is skipped).
ThermoCurve parse_curve_csv(const std::string& text);

/// Histogram as a curve: E, density, density_error, count.
ThermoCurve histogram_curve(const Histogram& histogram, Ensemble ensemble, const Spectrum& spectrum);

/// "-" writes to stdout.
void write_output(const std::string& path, const std::string& content);

}  // namespace rdm
