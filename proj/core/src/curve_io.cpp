#include "rdm/curve_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "rdm/error.hpp"

namespace rdm {

namespace {

using nlohmann::ordered_json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

ordered_json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail(ErrorCode::Parse, "bad number '" + s + "'");
  return v;
}

ordered_json provenance_json(const ThermoCurve& curve, const Provenance& p) {
  ordered_json j;
  j["command"] = p.command;
  j["version"] = RDM_VERSION;
  j["ensemble"] = std::string(to_string(curve.ensemble));
  j["spectrum_hash"] = curve.spectrum_hash;
  j["grid"] = curve.grid;
  if (p.seed) j["seed"] = *p.seed;
  ordered_json flags = ordered_json::object();
  for (const auto& [k, v] : p.flags) flags[k] = v;
  j["flags"] = flags;
  return j;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CurveFormat format_for_path(const std::string& path) {
  const std::string suffix = ".json";
  if (path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return CurveFormat::Json;
  return CurveFormat::Csv;
}

std::string curve_to_csv(const ThermoCurve& curve, const Provenance& provenance) {
  std::string out = "# " + provenance_json(curve, provenance).dump() + "\n";
  const bool notes = !curve.notes.empty();
  for (std::size_t c = 0; c < curve.columns.size(); ++c) {
    if (c) out += ',';
    out += curve.columns[c];
    if (c < curve.units.size() && !curve.units[c].empty()) out += " [" + curve.units[c] + "]";
  }
  if (notes) out += ",note";
  out += '\n';
  for (std::size_t r = 0; r < curve.rows.size(); ++r) {
    for (std::size_t c = 0; c < curve.rows[r].size(); ++c) {
      if (c) out += ',';
      out += format_number(curve.rows[r][c]);
    }
    if (notes) out += "," + (r < curve.notes.size() ? curve.notes[r] : std::string());
    out += '\n';
  }
  return out;
}

std::string curve_to_json(const ThermoCurve& curve, const Provenance& provenance) {
  ordered_json j;
  j["provenance"] = provenance_json(curve, provenance);
  j["columns"] = curve.columns;
  j["units"] = curve.units;
  ordered_json rows = ordered_json::array();
  for (const auto& row : curve.rows) {
    ordered_json r = ordered_json::array();
    for (double x : row) r.push_back(number_json(x));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  if (!curve.notes.empty()) j["notes"] = curve.notes;
  return j.dump(1) + "\n";
}

std::string format_curve(const ThermoCurve& curve, const Provenance& provenance, CurveFormat format) {
  return format == CurveFormat::Json ? curve_to_json(curve, provenance) : curve_to_csv(curve, provenance);
}

ThermoCurve parse_curve_csv(const std::string& text) {
  ThermoCurve curve;
  std::istringstream in(text);
  std::string line;
  bool header = false, has_note = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto j = ordered_json::parse(line.substr(1), nullptr, false);
      if (j.is_discarded()) fail(ErrorCode::Parse, "bad provenance line");
      curve.ensemble = parse_ensemble(j.value("ensemble", "hs"));
      curve.spectrum_hash = j.value("spectrum_hash", "");
      curve.grid = j.value("grid", "");
      continue;
    }
    auto cells = split_csv(line);
    if (!header) {
      header = true;
      if (!cells.empty() && cells.back() == "note") {
        has_note = true;
        cells.pop_back();
      }
      for (const auto& cell : cells) {
        const auto open = cell.find(" [");
        if (open != std::string::npos && cell.back() == ']') {
          curve.columns.push_back(cell.substr(0, open));
          curve.units.push_back(cell.substr(open + 2, cell.size() - open - 3));
        } else {
          curve.columns.push_back(cell);
          curve.units.emplace_back();
        }
      }
      continue;
    }
    if (has_note) {
      curve.notes.push_back(cells.empty() ? std::string() : cells.back());
      if (!cells.empty()) cells.pop_back();
    }
    if (cells.size() != curve.columns.size()) fail(ErrorCode::Parse, "row width does not match header");
    std::vector<double> row;
    for (const auto& cell : cells) row.push_back(parse_number(cell));
    curve.rows.push_back(std::move(row));
  }
  if (!header) fail(ErrorCode::Parse, "missing header row");
  return curve;
}

ThermoCurve histogram_curve(const Histogram& h, Ensemble ensemble, const Spectrum& spectrum) {
  ThermoCurve curve;
  curve.ensemble = ensemble;
  curve.spectrum_hash = spectrum.hash();
  curve.grid = "bins:" + std::to_string(h.counts.size());
  curve.columns = {"E", "density", "density_error", "count"};
  curve.units = {"energy", "1/energy", "1/energy", ""};
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    curve.rows.push_back({h.bin_center(i), h.density[i], h.density_error[i], static_cast<double>(h.counts[i])});
  return curve;
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

}  // namespace rdm
