#include "rdm/dos.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "rdm/error.hpp"
#include "rdm/pure_dos.hpp"

namespace rdm {

std::string_view to_string(Ensemble ensemble) {
  switch (ensemble) {
    case Ensemble::HS: return "hs";
    case Ensemble::BH: return "bh";
    case Ensemble::PureHaar: return "pure";
  }
  return "?";
}

Ensemble parse_ensemble(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "hs") return Ensemble::HS;
  if (lower == "bh") return Ensemble::BH;
  if (lower == "pure" || lower == "haar") return Ensemble::PureHaar;
  fail(ErrorCode::InvalidArgument, "unknown ensemble '" + std::string(name) + "' (expected hs, bh or pure)");
}

double DosFunction::integrated(double energy, Normalization norm) const {
  const double l = log_integrated_raw(energy);
  return std::exp(norm == Normalization::Plateau ? l - log_plateau() : l);
}

double DosFunction::density(double energy, Normalization norm) const {
  const double l = log_density_raw(energy);
  return std::exp(norm == Normalization::Plateau ? l - log_plateau() : l);
}

namespace {

class ResidueDos final : public DosFunction {
 public:
  ResidueDos(Ensemble ensemble, const Spectrum& spectrum, HsCoefficientTable table)
      : DosFunction(spectrum), ensemble_(ensemble), table_(std::move(table)) {}

  Ensemble ensemble() const noexcept override { return ensemble_; }
  double log_integrated_raw(double energy) const override { return hs_log_omega_integrated(table_, energy); }
  double log_density_raw(double energy) const override { return hs_log_omega_density(table_, energy); }
  double log_plateau() const noexcept override { return table_.log_plateau(); }
  double log_complement_raw(double energy) const override { return hs_log_omega_complement(table_, energy); }

 private:
  Ensemble ensemble_;
  HsCoefficientTable table_;
};

class BuresDos final : public DosFunction {
 public:
  BuresDos(const Spectrum& spectrum, const BhOptions& options)
      : DosFunction(spectrum), ctx_(spectrum, options), mirror_(reflected(ctx_)) {}

  Ensemble ensemble() const noexcept override { return Ensemble::BH; }
  double log_integrated_raw(double energy) const override { return bh_log_omega_integrated(ctx_, energy); }
  double log_density_raw(double energy) const override { return bh_log_omega_density(ctx_, energy); }
  double log_plateau() const noexcept override { return ctx_.log_plateau(); }
  double log_complement_raw(double energy) const override { return bh_log_omega_integrated(mirror_, -energy); }

 private:
  BhIntegrandContext ctx_;
  BhIntegrandContext mirror_;
};

}  // namespace

DosPtr make_dos(Ensemble ensemble, const Spectrum& spectrum, const DosOptions& options) {
  switch (ensemble) {
    case Ensemble::HS:
      return std::make_shared<ResidueDos>(ensemble, spectrum, hs_coefficients(spectrum, options.arithmetic));
    case Ensemble::PureHaar:
      return std::make_shared<ResidueDos>(ensemble, spectrum, pure_table(spectrum, options.arithmetic));
    case Ensemble::BH:
      return std::make_shared<BuresDos>(spectrum, options.bh);
  }
  fail(ErrorCode::InvalidArgument, "unknown ensemble");
}

DosBuilder dos_builder(Ensemble ensemble, DosOptions options) {
  return [ensemble, options](const Spectrum& spectrum) { return make_dos(ensemble, spectrum, options); };
}

}  // namespace rdm
