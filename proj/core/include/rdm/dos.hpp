#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "rdm/bh_dos.hpp"
#include "rdm/hs_dos.hpp"
#include "rdm/spectrum.hpp"

namespace rdm {

enum class Ensemble { HS, BH, PureHaar };

std::string_view to_string(Ensemble ensemble);
/// Accepts "hs", "bh", "pure" (case-insensitive).
Ensemble parse_ensemble(std::string_view name);

/// Omega and omega of one ensemble over one spectrum.
///
/// Raw values carry the ensemble's fixed, spectrum-independent constants, so
/// differences of log_integrated_raw between nearby spectra are meaningful.
/// Plateau values are Raw divided by the raw plateau.
class DosFunction {
 public:
  virtual ~DosFunction() = default;

  virtual Ensemble ensemble() const noexcept = 0;
  virtual double log_integrated_raw(double energy) const = 0;
  virtual double log_density_raw(double energy) const = 0;
  virtual double log_plateau() const noexcept = 0;
  /// ln(raw plateau - raw Omega(E)); stays accurate where Omega is close to
  /// the plateau and ln Omega has no resolution left.
  virtual double log_complement_raw(double energy) const = 0;

  const Spectrum& spectrum() const noexcept { return spectrum_; }
  double integrated(double energy, Normalization norm = Normalization::Plateau) const;
  double density(double energy, Normalization norm = Normalization::Plateau) const;

 protected:
  explicit DosFunction(Spectrum spectrum) : spectrum_(std::move(spectrum)) {}

 private:
  Spectrum spectrum_;
};

struct DosOptions {
  /// HS and pure residue tables.
  Arithmetic arithmetic = Arithmetic::Exact;
  BhOptions bh;
};

using DosPtr = std::shared_ptr<const DosFunction>;
/// Pure factory Spectrum -> DosFunction, used to rebuild perturbed spectra.
using DosBuilder = std::function<DosPtr(const Spectrum&)>;

DosPtr make_dos(Ensemble ensemble, const Spectrum& spectrum, const DosOptions& options = {});
DosBuilder dos_builder(Ensemble ensemble, DosOptions options = {});

}  // namespace rdm
