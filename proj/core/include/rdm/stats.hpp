#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rdm/dos.hpp"

namespace rdm {

struct WilsonInterval {
  double lower;
  double upper;
};

/// Wilson score interval for k successes in n trials at z standard deviations.
WilsonInterval wilson_interval(std::int64_t k, std::int64_t n, double z = 1.0);

/// Piecewise cubic Hermite interpolant of a CDF from values and slopes at
/// nodes; constant outside the node range.
class CdfTable {
 public:
  CdfTable(std::vector<double> x, std::vector<double> cdf, std::vector<double> pdf);
  double operator()(double e) const;
  const std::vector<double>& nodes() const noexcept { return x_; }

 private:
  std::vector<double> x_, f_, df_;
};

/// Plateau-normalized Omega and omega of `dos` on a grid that includes every
/// level; `per_segment` nodes between neighbouring levels.
CdfTable make_cdf_table(const DosFunction& dos, int per_segment = 512);

/// sup |F_n - F| for samples sorted ascending.
double ks_distance(const std::vector<double>& sorted, const std::function<double(double)>& cdf);

}  // namespace rdm
