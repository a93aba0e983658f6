#include "rdm/stats.hpp"

#include <algorithm>
#include <cmath>

#include "rdm/error.hpp"

namespace rdm {

WilsonInterval wilson_interval(std::int64_t k, std::int64_t n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

CdfTable::CdfTable(std::vector<double> x, std::vector<double> cdf, std::vector<double> pdf)
    : x_(std::move(x)), f_(std::move(cdf)), df_(std::move(pdf)) {
  if (x_.size() < 2 || f_.size() != x_.size() || df_.size() != x_.size())
    fail(ErrorCode::InvalidArgument, "cdf table needs matching node arrays of length >= 2");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i - 1] < x_[i])) fail(ErrorCode::InvalidArgument, "cdf nodes must be increasing");
}

double CdfTable::operator()(double e) const {
  if (e <= x_.front()) return f_.front();
  if (e >= x_.back()) return f_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), e);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (e - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * f_[i] + h10 * h * df_[i] + h01 * f_[i + 1] + h11 * h * df_[i + 1];
}

CdfTable make_cdf_table(const DosFunction& dos, int per_segment) {
  if (per_segment < 1) fail(ErrorCode::InvalidArgument, "per_segment must be positive");
  const auto levels = dos.spectrum().levels();
  std::vector<double> x, f, df;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    for (int j = 0; j < per_segment; ++j) x.push_back(levels[k] + (levels[k + 1] - levels[k]) * j / per_segment);
  }
  x.push_back(levels.back());
  for (double e : x) {
    f.push_back(dos.integrated(e));
    df.push_back(dos.density(e));
  }
  return CdfTable(std::move(x), std::move(f), std::move(df));
}

double ks_distance(const std::vector<double>& sorted, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted.size());
  if (sorted.empty()) fail(ErrorCode::EmptyHistogram, "no samples");
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double F = cdf(sorted[i]);
    d = std::max({d, std::fabs(F - static_cast<double>(i) / n), std::fabs(static_cast<double>(i + 1) / n - F)});
  }
  return d;
}

}  // namespace rdm
