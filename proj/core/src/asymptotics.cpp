#include "rdm/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "rdm/error.hpp"

namespace rdm {

LowEnergyCoefficients low_energy_a0_a1(const Spectrum& spectrum) {
  if (spectrum.multiplicity(0) != 1)
    fail(ErrorCode::UnsupportedDegenerateGround, "low-energy expansion needs a non-degenerate ground level");
  const auto flat = spectrum.flattened();
  const double d = static_cast<double>(flat.size());
  std::vector<double> gap, root;
  for (std::size_t i = 1; i < flat.size(); ++i) {
    gap.push_back(flat[i] - flat[0]);
    root.push_back(std::sqrt(gap.back()));
  }
  const double q = (d * d - 1.0) / 2.0;
  // Pairs (ground, k) contribute 1/dE_k; the rest are over excited units.
  double log_a0 = -std::lgamma(q);
  double s = 0.0;
  for (std::size_t i = 0; i < gap.size(); ++i) {
    log_a0 -= 1.5 * std::log(gap[i]);
    s += 1.0 / root[i];
    for (std::size_t j = i + 1; j < gap.size(); ++j) log_a0 -= 2.0 * std::log(root[i] + root[j]);
  }
  LowEnergyCoefficients c;
  c.exponent = q;
  c.log_a0 = log_a0;
  c.a1_over_a0 = s * s / (2.0 * (d * d - 1.0));
  c.next_order_ratio = -3.0 * s * s / (2.0 * (d * d + 1.0));
  c.log_raw_factor = 0.5 * std::log(std::numbers::pi) + std::lgamma(q) + std::lgamma(d * d / 2.0) -
                     std::lgamma((d * d + 1.0) / 2.0);
  return c;
}

namespace {

void check_spins(int n) {
  if (n < 1) fail(ErrorCode::InvalidSize, "N must be at least 1");
}

}  // namespace

double spin_entropy_low_energy(int n, double b, double delta_e) {
  check_spins(n);
  if (!(b > 0.0)) fail(ErrorCode::InvalidArgument, "B must be positive");
  if (!(delta_e > 0.0)) fail(ErrorCode::Domain, "energy above the ground state must be positive");
  const BigFloat four_n = boost::multiprecision::pow(BigFloat(2), 2 * n);
  double s_inv = 0.0, pair_sum = 0.0;
  std::vector<double> nk(n + 1), root(n + 1);
  for (int k = 1; k <= n; ++k) {
    nk[k] = binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)).convert_to<double>();
    root[k] = std::sqrt(k * b);
    s_inv += nk[k] / root[k];
  }
  for (int nu = 1; nu <= n; ++nu)
    for (int mu = 1; mu <= n; ++mu) pair_sum += nk[nu] * nk[mu] * std::log(root[nu] + root[mu]);
  const double log_coeff = static_cast<double>((four_n - 1) / 2);
  const double linear = static_cast<double>(delta_e / (2 * four_n - 2)) * s_inv * s_inv;
  return log_coeff * std::log(delta_e) + linear - pair_sum;
}

LowTemperatureEnergy spin_energy_per_spin_lowT(int n, double b, double t) {
  check_spins(n);
  if (t < 0.0) fail(ErrorCode::Domain, "temperature must be nonnegative");
  const BigFloat slope = (boost::multiprecision::pow(BigFloat(2), 2 * n) - 1) / (2 * n);
  const double linear = static_cast<double>(slope * t);
  return {-b / 2.0 + linear, std::fabs(linear) <= std::fabs(b) / 10.0};
}

BinomialSqrtSums binomial_sqrt_sums(int n) {
  check_spins(n);
  BinomialSqrtSums out;
  out.sum_sqrt = 0;
  out.sum_inv_sqrt = 0;
  BigFloat c = 1;  // C(N, k)
  for (int k = 1; k <= n; ++k) {
    c = c * (n - k + 1) / k;
    const BigFloat r = boost::multiprecision::sqrt(BigFloat(k));
    out.sum_sqrt += c * r;
    out.sum_inv_sqrt += c / r;
  }
  const BigFloat two_n = boost::multiprecision::pow(BigFloat(2), n);
  out.mean_sqrt = static_cast<double>(out.sum_sqrt / two_n);
  out.mean_inv_sqrt = static_cast<double>(out.sum_inv_sqrt / two_n);
  // Delta method around mean N/2, variance N/4: E[K^a] = (N/2)^a (1 + a(a-1)/(2N) + O(N^-2)).
  out.asymptotic_mean_sqrt = std::sqrt(n / 2.0) * (1.0 - 1.0 / (8.0 * n));
  out.asymptotic_mean_inv_sqrt = std::sqrt(2.0 / n) * (1.0 + 3.0 / (8.0 * n));
  return out;
}

RelativeFluctuations spin_relative_fluctuations(int n, double b, double eps) {
  check_spins(n);
  if (!(b > 0.0)) fail(ErrorCode::InvalidArgument, "B must be positive");
  if (eps == 0.0) fail(ErrorCode::Domain, "energy per spin must be nonzero");
  RelativeFluctuations out;
  out.in_regime = eps > -b / 2.0 && eps < 0.0;

  const auto sums = binomial_sqrt_sums(n);
  const BigFloat B = b, e = eps, N = n;
  const BigFloat two_n = boost::multiprecision::pow(BigFloat(2), n);
  const BigFloat four_n = two_n * two_n;
  const BigFloat first = (B * B + two_n * (4 * B * e + 3 * B * B)) / (4 * (two_n + 1) * e * e) - 1;
  const BigFloat bracket = N * N / (4 * four_n - 4) * sums.sum_inv_sqrt * sums.sum_inv_sqrt -
                           sums.sum_sqrt * sums.sum_sqrt;
  const BigFloat second = B * (e + B / 2) / (N * (four_n - 1) * e * e) * bracket;
  out.exact_n = static_cast<double>(first + second);

  const BigFloat large = (B + 2 * e) * (two_n * B - e - two_n * e) / (2 * (1 + two_n) * e * e);
  out.large_n = static_cast<double>(large);
  out.limit = b * b / (2.0 * eps * eps) + b / (2.0 * eps) - 1.0;
  out.first_order_correction = b * (eps + b / 2.0) / (8.0 * n * eps * eps);
  return out;
}

}  // namespace rdm
