#include <doctest.h>

#include <cmath>

#include "rdm/asymptotics.hpp"
#include "rdm/bh_dos.hpp"
#include "rdm/error.hpp"

using namespace rdm;

TEST_CASE("qubit low-energy coefficients") {
  const auto c = low_energy_a0_a1(linear_spectrum(2, 1.0));
  CHECK(c.exponent == doctest::Approx(1.5));
  CHECK(c.a1_over_a0 == doctest::Approx(1.0 / 6));
  CHECK(c.next_order_ratio == doctest::Approx(-0.3));
}

TEST_CASE("low-energy law matches the volume with the raw factor") {
  for (int d : {2, 3, 4}) {
    const auto s = Spectrum::from_levels([&] {
      std::vector<double> v;
      for (int k = 0; k < d; ++k) v.push_back(k + 0.3 * k * k);
      return v;
    }());
    const auto c = low_energy_a0_a1(s);
    const BhIntegrandContext ctx(s);
    const double de = 1e-4;
    const double law = c.log_raw_factor + c.log_a0 + c.exponent * std::log(de) + std::log1p(c.next_order_ratio * de);
    CHECK(bh_log_omega_integrated(ctx, de) == doctest::Approx(law).epsilon(1e-7));
  }
}

TEST_CASE("degenerate ground is refused") {
  CHECK_THROWS_AS(low_energy_a0_a1(Spectrum::from_levels({0.0, 1.0}, {2, 1})), Error);
}

TEST_CASE("low-temperature energy per spin") {
  const auto e = spin_energy_per_spin_lowT(1, 1.0, 0.01);
  CHECK(e.value == doctest::Approx(-0.485));
  CHECK(e.valid);
  CHECK_FALSE(spin_energy_per_spin_lowT(2, 1.0, 1.0).valid);
}

TEST_CASE("relative fluctuations: limit and frozen finite-N values") {
  CHECK(spin_relative_fluctuations(7, 1.0, -0.5).limit == 0.0);
  const auto f = spin_relative_fluctuations(10, 1.0, -0.4);
  CHECK(f.limit == doctest::Approx(0.875));
  CHECK(f.exact_n == doctest::Approx(0.883181).epsilon(1e-5));
  CHECK(spin_relative_fluctuations(40, 1.0, -0.4).exact_n == doctest::Approx(0.876998).epsilon(1e-5));
  CHECK(f.first_order_correction > 0.0);
  CHECK(f.in_regime);
}

TEST_CASE("binomial square-root sums") {
  const auto s = binomial_sqrt_sums(2);
  CHECK(static_cast<double>(s.sum_sqrt) == doctest::Approx(2 + std::sqrt(2.0)));
  CHECK(static_cast<double>(s.sum_inv_sqrt) == doctest::Approx(2 + 1 / std::sqrt(2.0)));
  const auto big = binomial_sqrt_sums(1000);
  // Both expansions are good to O(1/N^2): relative error ~1e-6 at N = 1000.
  CHECK(big.mean_inv_sqrt == doctest::Approx(big.asymptotic_mean_inv_sqrt).epsilon(5e-6));
  CHECK(big.mean_sqrt == doctest::Approx(big.asymptotic_mean_sqrt).epsilon(5e-6));
}

TEST_CASE("free-spin low-energy entropy grows as (4^N - 1)/2 ln dE") {
  const double a = spin_entropy_low_energy(2, 1.0, 1e-3), b = spin_entropy_low_energy(2, 1.0, 1e-4);
  CHECK((a - b) / std::log(10.0) == doctest::Approx(7.5).epsilon(1e-3));
}
