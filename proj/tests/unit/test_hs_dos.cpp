#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "rdm/error.hpp"
#include "rdm/hs_dos.hpp"
#include "rdm/pure_dos.hpp"

using namespace rdm;

TEST_CASE("qubit volume is the cubic 3x^2 - 2x^3") {
  const auto t = hs_coefficients(linear_spectrum(2, Rational(1)));
  CHECK(t.total_weight() == 4);
  CHECK(t.plateau() == Rational(1, 6));
  for (int i = 0; i <= 8; ++i) {
    const Rational x(i, 8);
    CHECK(hs_omega_integrated_exact(t, x) == 3 * x * x - 2 * x * x * x);
    CHECK(hs_omega_density_exact(t, x) == 6 * x - 6 * x * x);
  }
}

TEST_CASE("three-level oracle Omega(1/2) = 13/512") {
  // Dirichlet(3,3,3) probability of p1 + 2 p2 <= 1/2, integrated symbolically.
  const auto t = hs_coefficients(linear_spectrum(3, Rational(1)));
  CHECK(hs_omega_integrated_exact(t, Rational(1, 2)) == Rational(13, 512));
  CHECK(hs_omega_integrated(t, 0.5) == doctest::Approx(13.0 / 512).epsilon(1e-14));
}

TEST_CASE("symmetric spectra sit at one half in the middle") {
  for (int d = 2; d <= 6; ++d) {
    const auto t = hs_coefficients(linear_spectrum(d, Rational(1)));
    CHECK(hs_omega_integrated_exact(t, Rational(d - 1, 2)) == Rational(1, 2));
  }
  const auto spins = hs_coefficients(noninteracting_spins(3, Rational(1)));
  CHECK(hs_omega_integrated_exact(spins, Rational(0)) == Rational(1, 2));
}

TEST_CASE("plateau is exact and density vanishes beyond E_max") {
  const auto t = hs_coefficients(noninteracting_spins(2, Rational(1)));
  CHECK(t.plateau() == Rational(1) / Rational(factorial(15)));
  for (int k : {0, 1, 7, 100})
    CHECK(hs_omega_integrated_exact(t, Rational(1) + Rational(k, 3), Normalization::Raw) == t.plateau());
  CHECK(hs_omega_density_exact(t, Rational(3, 2)) == 0);
  CHECK(hs_omega_integrated_exact(t, Rational(-2)) == 0);
}

TEST_CASE("float tables agree with exact ones where long double suffices") {
  const auto s = linear_spectrum(4, Rational(1));
  const auto e = hs_coefficients(s, Arithmetic::Exact);
  const auto f = hs_coefficients(s, Arithmetic::Float);
  for (double x : {0.3, 1.2, 1.7, 2.5, 2.9})
    CHECK(hs_omega_integrated(f, x) == doctest::Approx(hs_omega_integrated(e, x)).epsilon(1e-9));
}

TEST_CASE("float tables refuse results that lost the plateau") {
  CHECK_THROWS_AS(hs_omega_integrated(hs_coefficients(linear_spectrum(6, Rational(1)), Arithmetic::Float), 4.2), Error);
}

TEST_CASE("Omega is nondecreasing and omega nonnegative") {
  const auto t = hs_coefficients(curie_weiss(3, Rational(1), Rational(2)));
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double e = t.ground() + (t.top() - t.ground()) * i / 200.0;
    const double v = hs_omega_integrated(t, e);
    CHECK(v >= prev - 1e-15);
    CHECK(hs_omega_density(t, e) >= 0.0);
    prev = v;
  }
}

TEST_CASE("log values stay finite where the raw plateau underflows") {
  const auto t = hs_coefficients(linear_spectrum(16, Rational(1)));
  CHECK(std::isfinite(hs_log_omega_integrated(t, 7.5)));
  CHECK(hs_log_omega_integrated(t, 15.0) == doctest::Approx(t.log_plateau()));
  CHECK(t.log_plateau() == doctest::Approx(-std::lgamma(256.0)));
  CHECK(hs_log_omega_complement(t, 15.0) == -INFINITY);
}

TEST_CASE("complement plus volume is the plateau") {
  const auto t = hs_coefficients(linear_spectrum(4, Rational(1)));
  for (double e : {0.4, 1.5, 2.9}) {
    const double sum = std::exp(hs_log_omega_integrated(t, e) - t.log_plateau()) +
                       std::exp(hs_log_omega_complement(t, e) - t.log_plateau());
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("table JSON round trip and cache") {
  const auto s = noninteracting_spins(2, Rational(1));
  const auto t = hs_coefficients(s);
  const auto back = table_from_json(table_to_json(t));
  CHECK(back.coefficients(1) == t.coefficients(1));
  CHECK(hs_omega_integrated_exact(back, Rational(1, 3)) == hs_omega_integrated_exact(t, Rational(1, 3)));

  const auto dir = std::filesystem::temp_directory_path() / "rdm-test-cache";
  std::filesystem::remove_all(dir);
  HsTableCache cache(dir);
  const auto first = cache.get(s);
  CHECK(std::filesystem::exists(cache.path_for(s)));
  const auto second = cache.get(s);
  CHECK(second.coefficients(0) == first.coefficients(0));
  std::filesystem::remove_all(dir);
}

TEST_CASE("pure closed form: uniform simplex oracles") {
  // d=3 levels 0,1,2: P(p1 + 2 p2 <= E) = E^2/2 for E <= 1.
  const auto s = linear_spectrum(3, 1.0);
  for (double e : {0.1, 0.5, 1.0}) CHECK(pure_omega_integrated(s, e) == doctest::Approx(e * e / 2));
  CHECK(pure_omega_density(s, 0.5) == doctest::Approx(0.5));
  CHECK(pure_omega_integrated(linear_spectrum(2, 1.0), 0.3) == doctest::Approx(0.3));
}

TEST_CASE("pure closed form matches the unit-weight residue table") {
  const auto s = Spectrum::from_levels({-0.3, 0.2, 0.9, 1.4, 2.0});
  const auto t = pure_table(s);
  for (double e : {-0.1, 0.5, 1.0, 1.9})
    CHECK(pure_omega_integrated(s, e) == doctest::Approx(hs_omega_integrated(t, e)).epsilon(1e-12));
}
