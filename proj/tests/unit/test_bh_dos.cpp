#include <doctest.h>

#include <cmath>

#include "rdm/bh_dos.hpp"
#include "rdm/dos.hpp"

using namespace rdm;

TEST_CASE("qubit engine reproduces the closed form") {
  const BhIntegrandContext ctx(linear_spectrum(2, 1.0));
  CHECK(ctx.power() == doctest::Approx(1.0));
  CHECK(ctx.log_plateau() == doctest::Approx(std::log(M_PI / 4)));
  for (double e : {0.01, 0.25, 0.5, 0.75, 0.99}) {
    const double closed = bh_qubit_closed_form(1.0, e) / bh_qubit_closed_form(1.0, 1.0);
    CHECK(bh_omega_integrated(ctx, e) == doctest::Approx(closed).epsilon(1e-12));
  }
  CHECK(bh_omega_integrated(ctx, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(bh_omega_density(ctx, 0.5) == doctest::Approx(4.0 / M_PI).epsilon(1e-12));
}

TEST_CASE("cut and contour routes agree") {
  for (int d = 3; d <= 5; ++d) {
    const auto s = linear_spectrum(d, 1.0);
    const BhIntegrandContext cut(s, {.method = BhMethod::Cut});
    const BhIntegrandContext contour(s, {.method = BhMethod::Contour});
    for (double f : {0.13, 0.5, 0.81}) {
      const double e = f * (d - 1);
      CHECK(bh_log_omega_integrated(cut, e) == doctest::Approx(bh_log_omega_integrated(contour, e)).epsilon(1e-9));
      CHECK(bh_log_omega_density(cut, e) == doctest::Approx(bh_log_omega_density(contour, e)).epsilon(1e-8));
    }
  }
}

TEST_CASE("auto method picks the contour for degenerate spectra") {
  CHECK(BhIntegrandContext(noninteracting_spins(2, 1.0)).method() == BhMethod::Contour);
  CHECK(BhIntegrandContext(linear_spectrum(4, 1.0)).method() == BhMethod::Cut);
}

TEST_CASE("reflection symmetry") {
  const BhIntegrandContext lin(linear_spectrum(3, 1.0));
  for (double e : {0.2, 0.7, 1.0})
    CHECK(bh_omega_integrated(lin, e) + bh_omega_integrated(lin, 2.0 - e) == doctest::Approx(1.0).epsilon(1e-11));
  const BhIntegrandContext spins(noninteracting_spins(2, 1.0));
  CHECK(bh_omega_integrated(spins, 0.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(bh_omega_density(spins, -0.4) == doctest::Approx(bh_omega_density(spins, 0.4)).epsilon(1e-9));
}

TEST_CASE("plateau normalization and domain clamping") {
  const BhIntegrandContext ctx(linear_spectrum(4, 1.0));
  CHECK(bh_omega_integrated(ctx, 3.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(bh_omega_integrated(ctx, 7.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(bh_omega_integrated(ctx, -1.0) == 0.0);
  CHECK(bh_omega_density(ctx, 3.5) == 0.0);
}

TEST_CASE("density is the derivative of Omega") {
  const BhIntegrandContext ctx(Spectrum::from_levels({0.0, 0.3, 1.1, 2.0}));
  const double h = 1e-5;
  for (double e : {0.2, 0.9, 1.6}) {
    const double fd = (bh_omega_integrated(ctx, e + h) - bh_omega_integrated(ctx, e - h)) / (2 * h);
    CHECK(bh_omega_density(ctx, e) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("density near the top stays accurate") {
  const BhIntegrandContext ctx(linear_spectrum(4, 1.0));
  CHECK(bh_log_omega_density(ctx, 2.96) == doctest::Approx(bh_log_omega_density(ctx, 0.04)).epsilon(1e-9));
}

TEST_CASE("magnitude and phase are well defined inside a segment") {
  const BhIntegrandContext ctx(linear_spectrum(3, 1.0));
  const auto mp = bh_magnitude_phase(ctx, 0, 0.5);
  CHECK(mp.magnitude > 0.0);
  CHECK(mp.phase >= 0.0);
  CHECK(mp.phase < 2 * M_PI);
}

TEST_CASE("DosFunction wraps every ensemble consistently") {
  const auto s = linear_spectrum(3, 1.0);
  for (auto ens : {Ensemble::HS, Ensemble::BH, Ensemble::PureHaar}) {
    const auto dos = make_dos(ens, s);
    CHECK(dos->ensemble() == ens);
    CHECK(dos->integrated(2.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(dos->integrated(1.0) == doctest::Approx(0.5).epsilon(1e-10));
    const double c = std::exp(dos->log_complement_raw(0.7) - dos->log_plateau());
    CHECK(c + dos->integrated(0.7) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(parse_ensemble("BH") == Ensemble::BH);
  CHECK(parse_ensemble("haar") == Ensemble::PureHaar);
  CHECK_THROWS(parse_ensemble("gue"));
}
