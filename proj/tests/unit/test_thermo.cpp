#include <doctest.h>

#include <cmath>

#include "rdm/thermo.hpp"

using namespace rdm;

TEST_CASE("entropy anchors") {
  const auto q = linear_spectrum(2, 1.0);
  const auto bh = make_dos(Ensemble::BH, q);
  const auto hs = make_dos(Ensemble::HS, q);
  CHECK(entropy(*bh, 1.0) == 0.0);
  CHECK(entropy(*bh, 0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK(entropy(*hs, 0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK(entropy(*hs, 0.0) == -INFINITY);
}

TEST_CASE("temperature anchors") {
  const auto q = linear_spectrum(2, 1.0);
  // BH qubit: Omega/omega at the midpoint is (1/2)/(4/pi).
  CHECK(temperature(*make_dos(Ensemble::BH, q), 0.5) == doctest::Approx(M_PI / 8).epsilon(1e-12));
  // HS qubit: (3x^2 - 2x^3)/(6x - 6x^2) at x = 1/2.
  CHECK(temperature(*make_dos(Ensemble::HS, q), 0.5) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(temperature(*make_dos(Ensemble::HS, q), 1.0) == INFINITY);
  CHECK(temperature(*make_dos(Ensemble::HS, q), 0.0) == 0.0);
}

TEST_CASE("energy_at_temperature inverts temperature") {
  for (auto ens : {Ensemble::HS, Ensemble::BH}) {
    const auto dos = make_dos(ens, linear_spectrum(4, 1.0));
    for (double e : {0.1, 0.9, 1.8}) {
      const auto root = energy_at_temperature(*dos, temperature(*dos, e));
      CHECK(root.energy == doctest::Approx(e).epsilon(1e-9));
    }
    CHECK(energy_at_temperature(*dos, 0.0).energy == 0.0);
  }
}

TEST_CASE("perturbed families reproduce the base spectrum at zero") {
  const auto s = noninteracting_spins(2, Rational(1));
  CHECK(PerturbedSpectrumFamily::energy_squared(s).at(0) == s);
  CHECK(PerturbedSpectrumFamily::scale(s).at(0) == s);
  CHECK(PerturbedSpectrumFamily::level_shift(s, 1).at(0) == s);
  CHECK(PerturbedSpectrumFamily::field_shift(SpinChainModel{2, Rational(1)}).at(0) == s);
}

TEST_CASE("level projector splits one unit off") {
  const auto s = noninteracting_spins(2, Rational(1));
  const auto split = PerturbedSpectrumFamily::level_projector(s, 1).at(Rational(1, 8));
  CHECK(split.distinct() == 4);
  CHECK(split.dim() == 4);
  const auto sq = PerturbedSpectrumFamily::energy_squared(s).at(Rational(1, 8));
  CHECK(std::vector<std::int64_t>(sq.multiplicities().begin(), sq.multiplicities().end()) ==
        std::vector<std::int64_t>{1, 2, 1});
}

TEST_CASE("identity perturbation returns E") {
  const auto s = linear_spectrum(3, 1.0);
  for (auto ens : {Ensemble::HS, Ensemble::BH, Ensemble::PureHaar}) {
    const auto builder = dos_builder(ens);
    for (double e : {0.3, 1.2, 1.9}) {
      const auto x = observable_expectation(builder, PerturbedSpectrumFamily::scale(s), e);
      CHECK(x.value == doctest::Approx(e).epsilon(1e-7));
    }
  }
}

TEST_CASE("qubit populations are (1 - E, E) and fluctuations E(1 - E)") {
  const auto q = linear_spectrum(2, 1.0);
  for (auto ens : {Ensemble::HS, Ensemble::BH, Ensemble::PureHaar}) {
    const auto builder = dos_builder(ens);
    const auto p = average_state_populations(builder, q, 0.3);
    CHECK(p.levels[0].population == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(p.levels[1].population == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(energy_variance(builder, q, 0.3).variance == doctest::Approx(0.21).epsilon(1e-7));
  }
}

TEST_CASE("pure three-level fluctuations: dE^2 = 3E/2 - E^2 below the middle level") {
  const auto builder = dos_builder(Ensemble::PureHaar);
  const auto s = linear_spectrum(3, 1.0);
  for (double e : {0.25, 0.5, 0.75})
    CHECK(energy_variance(builder, s, e).variance == doctest::Approx(1.5 * e - e * e).epsilon(1e-7));
}

TEST_CASE("fluctuations vanish at the edges and order pure < BH < HS") {
  const auto s = linear_spectrum(3, 1.0);
  const auto hs = energy_variance(dos_builder(Ensemble::HS), s, 1.0).delta_e;
  const auto bh = energy_variance(dos_builder(Ensemble::BH), s, 1.0).delta_e;
  const auto pure = energy_variance(dos_builder(Ensemble::PureHaar), s, 1.0).delta_e;
  CHECK(pure < bh);
  CHECK(bh < hs);
  CHECK(energy_variance(dos_builder(Ensemble::BH), s, 0.0).delta_e == 0.0);
  CHECK(energy_variance(dos_builder(Ensemble::BH), s, 2.0).delta_e == 0.0);
}

TEST_CASE("reflection-symmetric populations") {
  const auto p = average_state_populations(dos_builder(Ensemble::BH), linear_spectrum(3, 1.0), 1.0);
  CHECK(p.levels[0].population == doctest::Approx(p.levels[2].population).epsilon(1e-7));
  CHECK(p.raw_deviation == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
}

TEST_CASE("free-spin magnetization is -E/B") {
  const SpinChainModel m{2, Rational(1)};
  for (auto ens : {Ensemble::HS, Ensemble::BH})
    for (double e : {-0.6, 0.2})
      CHECK(magnetization(dos_builder(ens), m, e).value == doctest::Approx(-e).epsilon(1e-6));
}

TEST_CASE("Curie-Weiss ground-state magnetization is N/2") {
  const CurieWeissModel m{3, Rational(1), Rational(1, 5)};
  const auto s = build_spectrum(m);
  CHECK(magnetization(dos_builder(Ensemble::HS), m, s.ground()).value == doctest::Approx(1.5));
}
