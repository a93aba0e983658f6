#include <doctest.h>

#include "rdm/error.hpp"
#include "rdm/spectrum.hpp"

using namespace rdm;

TEST_CASE("linear spectrum is evenly spaced from zero") {
  const auto s = linear_spectrum(4, Rational(1, 2));
  CHECK(s.dim() == 4);
  CHECK(s.distinct() == 4);
  CHECK(s.exact_levels()[3] == Rational(3, 2));
  CHECK(s.span() == doctest::Approx(1.5));
  CHECK_FALSE(s.degenerate());
}

TEST_CASE("free spins carry binomial degeneracies") {
  const auto s = noninteracting_spins(3, Rational(2));
  REQUIRE(s.distinct() == 4);
  CHECK(s.dim() == 8);
  CHECK(s.multiplicity(1) == 3);
  CHECK(s.exact_levels()[0] == Rational(-3));
  CHECK(s.exact_levels()[3] == Rational(3));
  CHECK(s.degenerate());
  CHECK(s.flattened().size() == 8);
}

TEST_CASE("Curie-Weiss at J = 0 reduces to free spins") {
  CHECK(curie_weiss(3, Rational(1), Rational(0)) == noninteracting_spins(3, Rational(1)));
}

TEST_CASE("Curie-Weiss N=2 levels") {
  // Triplet -B m - J/8, singlet +3J/8.
  const auto s = curie_weiss(2, Rational(1), Rational(4));
  REQUIRE(s.distinct() == 4);
  CHECK(s.exact_levels()[0] == Rational(-3, 2));
  CHECK(s.exact_levels()[1] == Rational(-1, 2));
  CHECK(s.exact_levels()[2] == Rational(1, 2));
  CHECK(s.exact_levels()[3] == Rational(3, 2));
  CHECK(s.dim() == 4);
}

TEST_CASE("field derivative is the level mean of -S_z") {
  const auto slope = field_derivative(SpinChainModel{2, Rational(1)});
  REQUIRE(slope.size() == 3);
  CHECK(slope[0] == doctest::Approx(-1.0));
  CHECK(slope[1] == doctest::Approx(0.0));
  CHECK(slope[2] == doctest::Approx(1.0));
}

TEST_CASE("spectrum JSON round trip keeps exact levels") {
  const auto s = parse_spectrum_json(R"({"levels": ["0", "1/3", 2.5], "multiplicities": [1, 2, 1]})");
  CHECK(s.exact_levels()[1] == Rational(1, 3));
  CHECK(parse_spectrum_json(spectrum_to_json(s)) == s);
  CHECK(s.hash() == parse_spectrum_json(spectrum_to_json(s)).hash());
}

TEST_CASE("hash distinguishes multiplicities") {
  const auto a = Spectrum::from_levels({0.0, 1.0}, {1, 2});
  const auto b = Spectrum::from_levels({0.0, 1.0}, {2, 1});
  CHECK(a.hash() != b.hash());
}

TEST_CASE("invalid spectra are rejected with codes") {
  auto code_of = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code_of([] { Spectrum::from_levels({1.0, 0.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Spectrum::from_levels({0.0}); }) == ErrorCode::InvalidDimension);
  CHECK(code_of([] { noninteracting_spins(63, 1.0); }) == ErrorCode::OverflowGuard);
  CHECK(code_of([] { parse_spectrum_json("{}"); }) == ErrorCode::Parse);
  CHECK(code_of([] { linear_spectrum(1, 1.0); }) == ErrorCode::InvalidDimension);
}

TEST_CASE("shift_to_ground puts E_0 at zero") {
  const auto s = shift_to_ground(noninteracting_spins(2, 1.0));
  CHECK(s.ground() == 0.0);
  CHECK(s.top() == 2.0);
}

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("0.2") == Rational(1, 5));
  CHECK(parse_rational("-1.5e-3") == Rational(-3, 2000));
  CHECK(parse_rational("7/21") == Rational(1, 3));
  CHECK(to_rational(0.5) == Rational(1, 2));
  CHECK(log_rational(Rational(1, 4)) == doctest::Approx(std::log(0.25)));
  CHECK(binomial(10, 3) == 120);
}
