#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace rdm {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;
/// Working precision for logarithms of exact values (exponent range is what
/// matters here: raw volumes reach 1/255! and below).
using BigFloat = boost::multiprecision::mpfr_float_50;

/// Exact conversion; every finite double is a dyadic rational.
Rational to_rational(double x);

/// Accepts "p/q", integers, and decimal literals such as "0.2" or "-1.5e-3",
/// all converted exactly.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Natural log of a positive rational without passing through double.
double log_rational(const Rational& q);

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);

}  // namespace rdm
