#include "rdm/rational.hpp"

#include <cctype>
#include <cmath>

#include "rdm/error.hpp"

namespace rdm {

Rational to_rational(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, "non-finite value has no rational form");
  return Rational(x);
}

namespace {

BigInt pow10(unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 10;
  return r;
}

Rational parse_decimal(std::string_view s) {
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
  BigInt mantissa = 0;
  int scale = 0;
  bool digits = false, dot = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (dot) --scale;
      digits = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!digits) fail(ErrorCode::Parse, "not a number: '" + std::string(s) + "'");
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') fail(ErrorCode::Parse, "not a number: '" + std::string(s) + "'");
    ++i;
    std::string exp_text(s.substr(i));
    if (exp_text.empty()) fail(ErrorCode::Parse, "missing exponent in '" + std::string(s) + "'");
    std::size_t used = 0;
    int e = 0;
    try {
      e = std::stoi(exp_text, &used);
    } catch (const std::exception&) {
      fail(ErrorCode::Parse, "bad exponent in '" + std::string(s) + "'");
    }
    if (used != exp_text.size()) fail(ErrorCode::Parse, "bad exponent in '" + std::string(s) + "'");
    scale += e;
  }
  Rational r = scale >= 0 ? Rational(mantissa * pow10(static_cast<unsigned>(scale)))
                          : Rational(mantissa, pow10(static_cast<unsigned>(-scale)));
  return negative ? Rational(-r) : r;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational p = parse_decimal(trim(text.substr(0, slash)));
    const Rational q = parse_decimal(trim(text.substr(slash + 1)));
    if (q == 0) fail(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
    return p / q;
  }
  return parse_decimal(text);
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

double log_rational(const Rational& q) {
  if (q <= 0) fail(ErrorCode::Domain, "log of non-positive rational");
  const BigFloat num(numerator(q));
  const BigFloat den(denominator(q));
  return static_cast<double>(log(num) - log(den));
}

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

}  // namespace rdm
