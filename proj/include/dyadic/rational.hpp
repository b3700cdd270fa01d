#pragma once

// Exact rational scalars. Every quantity the engine computes is a Rational;
// decimals only appear when rendering for output.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dyadic {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q" or "p" into a canonical Rational. Rejects q <= 0 and junk.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto const trim = [](std::string& t) {
    auto const first = t.find_first_not_of(" \t");
    auto const last = t.find_last_not_of(" \t");
    t = first == std::string::npos ? std::string() : t.substr(first, last - first + 1);
  };
  trim(s);
  auto const valid_int = [](std::string_view t, bool allow_sign) {
    if (t.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') return false;
    }
    return true;
  };
  auto const slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? std::string("1") : s.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false)) {
    throw std::invalid_argument("not a rational of the form p/q: '" + s + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  Integer q(den, 10);
  if (q == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  Rational r(Integer(num, 10), q);
  r.canonicalize();
  return r;
}

/// Canonical text form: "p/q" in lowest terms, or "p" when q == 1.
inline std::string to_string(Rational const& r) { return r.get_str(10); }

/// Decimal rendering with `digits` places after the point, rounding half
/// away from zero. Output only; never parsed back.
inline std::string to_decimal(Rational const& r, int digits) {
  if (digits < 0) throw std::invalid_argument("negative decimal precision");
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational scaled = abs(r) * scale;
  Integer q = scaled.get_num() / scaled.get_den();
  Integer rem = scaled.get_num() - q * scaled.get_den();
  if (2 * rem >= scaled.get_den()) q += 1;
  std::string body = q.get_str(10);
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  bool const negative = sgn(r) < 0 && q != 0;
  return negative ? "-" + body : body;
}

/// base^exponent for any integer exponent; base must be nonzero when
/// exponent < 0.
inline Rational pow(Rational const& base, std::int64_t exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero raised to a negative power");
    return pow(Rational(1) / base, -exponent);
  }
  Integer num, den;
  auto const e = static_cast<unsigned long>(exponent);
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational min(Rational const& x, Rational const& y) { return x < y ? x : y; }
inline Rational max(Rational const& x, Rational const& y) { return x < y ? y : x; }

/// 2^n as a Rational.
inline Rational pow2(unsigned n) {
  Integer v;
  mpz_ui_pow_ui(v.get_mpz_t(), 2, n);
  return Rational(v);
}

/// Largest integer <= r.
inline Integer floor(Rational const& r) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

}  // namespace dyadic
