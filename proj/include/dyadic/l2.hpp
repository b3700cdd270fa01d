#pragma once

// L^2(Omega, nu_a) norms of step functions under sigma(f) = f o g^{-1}.
// Everything is kept at the squared level so it stays rational.

#include <dyadic/bit_word.hpp>
#include <dyadic/measure.hpp>
#include <dyadic/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dyadic {

/// A real function of the first `depth` coordinates.
struct StepFunction {
  BernoulliParam param;
  std::size_t depth = 0;
  std::vector<Rational> values;

  StepFunction(BernoulliParam p, std::size_t d, std::vector<Rational> v)
      : param(std::move(p)), depth(d), values(std::move(v)) {
    if (values.size() != atoms_at(depth)) throw std::invalid_argument("step function needs 2^depth values");
    for (auto& v : values) v.canonicalize();
  }

  static StepFunction constant(BernoulliParam p, Rational c) { return {std::move(p), 0, {std::move(c)}}; }

  static StepFunction indicator(BernoulliParam p, BitWord const& w) {
    std::vector<Rational> v(atoms_at(w.depth()));
    v[w.index()] = 1;
    return {std::move(p), w.depth(), std::move(v)};
  }
};

/// sum_w f(w)^2 nu_a([w]).
inline Rational l2_norm_sq(StepFunction const& f) {
  MassTable const masses(f.param, f.depth);
  Rational total = 0;
  for (std::uint64_t j = 0; j < f.values.size(); ++j) {
    auto const ones = static_cast<std::size_t>(__builtin_popcountll(j));
    total += f.values[j] * f.values[j] * masses.mass(f.depth - ones, ones);
  }
  return total;
}

/// ||sigma f||_2^2 = integral of f^2 d g^{-1}(nu_a) / d nu_a d nu_a. A word
/// whose first zero sits at position n <= depth lies inside K_n, where the
/// derivative is the constant (a/(1-a))^(n-2). The all-ones word covers K_n
/// for every n > depth (plus the null point k_0), and
/// sum_{n > D} (a/(1-a))^(n-2) nu_a(K_n) = sum_{n > D} (1-a) a^(n-1) = a^D.
inline Rational sigma_norm_sq(StepFunction const& f) {
  Rational total = 0;
  for (std::uint64_t j = 0; j < f.values.size(); ++j) {
    if (sgn(f.values[j]) == 0) continue;
    Rational const square = f.values[j] * f.values[j];
    if (f.depth == 0) {
      total += square;
      continue;
    }
    auto const w = index_to_word(f.depth, j);
    if (auto const n = first_zero_index(w)) {
      total += square * cylinder_mass(f.param, w) * rn_derivative_on_Kn(f.param, *n);
    } else {
      total += square * pow(f.param.a(), static_cast<std::int64_t>(f.depth));
    }
  }
  return total;
}

struct ContractionCheck {
  Rational lhs;
  Rational bound;
  bool ok;
};

/// ||sigma f||_2^2 <= ((1-a)/a) ||f||_2^2.
inline ContractionCheck l2_contraction_check(StepFunction const& f) {
  Rational lhs = sigma_norm_sq(f);
  Rational bound = (f.param.one_minus_a() / f.param.a()) * l2_norm_sq(f);
  bool const ok = lhs <= bound;
  return {std::move(lhs), std::move(bound), ok};
}

/// sigma^(2^m) f = f o g^(-2^m), as a step function of the same depth. The
/// prefix of g^(-2^m) x is borrow subtraction on the prefix of x; a borrow
/// that escapes moves only coordinates f does not see.
inline StepFunction pushforward_pow2(StepFunction const& f, std::size_t m) {
  if (m >= f.depth) return f;
  auto const step = static_cast<std::int64_t>(std::uint64_t{1} << m);
  std::vector<Rational> values(f.values.size());
  for (std::uint64_t j = 0; j < values.size(); ++j) {
    values[j] = f.values[odometer_pow(-step, index_to_word(f.depth, j)).word.index()];
  }
  return {f.param, f.depth, std::move(values)};
}

/// ||sigma^(2^m) f - f||_2^2; zero whenever m >= depth(f), since
/// sigma^(2^m) acts as the identity on A_m.
inline Rational l2_pow2_convergence(StepFunction const& f, std::size_t m) {
  if (m >= f.depth) return 0;
  auto const moved = pushforward_pow2(f, m);
  StepFunction diff = f;
  for (std::size_t j = 0; j < diff.values.size(); ++j) diff.values[j] = moved.values[j] - f.values[j];
  return l2_norm_sq(diff);
}

/// E_m f, the nu_a-conditional expectation onto A_m, as a depth-m function.
inline StepFunction conditional_expectation(StepFunction const& f, std::size_t m) {
  if (m > f.depth) throw std::invalid_argument("cannot condition onto a finer algebra");
  std::size_t const extra = f.depth - m;
  MassTable const masses(f.param, extra);
  std::uint64_t const mask = (std::uint64_t{1} << m) - 1;
  std::vector<Rational> values(atoms_at(m));
  for (std::uint64_t j = 0; j < f.values.size(); ++j) {
    auto const ones = static_cast<std::size_t>(__builtin_popcountll(j >> m));
    values[j & mask] += f.values[j] * masses.mass(extra - ones, ones);
  }
  return {f.param, m, std::move(values)};
}

/// E_m f lifted back to depth(f), so it can be subtracted from f.
inline StepFunction truncation(StepFunction const& f, std::size_t m) {
  auto const coarse = conditional_expectation(f, m);
  std::uint64_t const mask = (std::uint64_t{1} << m) - 1;
  std::vector<Rational> values(f.values.size());
  for (std::uint64_t j = 0; j < values.size(); ++j) values[j] = coarse.values[j & mask];
  return {f.param, f.depth, std::move(values)};
}

struct TruncationBound {
  Rational lhs;       ///< ||sigma^(2^m) f - f||_2^2
  Rational distance;  ///< ||f - f_m||_2^2 with f_m = E_m f
  bool ok;
};

/// ||sigma^(2^m) f - f||_2 <= (sqrt((1-a)/a) + 1) ||f - f_m||_2, checked as
/// L <= (c^2 + 1) R + 2 c R with c^2 = (1-a)/a, all at the squared level:
/// when the left side minus (c^2 + 1) R is positive, square once more.
inline TruncationBound truncation_bound_check(StepFunction const& f, std::size_t m) {
  Rational lhs = l2_pow2_convergence(f, m);
  auto const fm = truncation(f, m);
  StepFunction diff = f;
  for (std::size_t j = 0; j < diff.values.size(); ++j) diff.values[j] -= fm.values[j];
  Rational distance = l2_norm_sq(diff);
  Rational const c_sq = f.param.one_minus_a() / f.param.a();
  Rational const excess = lhs - (c_sq + 1) * distance;
  bool const ok = sgn(excess) <= 0 || excess * excess <= 4 * c_sq * distance * distance;
  return {std::move(lhs), std::move(distance), ok};
}

}  // namespace dyadic
