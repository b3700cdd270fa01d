#pragma once

// Seeded pseudo-random rational test objects.

#include <dyadic/l2.hpp>
#include <dyadic/measure.hpp>
#include <dyadic/suspension.hpp>

#include <random>
#include <vector>

namespace dyadic {

/// Integer weights in [0, max_weight] (at least one positive), normalized.
inline std::vector<Rational> random_probability_vector(std::size_t size, std::mt19937_64& rng,
                                                       unsigned max_weight = 9) {
  std::uniform_int_distribution<unsigned> draw(0, max_weight);
  std::vector<Rational> out(size);
  Rational total = 0;
  for (auto& w : out) {
    w = draw(rng);
    total += w;
  }
  if (sgn(total) == 0) {
    out[std::uniform_int_distribution<std::size_t>(0, size - 1)(rng)] = 1;
    total = 1;
  }
  for (auto& w : out) w /= total;
  return out;
}

inline CylinderState random_state(BernoulliParam const& param, std::size_t depth, std::mt19937_64& rng) {
  return {param, depth, random_probability_vector(atoms_at(depth), rng)};
}

inline SuspensionState random_suspension_state(BernoulliParam const& param, std::size_t base_depth,
                                               std::size_t time_depth, std::mt19937_64& rng) {
  return {param, base_depth, time_depth, random_probability_vector(atoms_at(base_depth + time_depth), rng)};
}

/// Values p/q with |p| <= 20, 1 <= q <= 6.
inline StepFunction random_step_function(BernoulliParam const& param, std::size_t depth, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 6);
  std::vector<Rational> values(atoms_at(depth));
  for (auto& v : values) {
    v = Rational(num(rng), den(rng));
    v.canonicalize();
  }
  return {param, depth, std::move(values)};
}

}  // namespace dyadic
