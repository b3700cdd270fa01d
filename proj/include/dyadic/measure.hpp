#pragma once

// Bernoulli product measures on Omega, states on the cylinder algebras A_n,
// and total-variation norms of odometer pushforwards.
//
// A CylinderState of depth n is a probability vector over the 2^n depth-n
// words, implicitly tensored with mu_a on every coordinate beyond n. Weights
// are stored densely, indexed by BitWord::index().

#include <dyadic/bit_word.hpp>
#include <dyadic/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dyadic {

/// Largest depth for which dense 2^n vectors are materialized.
inline constexpr std::size_t kMaxDenseDepth = 24;

class invalid_state : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The Bernoulli parameter a of mu_a = a delta_0 + (1-a) delta_1, restricted
/// to 0 < a <= 1/2.
class BernoulliParam {
 public:
  explicit BernoulliParam(Rational a) : a_(std::move(a)) {
    a_.canonicalize();
    if (!(a_ > 0 && a_ <= Rational(1, 2))) {
      throw std::domain_error("a must lie in (0, 1/2]");
    }
  }

  Rational const& a() const noexcept { return a_; }
  Rational one_minus_a() const { return 1 - a_; }
  /// a / (1 - a), at most 1.
  Rational ratio() const { return a_ / (1 - a_); }
  /// Flow parameter t = 2 - 4a in [0, 2).
  Rational t() const { return 2 - 4 * a_; }

  friend bool operator==(BernoulliParam const& x, BernoulliParam const& y) { return x.a_ == y.a_; }

 private:
  Rational a_;
};

/// a^zeros (1-a)^ones for every count 0..depth, so the mass of any depth-D
/// word is zero_pow[#zeros] * one_pow[#ones].
struct MassTable {
  std::vector<Rational> zero_pow;
  std::vector<Rational> one_pow;

  MassTable(BernoulliParam const& param, std::size_t depth) : zero_pow(depth + 1), one_pow(depth + 1) {
    zero_pow[0] = 1;
    one_pow[0] = 1;
    auto const b = param.one_minus_a();
    for (std::size_t i = 1; i <= depth; ++i) {
      zero_pow[i] = zero_pow[i - 1] * param.a();
      one_pow[i] = one_pow[i - 1] * b;
    }
  }

  Rational mass(std::size_t zeros, std::size_t ones) const { return zero_pow[zeros] * one_pow[ones]; }
};

/// nu_a of the cylinder [w].
inline Rational cylinder_mass(BernoulliParam const& param, BitWord const& w) {
  return pow(param.a(), static_cast<std::int64_t>(w.count_zeros())) *
         pow(param.one_minus_a(), static_cast<std::int64_t>(w.count_ones()));
}

/// nu_a(K_n) = a (1-a)^(n-1).
inline Rational k_region_mass(BernoulliParam const& param, std::size_t n) {
  if (n == 0) throw std::invalid_argument("K_n is defined for n >= 1");
  return param.a() * pow(param.one_minus_a(), static_cast<std::int64_t>(n) - 1);
}

/// d g^{-1}(nu_a) / d nu_a on K_n, which is the constant (a/(1-a))^(n-2).
inline Rational rn_derivative_on_Kn(BernoulliParam const& param, std::size_t n) {
  if (n == 0) throw std::invalid_argument("K_n is defined for n >= 1");
  return pow(param.ratio(), static_cast<std::int64_t>(n) - 2);
}

/// ||nu_a o sigma - nu_a|| split into the L^1 mass where the Radon-Nikodym
/// derivative exceeds 1 (only K_1) and where it falls below 1 (K_n, n >= 3).
struct SigmaDistance {
  Rational value;
  Rational positive_half;
  Rational negative_half;
};

/// Sums |(a/(1-a))^(n-2) - 1| nu_a(K_n) in closed form. On K_n the term
/// (a/(1-a))^(n-2) nu_a(K_n) equals (1-a) a^(n-1), so the n >= 3 tail is the
/// difference of two geometric series with ratios (1-a) and a.
inline SigmaDistance tv_sigma_vs_identity(BernoulliParam const& param) {
  Rational const& a = param.a();
  Rational const b = param.one_minus_a();
  Rational const positive = (rn_derivative_on_Kn(param, 1) - 1) * k_region_mass(param, 1);
  // sum_{n>=3} a (1-a)^(n-1) = first / (1 - ratio) with first a(1-a)^2, ratio 1-a
  Rational const nu_tail = a * b * b / (1 - b);
  // sum_{n>=3} (1-a) a^(n-1) with first (1-a) a^2, ratio a
  Rational const pushed_tail = b * a * a / (1 - a);
  Rational const negative = nu_tail - pushed_tail;
  return {positive + negative, positive, negative};
}

/// Partial sum of the Radon-Nikodym integral over K_1..K_N and its exact
/// remainder over K_{N+1}, K_{N+2}, ...
struct RnIntegral {
  Rational partial;
  Rational tail;
};

inline RnIntegral rn_integral_check(BernoulliParam const& param, std::size_t n_terms) {
  if (n_terms == 0) throw std::invalid_argument("need at least one term");
  Rational partial = 0;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    partial += rn_derivative_on_Kn(param, n) * k_region_mass(param, n);
  }
  // sum_{n>N} (1-a) a^(n-1) = a^N
  Rational tail = pow(param.a(), static_cast<std::int64_t>(n_terms));
  return {partial, tail};
}

inline std::uint64_t atoms_at(std::size_t depth) {
  if (depth > kMaxDenseDepth) {
    throw std::invalid_argument("depth " + std::to_string(depth) + " exceeds the dense limit " +
                                std::to_string(kMaxDenseDepth));
  }
  return std::uint64_t{1} << depth;
}

/// A normal state on A_n tensored with mu_a beyond n.
class CylinderState {
 public:
  /// nu_a itself, as a depth-0 state.
  explicit CylinderState(BernoulliParam param) : param_(std::move(param)), depth_(0), weights_{Rational(1)} {}

  CylinderState(BernoulliParam param, std::size_t depth, std::vector<Rational> weights)
      : param_(std::move(param)), depth_(depth), weights_(std::move(weights)) {
    if (weights_.size() != atoms_at(depth_)) {
      throw invalid_state("state of depth " + std::to_string(depth_) + " needs " +
                          std::to_string(atoms_at(depth_)) + " weights");
    }
    Rational total = 0;
    for (auto& w : weights_) {
      w.canonicalize();
      if (sgn(w) < 0) throw invalid_state("state weights must be nonnegative");
      total += w;
    }
    if (total != 1) throw invalid_state("state weights must sum to 1, got " + to_string(total));
  }

  static CylinderState point_mass(BernoulliParam param, BitWord const& w) {
    std::vector<Rational> weights(atoms_at(w.depth()));
    weights[w.index()] = 1;
    return {std::move(param), w.depth(), std::move(weights)};
  }

  BernoulliParam const& param() const noexcept { return param_; }
  std::size_t depth() const noexcept { return depth_; }
  std::vector<Rational> const& weights() const noexcept { return weights_; }
  Rational const& weight(std::uint64_t j) const { return weights_.at(j); }
  Rational const& weight(BitWord const& w) const {
    if (w.depth() != depth_) throw std::invalid_argument("word depth does not match state depth");
    return weights_[w.index()];
  }

 private:
  BernoulliParam param_;
  std::size_t depth_;
  std::vector<Rational> weights_;
};

/// Signed weights on depth-n words with a common mu_a tail.
struct SignedFunctional {
  BernoulliParam param;
  std::size_t depth = 0;
  std::vector<Rational> weights;
};

inline SignedFunctional difference(CylinderState const& lhs, CylinderState const& rhs) {
  if (lhs.depth() != rhs.depth() || !(lhs.param() == rhs.param())) {
    throw std::invalid_argument("states must share depth and parameter");
  }
  SignedFunctional out{lhs.param(), lhs.depth(), lhs.weights()};
  for (std::size_t j = 0; j < out.weights.size(); ++j) out.weights[j] -= rhs.weights()[j];
  return out;
}

/// Certified enclosure [lo, hi] of a total-variation value.
struct TVInterval {
  Rational lo;
  Rational hi;

  static TVInterval exact(Rational const& v) { return {v, v}; }

  Rational width() const { return hi - lo; }
  bool degenerate() const { return lo == hi; }
  bool contains(Rational const& v) const { return lo <= v && v <= hi; }
  bool intersects(TVInterval const& other) const { return lo <= other.hi && other.lo <= hi; }

  friend bool operator==(TVInterval const&, TVInterval const&) = default;
};

/// phi o E_n composed up to depth D: weight(w ++ v) = weight(w) nu_a([v]).
inline CylinderState extend_state(CylinderState const& phi, std::size_t target_depth) {
  if (target_depth < phi.depth()) throw std::invalid_argument("cannot extend a state to a smaller depth");
  if (target_depth == phi.depth()) return phi;
  std::size_t const extra = target_depth - phi.depth();
  MassTable const masses(phi.param(), extra);
  std::uint64_t const prefixes = atoms_at(phi.depth());
  std::uint64_t const tails = atoms_at(extra);
  std::vector<Rational> weights(atoms_at(target_depth));
  for (std::uint64_t v = 0; v < tails; ++v) {
    auto const ones = static_cast<std::size_t>(__builtin_popcountll(v));
    Rational const tail_mass = masses.mass(extra - ones, ones);
    for (std::uint64_t w = 0; w < prefixes; ++w) {
      weights[(v << phi.depth()) | w] = phi.weights()[w] * tail_mass;
    }
  }
  return {phi.param(), target_depth, std::move(weights)};
}

/// Restriction to A_n: sums out the coordinates beyond n.
inline CylinderState restrict_state(CylinderState const& phi, std::size_t n) {
  if (n > phi.depth()) throw std::invalid_argument("cannot restrict a state to a larger depth");
  std::vector<Rational> weights(atoms_at(n));
  std::uint64_t const mask = atoms_at(n) - 1;
  for (std::uint64_t j = 0; j < phi.weights().size(); ++j) weights[j & mask] += phi.weights()[j];
  return {phi.param(), n, std::move(weights)};
}

/// Total-variation norm of a functional whose atoms share the nu_a tail.
inline Rational tv_same_tail(SignedFunctional const& f) {
  Rational total = 0;
  for (auto const& w : f.weights) total += abs(w);
  return total;
}

inline void require_working_depth(std::size_t state_depth, std::size_t m, std::size_t working_depth) {
  if (working_depth < state_depth || working_depth < m + 1) {
    throw std::invalid_argument("working depth " + std::to_string(working_depth) +
                                " too small: need at least max(state depth, m + 1) = " +
                                std::to_string(std::max(state_depth, m + 1)));
  }
}

/// Certified enclosure of ||phi o sigma^(2^m) - phi||.
///
/// For m >= depth(phi) the value is exactly 2 - 4a: phi o sigma^(2^m) is
/// omega (x) mu_a (x) ... (x) (nu_a o sigma) and the norm of a state tensored
/// with a signed measure is the product of norms.
///
/// Otherwise phi is extended to the working depth and every atom [v] is
/// pushed through g^(2^m) by carry resolution. When the carry stays inside
/// the prefix, g^(2^m)[v] = [v'] with the tail untouched, so the atom
/// contributes |phi(v') - phi(v)| exactly. When it escapes, the tail is moved
/// by one more odometer step and the atom carries
/// phi(v') (nu_a o sigma) - phi(v) nu_a, whose norm lies in
/// [|phi(v') - phi(v)|, phi(v') + phi(v)].
inline TVInterval tv_pushforward_pow2(CylinderState const& phi, std::size_t m, std::size_t working_depth) {
  require_working_depth(phi.depth(), m, working_depth);
  if (m >= phi.depth()) return TVInterval::exact(phi.param().t());

  auto const extended = extend_state(phi, working_depth);
  auto const& weights = extended.weights();
  auto const step = static_cast<std::int64_t>(std::uint64_t{1} << m);
  Rational resolved = 0;
  Rational escaped = 0;
  Rational slack = 0;
  for (std::uint64_t j = 0; j < weights.size(); ++j) {
    auto const image = odometer_pow(step, index_to_word(working_depth, j));
    Rational const& pushed = weights[image.word.index()];
    Rational const& here = weights[j];
    if (image.resolved()) {
      resolved += abs(pushed - here);
    } else {
      escaped += abs(pushed - here);
      slack += 2 * min(pushed, here);
    }
  }
  return {resolved + escaped, resolved + escaped + slack};
}

/// Independent check of tv_pushforward_pow2: sigma^(2^m) is modelled as the
/// cyclic rotation j -> j + 2^m mod 2^D of a freshly built atom vector.
/// Atoms that wrap around are the only ones whose tail moves; their error is
/// bounded by twice the smaller of the two masses involved.
inline TVInterval brute_force_tv_pow2(CylinderState const& phi, std::size_t m, std::size_t working_depth) {
  require_working_depth(phi.depth(), m, working_depth);
  std::uint64_t const size = std::uint64_t{1} << working_depth;
  std::uint64_t const prefix_mask = (std::uint64_t{1} << phi.depth()) - 1;
  std::size_t const tail_bits = working_depth - phi.depth();

  std::vector<Rational> a_pow(tail_bits + 1), b_pow(tail_bits + 1);
  a_pow[0] = b_pow[0] = 1;
  for (std::size_t i = 1; i <= tail_bits; ++i) {
    a_pow[i] = a_pow[i - 1] * phi.param().a();
    b_pow[i] = b_pow[i - 1] * (1 - phi.param().a());
  }
  std::vector<Rational> atoms(size);
  for (std::uint64_t j = 0; j < size; ++j) {
    auto const tail = j >> phi.depth();
    auto const ones = static_cast<std::size_t>(__builtin_popcountll(tail));
    atoms[j] = phi.weights()[j & prefix_mask] * a_pow[tail_bits - ones] * b_pow[ones];
  }

  std::uint64_t const shift = std::uint64_t{1} << m;
  Rational rotated = 0;
  Rational slack = 0;
  for (std::uint64_t j = 0; j < size; ++j) {
    std::uint64_t const target = j + shift;
    Rational const& moved = atoms[target % size];
    rotated += abs(moved - atoms[j]);
    if (target >= size) slack += 2 * min(moved, atoms[j]);
  }
  return {rotated, rotated + slack};
}

/// Rows (m, interval) for m = 0..n_max. Rows that short-circuit run at
/// working depth max(D, m + 1); they do not depend on it.
struct ConvergenceRow {
  std::size_t n;
  TVInterval interval;
  bool stabilized;
};

inline std::vector<ConvergenceRow> convergence_table(CylinderState const& phi, std::size_t n_max,
                                                     std::size_t working_depth) {
  std::vector<ConvergenceRow> rows;
  auto const t = phi.param().t();
  for (std::size_t n = 0; n <= n_max; ++n) {
    auto const iv = tv_pushforward_pow2(phi, n, std::max(working_depth, n + 1));
    rows.push_back({n, iv, iv.degenerate() && iv.lo == t});
  }
  return rows;
}

}  // namespace dyadic
