#pragma once

// Eigenfunctions of the odometer and of the suspension flow, kept as exact
// phases. A unitary taking values in the q-th roots of unity is stored as
// exponent residues mod q; the value on a block with exponent e is
// exp(-2 pi i e / q). Phases of points on Omega x [0,1) are Rationals in
// "turns" (multiples of 2 pi) and compared modulo 1.

#include <dyadic/bit_word.hpp>
#include <dyadic/rational.hpp>
#include <dyadic/suspension.hpp>

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dyadic {

/// tau = 2 pi p / q, reduced, q >= 1.
class DyadicAngle {
 public:
  DyadicAngle(std::int64_t p, std::int64_t q) {
    if (q == 0) throw std::invalid_argument("angle denominator must be nonzero");
    if (q < 0) {
      p = -p;
      q = -q;
    }
    auto const g = std::gcd(p, q);
    p_ = p / (g == 0 ? 1 : g);
    q_ = q / (g == 0 ? 1 : g);
    if (p_ == 0) q_ = 1;
  }

  static DyadicAngle parse(std::string_view text) {
    Rational const r = parse_rational(text);
    if (!r.get_num().fits_slong_p() || !r.get_den().fits_slong_p()) {
      throw std::invalid_argument("angle fraction too large: '" + std::string(text) + "'");
    }
    return {r.get_num().get_si(), r.get_den().get_si()};
  }

  std::int64_t p() const noexcept { return p_; }
  std::int64_t q() const noexcept { return q_; }
  std::string str() const { return q_ == 1 ? std::to_string(p_) : std::to_string(p_) + "/" + std::to_string(q_); }

 private:
  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
};

/// tau is of the form 2 pi k / 2^n iff the reduced denominator is a power of 2.
inline bool dyadic_membership(DyadicAngle const& tau) {
  auto const q = static_cast<std::uint64_t>(tau.q());
  return (q & (q - 1)) == 0;
}

inline std::int64_t mod_floor(std::int64_t x, std::int64_t q) {
  auto const r = x % q;
  return r < 0 ? r + q : r;
}

/// Squared chord |exp(2 pi i r/q) - 1|^2 = 2 - 2 cos(2 pi r/q). Exact for
/// reduced denominators 1, 2, 3, 4, 6 (the only ones with rational cosine);
/// otherwise within 1e-30 of the true value.
struct ChordDistance {
  std::size_t n;
  std::int64_t residue;
  Rational value;
  bool exact;
};

inline constexpr int kChordDecimalDigits = 30;

inline Rational squared_chord(std::int64_t residue, std::int64_t q, bool& exact) {
  auto const g = std::gcd(residue, q);
  std::int64_t const r = residue / g;
  std::int64_t const d = q / g;
  exact = true;
  switch (d) {
    case 1: return 0;
    case 2: return 4;
    case 3: return 3;
    case 4: return 2;
    case 6: return 1;
    default: break;
  }
  exact = false;
  mpfr_t x, pi;
  mpfr_inits2(256, x, pi, static_cast<mpfr_ptr>(nullptr));
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_mul_si(x, pi, 2 * r, MPFR_RNDN);
  mpfr_div_si(x, x, d, MPFR_RNDN);
  mpfr_cos(x, x, MPFR_RNDN);
  mpfr_mul_si(x, x, -2, MPFR_RNDN);
  mpfr_add_si(x, x, 2, MPFR_RNDN);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, kChordDecimalDigits);
  mpfr_mul_z(x, x, scale.get_mpz_t(), MPFR_RNDN);
  Integer rounded;
  mpfr_get_z(rounded.get_mpz_t(), x, MPFR_RNDN);
  mpfr_clears(x, pi, static_cast<mpfr_ptr>(nullptr));
  Rational out(rounded, scale);
  out.canonicalize();
  return out;
}

/// |exp(i tau 2^n) - 1|^2 for n = first..last, from the residues 2^n p mod q.
inline std::vector<ChordDistance> orbit_distance_profile(DyadicAngle const& tau, std::size_t first,
                                                         std::size_t last) {
  if (first > last) throw std::invalid_argument("profile range is empty");
  std::int64_t const q = tau.q();
  std::int64_t residue = mod_floor(tau.p(), q);
  std::vector<ChordDistance> out;
  for (std::size_t n = 0; n <= last; ++n) {
    if (n >= first) {
      bool exact = true;
      auto value = squared_chord(residue, q, exact);
      out.push_back({n, residue, std::move(value), exact});
    }
    residue = static_cast<std::int64_t>((static_cast<__int128>(residue) * 2) % q);
  }
  return out;
}

/// The residues 2^n p mod q until the first repeat: a preperiod followed by
/// a cycle. Dyadic angles end in the fixed point 0.
struct ResidueCycle {
  std::vector<std::int64_t> preperiod;
  std::vector<std::int64_t> cycle;
};

inline ResidueCycle residue_cycle(DyadicAngle const& tau) {
  std::int64_t const q = tau.q();
  std::vector<std::int64_t> seen;
  std::int64_t residue = mod_floor(tau.p(), q);
  while (std::find(seen.begin(), seen.end(), residue) == seen.end()) {
    seen.push_back(residue);
    residue = static_cast<std::int64_t>((static_cast<__int128>(residue) * 2) % q);
  }
  auto const start = std::find(seen.begin(), seen.end(), residue);
  return {std::vector<std::int64_t>(seen.begin(), start), std::vector<std::int64_t>(start, seen.end())};
}

/// sum_j exp(-2 pi i e_j / order) p_j over the depth-n blocks G_j.
struct RootOfUnityFunction {
  std::size_t depth = 0;
  std::uint64_t order = 1;
  std::vector<std::uint64_t> exponents;

  /// Pointwise product: exponents add.
  friend RootOfUnityFunction operator*(RootOfUnityFunction const& x, RootOfUnityFunction const& y) {
    if (x.depth != y.depth || x.order != y.order) throw std::invalid_argument("mismatched unitaries");
    RootOfUnityFunction out = x;
    for (std::size_t j = 0; j < out.exponents.size(); ++j) {
      out.exponents[j] = (x.exponents[j] + y.exponents[j]) % x.order;
    }
    return out;
  }

  friend bool operator==(RootOfUnityFunction const&, RootOfUnityFunction const&) = default;
};

inline constexpr std::size_t kMaxEigenDepth = 24;

/// u_0 = p_0 + e^{-i tau} p_1 + ... + e^{-i (2^n - 1) tau} p_{2^n - 1} with
/// tau = 2 pi k / 2^n: block j carries exponent j k mod 2^n.
inline RootOfUnityFunction eigen_unitary(std::size_t n, std::uint64_t k) {
  if (n == 0 || n > kMaxEigenDepth) throw std::invalid_argument("eigen depth out of range");
  std::uint64_t const q = std::uint64_t{1} << n;
  if (k >= q) throw std::out_of_range("k must satisfy 0 <= k < 2^n");
  RootOfUnityFunction u{n, q, std::vector<std::uint64_t>(q)};
  for (std::uint64_t j = 0; j < q; ++j) u.exponents[j] = (j * k) % q;
  return u;
}

/// sigma(u) = e^{i tau} u with tau = 2 pi k / 2^n. Since sigma(u)(x) =
/// u(g^{-1} x) and g maps G_j onto the block of odometer_step(word j),
/// sigma(u) carries exponent e_j on that image block; the identity says it
/// equals e_{image} - k there.
inline bool verify_sigma_eigen(RootOfUnityFunction const& u, std::size_t n, std::uint64_t k) {
  if (u.depth != n || u.order != (std::uint64_t{1} << n) || u.exponents.size() != u.order) {
    throw std::invalid_argument("unitary order does not match 2^n");
  }
  std::uint64_t const q = u.order;
  for (std::uint64_t j = 0; j < q; ++j) {
    auto const image = block_of(odometer_step(index_to_word(n, j)).word).j;
    if ((u.exponents[j] + k) % q != u.exponents[image] % q) return false;
  }
  return true;
}

/// Phase of u(x, y) = u_0(x) e^{-i tau y} in turns, reduced to [0, 1).
inline Rational suspension_phase(RootOfUnityFunction const& u0, std::uint64_t k, SuspensionPoint const& z) {
  if (z.base.depth() < u0.depth) throw std::invalid_argument("sample base shallower than the unitary");
  auto const block = z.base.prefix(u0.depth).index();
  Rational const order(static_cast<unsigned long>(u0.order));
  Rational phase = -(Rational(static_cast<unsigned long>(u0.exponents[block])) +
                     Rational(static_cast<unsigned long>(k)) * z.height) /
                   order;
  return phase - Rational(floor(phase));
}

/// Phase of u(g~_s z) minus phase of u(z), in [0, 1).
inline Rational flow_phase_shift(RootOfUnityFunction const& u0, std::uint64_t k, Rational const& s,
                                 SuspensionPoint const& z) {
  Rational d = suspension_phase(u0, k, point_flow(s, z).point) - suspension_phase(u0, k, z);
  return d - Rational(floor(d));
}

/// Checks theta~_s u = e^{i tau s} u and theta~_{-s} u = e^{-i tau s} u at
/// every sample, where (theta~_s u)(z) = u(g~_{-s} z), u(x, y) = u_0(x)
/// e^{-i tau y} and tau = 2 pi k / 2^n. Exact: all phases are rational.
inline bool suspension_eigen_check(std::size_t n, std::uint64_t k, Rational const& s,
                                   std::vector<SuspensionPoint> const& samples) {
  auto const u0 = eigen_unitary(n, k);
  Rational const order(static_cast<unsigned long>(u0.order));
  Rational const tau_s = Rational(static_cast<unsigned long>(k)) * s / order;
  auto const reduce = [](Rational x) { return Rational(x - Rational(floor(x))); };
  for (auto const& z : samples) {
    // theta~_s u (z) = u(g~_{-s} z) must equal e^{i tau s} u(z)
    if (flow_phase_shift(u0, k, -s, z) != reduce(tau_s)) return false;
    if (flow_phase_shift(u0, k, s, z) != reduce(-tau_s)) return false;
  }
  return true;
}

/// 64 sample points: 8 base words of depth n + 2 (including the all-ones
/// word, whose orbit overflows) times heights 0, 1/8, ..., 7/8.
inline std::vector<SuspensionPoint> eigen_sample_grid(std::size_t n) {
  std::size_t const depth = n + 2;
  std::uint64_t const atoms = std::uint64_t{1} << depth;
  std::vector<SuspensionPoint> out;
  for (std::uint64_t b = 0; b < 8; ++b) {
    std::uint64_t const stride = atoms / 8;
    std::uint64_t const j = b == 7 ? atoms - 1 : b * stride + b % stride;
    for (unsigned i = 0; i < 8; ++i) out.emplace_back(index_to_word(depth, j), Rational(i, 8));
  }
  return out;
}

}  // namespace dyadic
