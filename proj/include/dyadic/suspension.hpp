#pragma once

// The flow under the constant ceiling function 1 on Omega x [0, 1).
//
// Points move by g~_s(x, y) = (g^n x, y') with s + y = n + y'. States are
// cylinder states tensored with step densities on the dyadic cells
// [i/2^m, (i+1)/2^m); each cell carries mass, Lebesgue-distributed inside.

#include <dyadic/bit_word.hpp>
#include <dyadic/measure.hpp>
#include <dyadic/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyadic {

struct SuspensionPoint {
  BitWord base;
  Rational height;

  SuspensionPoint(BitWord b, Rational y) : base(std::move(b)), height(std::move(y)) {
    height.canonicalize();
    if (sgn(height) < 0 || height >= 1) throw std::invalid_argument("height must lie in [0, 1)");
  }

  friend bool operator==(SuspensionPoint const&, SuspensionPoint const&) = default;
};

struct FlowImage {
  SuspensionPoint point;
  /// Odometer steps applied beyond the base prefix, as in CarryResult.
  std::int64_t tail_steps = 0;
};

/// g~_s(x, y). The integer part of s + y moves the base through odometer_pow;
/// the fractional part is the new height.
inline FlowImage point_flow(Rational const& s, SuspensionPoint const& p) {
  Rational const total = s + p.height;
  Integer const whole = floor(total);
  if (!whole.fits_slong_p()) throw std::overflow_error("flow time too large");
  Rational const fraction = total - Rational(whole);
  auto const steps = static_cast<std::int64_t>(whole.get_si());
  if (p.base.empty()) return {SuspensionPoint(p.base, fraction), steps};
  auto moved = odometer_pow(steps, p.base);
  return {SuspensionPoint(std::move(moved.word), fraction), moved.tail_steps};
}

/// Cells [i/2^m, (i+1)/2^m), 0 <= i < 2^m.
struct DyadicPartition {
  std::size_t m = 0;

  std::uint64_t cells() const { return std::uint64_t{1} << m; }

  std::uint64_t cell_of(Rational const& y) const {
    if (sgn(y) < 0 || y >= 1) throw std::invalid_argument("height must lie in [0, 1)");
    return floor(y * pow2(static_cast<unsigned>(m))).get_ui();
  }

  Rational left(std::uint64_t i) const { return Rational(Integer(i)) / pow2(static_cast<unsigned>(m)); }
};

/// Checks sigma~_k = sigma^k (x) Id on every depth-D word and every cell of
/// the depth-m partition: the base moves by odometer_pow(k) and the height
/// keeps its cell. Heights are probed at each cell's left end and midpoint.
inline bool integer_time_factorization_check(std::int64_t k, std::size_t base_depth, std::size_t m) {
  if (base_depth == 0) throw std::invalid_argument("base depth must be >= 1");
  DyadicPartition const cells{m};
  Rational const half_cell = Rational(1, 2) / pow2(static_cast<unsigned>(m));
  for (std::uint64_t j = 0; j < atoms_at(base_depth); ++j) {
    auto const word = index_to_word(base_depth, j);
    auto const expected = odometer_pow(k, word);
    for (std::uint64_t i = 0; i < cells.cells(); ++i) {
      for (Rational const& y : {cells.left(i), Rational(cells.left(i) + half_cell)}) {
        auto const image = point_flow(Rational(static_cast<long>(k)), SuspensionPoint(word, y));
        if (image.point.base != expected.word || image.tail_steps != expected.tail_steps) return false;
        if (image.point.height != y || cells.cell_of(image.point.height) != i) return false;
      }
    }
  }
  return true;
}

/// omega o F~_m: weights over (depth-n word, cell) pairs with mu_a tails on
/// Omega and Lebesgue measure inside each cell. Stored word-major:
/// index = word * 2^m + cell.
class SuspensionState {
 public:
  SuspensionState(BernoulliParam param, std::size_t base_depth, std::size_t time_depth,
                  std::vector<Rational> weights)
      : param_(std::move(param)), base_depth_(base_depth), time_depth_(time_depth), weights_(std::move(weights)) {
    if (weights_.size() != atoms_at(base_depth_ + time_depth_)) {
      throw invalid_state("suspension state needs 2^(base_depth + time_depth) weights");
    }
    Rational total = 0;
    for (auto& w : weights_) {
      w.canonicalize();
      if (sgn(w) < 0) throw invalid_state("state weights must be nonnegative");
      total += w;
    }
    if (total != 1) throw invalid_state("state weights must sum to 1, got " + to_string(total));
  }

  /// omega (x) Lebesgue on a single cell.
  static SuspensionState from_base(CylinderState const& omega) {
    return {omega.param(), omega.depth(), 0, omega.weights()};
  }

  BernoulliParam const& param() const noexcept { return param_; }
  std::size_t base_depth() const noexcept { return base_depth_; }
  std::size_t time_depth() const noexcept { return time_depth_; }
  std::uint64_t cells() const { return std::uint64_t{1} << time_depth_; }
  std::vector<Rational> const& weights() const noexcept { return weights_; }

  Rational const& weight(std::uint64_t word, std::uint64_t cell) const { return weights_.at(word * cells() + cell); }

  /// omega_i(1): total mass of cell i.
  Rational slice_mass(std::uint64_t cell) const {
    Rational total = 0;
    for (std::uint64_t w = 0; w < atoms_at(base_depth_); ++w) total += weight(w, cell);
    return total;
  }

  /// omega_i / omega_i(1) as a state on the base. Requires nonzero mass.
  CylinderState normalized_slice(std::uint64_t cell) const {
    Rational const mass = slice_mass(cell);
    if (sgn(mass) == 0) throw std::invalid_argument("slice has zero mass");
    std::vector<Rational> weights(atoms_at(base_depth_));
    for (std::uint64_t w = 0; w < weights.size(); ++w) weights[w] = weight(w, cell) / mass;
    return {param_, base_depth_, std::move(weights)};
  }

 private:
  BernoulliParam param_;
  std::size_t base_depth_;
  std::size_t time_depth_;
  std::vector<Rational> weights_;
};

/// F_{m'}: merges sibling cells down to the depth-m' partition.
inline SuspensionState project_height(SuspensionState const& phi, std::size_t coarse_depth) {
  if (coarse_depth > phi.time_depth()) {
    throw std::invalid_argument("cannot project onto a finer partition");
  }
  std::uint64_t const coarse_cells = std::uint64_t{1} << coarse_depth;
  std::size_t const merge_bits = phi.time_depth() - coarse_depth;
  std::vector<Rational> weights(atoms_at(phi.base_depth()) * coarse_cells);
  for (std::uint64_t w = 0; w < atoms_at(phi.base_depth()); ++w) {
    for (std::uint64_t i = 0; i < phi.cells(); ++i) {
      weights[w * coarse_cells + (i >> merge_bits)] += phi.weight(w, i);
    }
  }
  return {phi.param(), phi.base_depth(), coarse_depth, std::move(weights)};
}

/// Mass of each cell and the base interval of its normalized slice.
struct SliceInterval {
  std::uint64_t cell;
  Rational mass;
  TVInterval interval;
};

inline std::vector<SliceInterval> suspension_slices_pow2(SuspensionState const& phi, std::size_t n,
                                                        std::size_t working_depth) {
  require_working_depth(phi.base_depth(), n, working_depth);
  std::vector<SliceInterval> out;
  out.reserve(phi.cells());
  for (std::uint64_t i = 0; i < phi.cells(); ++i) {
    Rational mass = phi.slice_mass(i);
    if (sgn(mass) == 0) {
      out.push_back({i, mass, TVInterval::exact(0)});
      continue;
    }
    out.push_back({i, mass, tv_pushforward_pow2(phi.normalized_slice(i), n, working_depth)});
  }
  return out;
}

/// ||phi o sigma~_(2^n) - phi|| = sum_i ||omega_i o sigma^(2^n) - omega_i||,
/// each term the slice mass times the normalized slice's interval.
inline TVInterval suspension_tv_pow2(SuspensionState const& phi, std::size_t n, std::size_t working_depth) {
  TVInterval total{0, 0};
  for (auto const& slice : suspension_slices_pow2(phi, n, working_depth)) {
    total.lo += slice.mass * slice.interval.lo;
    total.hi += slice.mass * slice.interval.hi;
  }
  return total;
}

struct FlowRow {
  std::size_t n;
  TVInterval interval;
  bool stabilized;
};

/// Intervals for n = 0..n_max. Rows with n >= base depth are exactly t = 2 - 4a.
inline std::vector<FlowRow> flow_limit_table(SuspensionState const& phi, std::size_t n_max,
                                             std::size_t working_depth) {
  if (n_max < phi.base_depth()) throw std::invalid_argument("n_max must be at least the base depth");
  std::vector<FlowRow> rows;
  auto const t = phi.param().t();
  for (std::size_t n = 0; n <= n_max; ++n) {
    auto const iv = suspension_tv_pow2(phi, n, std::max(working_depth, n + 1));
    rows.push_back({n, iv, iv.degenerate() && iv.lo == t});
  }
  return rows;
}

}  // namespace dyadic
