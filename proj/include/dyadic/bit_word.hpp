#pragma once

// Finite prefixes of points of Omega = {0,1}^N and the dyadic odometer.
//
// Coordinate order: element 0 of a BitWord is the first coordinate x_1 and is
// the least significant binary digit. The odometer adds 1 at x_1 and carries
// toward higher coordinates, so a depth-n word (k_1, ..., k_n) is the integer
// k_1 + 2 k_2 + ... + 2^(n-1) k_n. Text form lists x_1 first: "110" is 3.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dyadic {

class BitWord {
 public:
  BitWord() = default;

  explicit BitWord(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
      if (b > 1) throw std::invalid_argument("bit word entries must be 0 or 1");
    }
  }

  /// Parses a string of '0'/'1' characters, x_1 first.
  static BitWord parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') {
        throw std::invalid_argument("bit word must contain only '0' and '1': '" +
                                    std::string(text) + "'");
      }
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BitWord(std::move(bits));
  }

  static BitWord zeros(std::size_t depth) { return BitWord(std::vector<std::uint8_t>(depth, 0)); }
  static BitWord ones(std::size_t depth) { return BitWord(std::vector<std::uint8_t>(depth, 1)); }

  std::size_t depth() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  /// Coordinate x_{i+1}.
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }

  std::vector<std::uint8_t> const& bits() const noexcept { return bits_; }

  std::size_t count_ones() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
  }
  std::size_t count_zeros() const noexcept { return depth() - count_ones(); }

  bool all_ones() const noexcept {
    return std::all_of(bits_.begin(), bits_.end(), [](auto b) { return b == 1; });
  }

  /// Integer with binary digits x_1 (least significant) .. x_n. Depth <= 63.
  std::uint64_t index() const {
    if (depth() > 63) throw std::out_of_range("bit word too deep for an integer index");
    std::uint64_t j = 0;
    for (std::size_t i = depth(); i-- > 0;) j = (j << 1) | bits_[i];
    return j;
  }

  /// First `n` coordinates.
  BitWord prefix(std::size_t n) const {
    if (n > depth()) throw std::out_of_range("prefix longer than word");
    return BitWord(std::vector<std::uint8_t>(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n)));
  }

  /// This word followed by `tail` (tail coordinates come after x_n).
  BitWord concat(BitWord const& tail) const {
    auto out = bits_;
    out.insert(out.end(), tail.bits_.begin(), tail.bits_.end());
    return BitWord(std::move(out));
  }

  std::string str() const {
    std::string s;
    s.reserve(depth());
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  friend bool operator==(BitWord const&, BitWord const&) = default;
  friend auto operator<=>(BitWord const&, BitWord const&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Image of a cylinder prefix under an odometer power.
///
/// `word` is the within-prefix result. `tail_steps` counts how many odometer
/// steps the coordinates beyond the prefix undergo: 0 means the carry (or
/// borrow) was absorbed inside the prefix, nonzero means it escaped. A single
/// odometer step overflows exactly on the all-ones prefix, which is the
/// finite-depth shadow of g(1,1,1,...) = (0,0,0,...).
struct CarryResult {
  BitWord word;
  std::int64_t tail_steps = 0;

  bool resolved() const noexcept { return tail_steps == 0; }
  bool overflow() const noexcept { return tail_steps != 0; }

  friend bool operator==(CarryResult const&, CarryResult const&) = default;
};

inline void require_nonempty(BitWord const& w) {
  if (w.empty()) throw std::invalid_argument("odometer needs a word of depth >= 1");
}

/// One application of g: leading 1s become 0 up to and including the first
/// 0, which becomes 1.
inline CarryResult odometer_step(BitWord const& w) {
  require_nonempty(w);
  auto bits = w.bits();
  for (auto& b : bits) {
    if (b == 0) {
      b = 1;
      return {BitWord(std::move(bits)), 0};
    }
    b = 0;
  }
  return {BitWord(std::move(bits)), 1};
}

/// g^{-1}: leading 0s become 1 up to and including the first 1, which
/// becomes 0.
inline CarryResult odometer_inverse_step(BitWord const& w) {
  require_nonempty(w);
  auto bits = w.bits();
  for (auto& b : bits) {
    if (b == 1) {
      b = 0;
      return {BitWord(std::move(bits)), 0};
    }
    b = 1;
  }
  return {BitWord(std::move(bits)), -1};
}

/// g^k by binary addition of the digits of k with carry toward higher
/// coordinates; negative k by binary subtraction with borrow. Digits of |k|
/// above the prefix, plus any escaping carry, land in `tail_steps`.
inline CarryResult odometer_pow(std::int64_t k, BitWord const& w) {
  require_nonempty(w);
  std::uint64_t const magnitude =
      k < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(k);
  auto const digit = [magnitude](std::size_t i) -> unsigned {
    return i < 64 ? static_cast<unsigned>((magnitude >> i) & 1U) : 0U;
  };
  std::size_t const n = w.depth();
  std::vector<std::uint8_t> out(n);
  unsigned carry = 0;
  if (k >= 0) {
    for (std::size_t i = 0; i < n; ++i) {
      unsigned const s = w[i] + digit(i) + carry;
      out[i] = static_cast<std::uint8_t>(s & 1U);
      carry = s >> 1;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      int d = static_cast<int>(w[i]) - static_cast<int>(digit(i)) - static_cast<int>(carry);
      carry = d < 0 ? 1U : 0U;
      out[i] = static_cast<std::uint8_t>(d < 0 ? d + 2 : d);
    }
  }
  std::uint64_t const high = n < 64 ? (magnitude >> n) : 0;
  auto const escaped = static_cast<std::int64_t>(high + carry);
  return {BitWord(std::move(out)), k >= 0 ? escaped : -escaped};
}

/// Position (1-based) of the first 0, i.e. the n with w a prefix of a point
/// of K_n. Empty for the all-ones prefix of k_0 = (1,1,1,...).
inline std::optional<std::size_t> first_zero_index(BitWord const& w) {
  require_nonempty(w);
  for (std::size_t i = 0; i < w.depth(); ++i) {
    if (w[i] == 0) return i + 1;
  }
  return std::nullopt;
}

/// The block G_j of points whose first `depth` coordinates spell j in binary.
struct BlockIndex {
  std::size_t depth = 0;
  std::uint64_t j = 0;

  friend bool operator==(BlockIndex const&, BlockIndex const&) = default;
};

inline BlockIndex block_of(BitWord const& w) { return {w.depth(), w.index()}; }

inline BitWord index_to_word(std::size_t depth, std::uint64_t j) {
  if (depth > 63 || (depth < 64 && j >> depth != 0)) {
    throw std::out_of_range("block index " + std::to_string(j) + " out of range for depth " +
                            std::to_string(depth));
  }
  std::vector<std::uint8_t> bits(depth);
  for (std::size_t i = 0; i < depth; ++i) bits[i] = static_cast<std::uint8_t>((j >> i) & 1U);
  return BitWord(std::move(bits));
}

inline BitWord index_to_word(BlockIndex const& b) { return index_to_word(b.depth, b.j); }

}  // namespace dyadic
