#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace fnmc {

/// Computational basis state of up to kMaxQubits qubits, bit-packed.
///
/// Qubit i (0-based) lives in bit (i % 64) of word (i / 64). Site k of the
/// usual 1-based notation "x_1 x_2 ... x_n" is qubit k-1, so the string
/// "1010" has qubits 0 and 2 set. Unused high bits are always zero, which
/// keeps equality, hashing and ordering consistent.
class BitConfiguration {
 public:
  static constexpr int kWordBits = 64;
  static constexpr int kMaxWords = 4;
  static constexpr int kMaxQubits = kWordBits * kMaxWords;

  using Words = std::array<std::uint64_t, kMaxWords>;

  BitConfiguration() = default;
  explicit BitConfiguration(int n);
  BitConfiguration(int n, std::uint64_t low_word);

  /// Parses "x_1 x_2 ... x_n" from a string of '0'/'1' characters.
  static BitConfiguration from_string(std::string_view s);
  /// Parses the hex rendering produced by to_hex().
  static BitConfiguration from_hex(int n, std::string_view hex);

  int size() const noexcept { return n_; }
  int num_words() const noexcept { return (n_ + kWordBits - 1) / kWordBits; }

  bool test(int i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }
  void set(int i, bool value = true) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (value)
      words_[i / kWordBits] |= mask;
    else
      words_[i / kWordBits] &= ~mask;
  }
  void flip(int i) noexcept {
    words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits);
  }
  /// Exchanges the values of qubits i and j.
  void swap_bits(int i, int j) noexcept {
    if (test(i) != test(j)) {
      flip(i);
      flip(j);
    }
  }

  int hamming_weight() const noexcept {
    int w = 0;
    for (int k = 0; k < num_words(); ++k) w += std::popcount(words_[k]);
    return w;
  }

  std::uint64_t word(int k) const noexcept { return words_[k]; }
  const Words& words() const noexcept { return words_; }

  /// Bitwise xor; both operands must have the same size.
  BitConfiguration operator^(const BitConfiguration& other) const noexcept;
  BitConfiguration& operator^=(const BitConfiguration& other) noexcept;
  BitConfiguration operator&(const BitConfiguration& other) const noexcept;

  /// Parity of popcount(this & mask).
  bool parity_with(const BitConfiguration& mask) const noexcept {
    std::uint64_t acc = 0;
    for (int k = 0; k < num_words(); ++k) acc ^= words_[k] & mask.words_[k];
    return std::popcount(acc) & 1;
  }

  bool any() const noexcept {
    for (int k = 0; k < num_words(); ++k)
      if (words_[k]) return true;
    return false;
  }

  /// '0'/'1' string, qubit 0 first.
  std::string to_string() const;
  /// Hex of the packed integer (qubit 0 = least significant bit), most
  /// significant nibble first, ceil(n/4) digits.
  std::string to_hex() const;

  /// Index in [0, 2^n) with qubit 0 as the least significant bit; n <= 64.
  std::uint64_t to_index() const noexcept { return words_[0]; }

  std::size_t hash() const noexcept;

  friend bool operator==(const BitConfiguration& a,
                         const BitConfiguration& b) noexcept = default;
  /// Lexicographic by qubit count, then packed integer value.
  friend std::strong_ordering operator<=>(const BitConfiguration& a,
                                          const BitConfiguration& b) noexcept;

 private:
  Words words_{};
  int n_ = 0;
};

struct BitConfigurationHash {
  std::size_t operator()(const BitConfiguration& x) const noexcept {
    return x.hash();
  }
};

}  // namespace fnmc

template <>
struct std::hash<fnmc::BitConfiguration> : fnmc::BitConfigurationHash {};
