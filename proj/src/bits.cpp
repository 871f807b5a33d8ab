#include "fnmc/bits.hpp"

#include <algorithm>
#include <stdexcept>

namespace fnmc {

BitConfiguration::BitConfiguration(int n) : n_(n) {
  if (n < 0 || n > kMaxQubits)
    throw std::invalid_argument("BitConfiguration: qubit count out of range: " +
                                std::to_string(n));
}

BitConfiguration::BitConfiguration(int n, std::uint64_t low_word)
    : BitConfiguration(n) {
  if (n < kWordBits && (low_word >> n) != 0)
    throw std::invalid_argument("BitConfiguration: bits set beyond qubit count");
  words_[0] = low_word;
}

BitConfiguration BitConfiguration::from_string(std::string_view s) {
  BitConfiguration x(static_cast<int>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      x.set(static_cast<int>(i));
    else if (s[i] != '0')
      throw std::invalid_argument("BitConfiguration: expected '0' or '1' in \"" +
                                  std::string(s) + "\"");
  }
  return x;
}

BitConfiguration BitConfiguration::from_hex(int n, std::string_view hex) {
  BitConfiguration x(n);
  int bit = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
    const char c = *it;
    int v;
    if (c >= '0' && c <= '9')
      v = c - '0';
    else if (c >= 'a' && c <= 'f')
      v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      v = c - 'A' + 10;
    else
      throw std::invalid_argument("BitConfiguration: bad hex digit");
    for (int b = 0; b < 4; ++b) {
      if ((v >> b) & 1) {
        if (bit + b >= n)
          throw std::invalid_argument("BitConfiguration: hex value exceeds n");
        x.set(bit + b);
      }
    }
  }
  return x;
}

BitConfiguration BitConfiguration::operator^(
    const BitConfiguration& other) const noexcept {
  BitConfiguration r = *this;
  r ^= other;
  return r;
}

BitConfiguration& BitConfiguration::operator^=(
    const BitConfiguration& other) noexcept {
  for (int k = 0; k < kMaxWords; ++k) words_[k] ^= other.words_[k];
  return *this;
}

BitConfiguration BitConfiguration::operator&(
    const BitConfiguration& other) const noexcept {
  BitConfiguration r = *this;
  for (int k = 0; k < kMaxWords; ++k) r.words_[k] &= other.words_[k];
  return r;
}

std::string BitConfiguration::to_string() const {
  std::string s(static_cast<std::size_t>(n_), '0');
  for (int i = 0; i < n_; ++i)
    if (test(i)) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

std::string BitConfiguration::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const int digits = std::max(1, (n_ + 3) / 4);
  std::string s(static_cast<std::size_t>(digits), '0');
  for (int d = 0; d < digits; ++d) {
    int v = 0;
    for (int b = 0; b < 4; ++b) {
      const int i = 4 * d + b;
      if (i < n_ && test(i)) v |= 1 << b;
    }
    s[static_cast<std::size_t>(digits - 1 - d)] = kDigits[v];
  }
  return s;
}

std::size_t BitConfiguration::hash() const noexcept {
  // splitmix64 finalizer folded over the used words
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(n_);
  for (int k = 0; k < num_words(); ++k) {
    std::uint64_t z = h + words_[k] + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    h = z ^ (z >> 31);
  }
  return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const BitConfiguration& a,
                                 const BitConfiguration& b) noexcept {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  for (int k = BitConfiguration::kMaxWords - 1; k >= 0; --k)
    if (auto c = a.words_[k] <=> b.words_[k]; c != 0) return c;
  return std::strong_ordering::equal;
}

}  // namespace fnmc
