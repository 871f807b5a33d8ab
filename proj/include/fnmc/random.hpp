#pragma once

#include <cstdint>
#include <random>

namespace fnmc {

/// Seeded pseudo-random stream with a platform-independent output sequence.
///
/// The engine is std::mt19937_64, whose raw output is fixed by the C++
/// standard. The 64-bit seed is passed through one splitmix64 round before
/// seeding so that nearby seeds give unrelated streams. All derived variates
/// (uniforms, indices, normals) are computed here rather than through the
/// standard distributions, whose algorithms are implementation-defined.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on (0, 1]; never returns 0.
  double uniform_open0() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Unbiased integer in [0, n).
  std::uint64_t index(std::uint64_t n);

  /// Standard normal via the Box-Muller transform (one cached spare).
  double normal();

  /// Seed for an independent child stream, e.g. one per chain.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fnmc
