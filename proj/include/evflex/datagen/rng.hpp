#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace evflex::datagen {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

/// Stream id for a named attribute of record `index`. Distinct names give
/// unrelated streams, so adding an attribute never shifts another's draws.
std::uint64_t stream_id(std::string_view name, std::uint64_t index);

/// Philox keyed by the seed, counting through (block index, stream). Draws
/// depend only on (seed, stream, position), never on other streams.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();
  /// [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Box-Muller; the second variate of each pair is cached.
  double normal();
  /// Sum of nu squared standard normals.
  double chi_square(int nu);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace evflex::datagen
