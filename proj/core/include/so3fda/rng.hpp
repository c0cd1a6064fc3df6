#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace so3fda {

/// Philox4x32-10 counter-based generator. The 64-bit key is the user seed;
/// the upper half of the 128-bit counter names a stream, the lower half
/// counts blocks. Substreams are derived by hashing, so every stochastic
/// operation can be handed an independent, reproducible stream regardless
/// of evaluation order.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Independent stream for child `index`; deterministic in (seed, stream, index).
  CounterRng substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace so3fda
