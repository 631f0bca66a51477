#pragma once

#include <array>
#include <cstdint>

namespace expphi2 {

/// Philox4x32-10 block cipher (counter-based RNG primitive).
/// One block maps a 128-bit counter and 64-bit key to 128 random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream. Distinct (master_seed, stream_id) pairs give
/// statistically independent streams; the same pair replays the identical
/// sequence regardless of host or thread. State is three integers, so streams
/// are cheap to create per replicate.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : seed_(master_seed), stream_(stream_id) {}

  std::uint64_t master_seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();

  /// Uniform on (0,1], safe as a log argument.
  double uniform();

  /// Standard normal via Box-Muller (pairs generated, one cached).
  double normal();
  std::array<double, 2> normal_pair();

  /// Uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int buf_pos_ = 2;  // empty
  double cached_normal_ = 0.0;
  bool have_normal_ = false;
};

}  // namespace expphi2
