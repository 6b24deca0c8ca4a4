#ifndef PFDR_RNG_HPP
#define PFDR_RNG_HPP

#include <cstdint>

namespace pfdr {

/// Counter-based random stream keyed by (seed, stream id).
///
/// Draw k of a stream is a pure function of (seed, stream id, k), computed
/// with integer arithmetic only, so sequences are identical across platforms
/// and compilers. Learners, the combiner and the environment each take their
/// own stream id under a shared run seed. Distribution helpers avoid the
/// standard library distributions, whose output is implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t position() const { return counter_; }

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n); n > 0. Unbiased (Lemire rejection).
  std::uint64_t below(std::uint64_t n);
  /// +1 or -1 with equal probability.
  int sign();
  /// Standard normal via Box-Muller (one draw per call).
  double normal();

  /// Independent child stream derived from this stream's key.
  RngStream split(std::uint64_t child) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace pfdr

#endif  // PFDR_RNG_HPP
