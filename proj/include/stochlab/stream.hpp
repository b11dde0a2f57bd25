#pragma once

#include <cstdint>

namespace stochlab {

// Deterministic splitmix64 generator addressed by (seed, stream_id).
// Substreams derive from the constructor parameters, not the mutable state,
// so a parent stream can hand out reproducible child streams regardless of
// how many values it has already produced.  This is what makes the serial
// and parallel Monte Carlo paths bit-identical: replica r always draws from
// substream(r).
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    state_ = scramble(seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]: (k + 1) * 2^-53 with k drawn from 53 bits.  The value
  // is always a dyadic rational, so callers may convert it to an exact
  // Rational; excluding 0 keeps logarithms and cumulative inversion safe.
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  SeededStream substream(std::uint64_t child) const {
    return SeededStream(scramble(seed_ ^ scramble(stream_id_ + 1)), child);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  static std::uint64_t scramble(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
    z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
    return z ^ (z >> 33);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
};

}  // namespace stochlab
