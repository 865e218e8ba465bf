#pragma once

#include <cstdint>

namespace rmscale {

// Reproducible random stream addressed by (seed, stream_id).
//
// Streams with distinct ids are statistically independent for practical
// purposes: the xoshiro256++ state is filled by running splitmix64 over a
// hash of (seed, stream_id), so there is no overlap bookkeeping and a stream
// can be reconstructed anywhere from its two ids.  Draws are pure integer
// and double arithmetic; the same (seed, stream_id) yields the same sequence
// on any platform.  A stream is value-copyable but must only ever be
// advanced by one worker at a time.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {
    std::uint64_t x = seed ^ (stream_id * 0x9e3779b97f4a7c15ULL);
    x = splitmix(x) ^ (0xbf58476d1ce4e5b9ULL * (stream_id + 1));
    for (auto& word : s_) word = splitmix(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ULL;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1): 53-bit mantissa, offset by half an
  // ulp so 0 and 1 are unreachable.  Keeps log() and the normal quantile
  // safe without per-call branches.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

 private:
  static std::uint64_t splitmix(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t s_[4];
};

}  // namespace rmscale
