#pragma once

#include <cstdint>

namespace dickman {

// Counter-based stream derivation on top of xoshiro256++.
//
// A stream is addressed by (master_seed, stream_index) and optionally split
// once more by a sample counter. The four words of engine state are produced
// by chaining the splitmix64 finalizer over the address words, so any
// (master, index, counter) triple can be opened directly, in any order, on
// any worker: identical addresses give bit-identical output regardless of
// how work is partitioned.

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index,
            std::uint64_t counter = 0) {
    using detail::mix64;
    std::uint64_t key = master_seed;
    key = mix64(key ^ (stream_index * 0xd1342543de82ef95ULL));
    key = mix64(key ^ (counter * 0xaf251af3b0f025b5ULL));
    for (int i = 0; i < 4; ++i) s_[i] = mix64(key + detail::kGolden * i);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  // Independent substream addressed relative to this stream's identity.
  RngStream substream(std::uint64_t counter) const {
    RngStream r = *this;
    std::uint64_t key = detail::mix64(s_[0] ^ (counter * 0xaf251af3b0f025b5ULL));
    for (int i = 0; i < 4; ++i) r.s_[i] = detail::mix64(key + detail::kGolden * i);
    if ((r.s_[0] | r.s_[1] | r.s_[2] | r.s_[3]) == 0) r.s_[0] = 1;
    return r;
  }

  std::uint64_t next_u64() {
    using detail::rotl;
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

  // Uniform on [0, 1), 53-bit resolution.
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe under log().
  double u01_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return u01() < p; }

  // Uniform integer in [0, n), n >= 1 (Lemire's multiply-shift with
  // rejection).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = -n % n;
      while (lo < t) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace dickman
