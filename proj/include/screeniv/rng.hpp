#ifndef SCREENIV_RNG_HPP_
#define SCREENIV_RNG_HPP_

#include <cstdint>

namespace screeniv {

// splitmix64 finalizer; full-avalanche 64-bit hash
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent substream seed from a master seed and up to three
// indices. Subject/replicate/bootstrap streams are keyed this way so results
// do not depend on iteration order or thread scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t s = mix64(master + kGolden);
  s = mix64(s ^ (a + kGolden));
  s = mix64(s ^ (b + 2 * kGolden));
  s = mix64(s ^ (c + 3 * kGolden));
  return s;
}

// Counter-based stream (splitmix64). Uniform doubles are produced from the
// high 53 bits so the sequence is identical across platforms and compilers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform on [0, 1)
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool next_bernoulli(double p) { return next_uniform() < p; }

  // uniform integer in [0, n); multiply-shift, bias O(n / 2^64)
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace screeniv

#endif  // SCREENIV_RNG_HPP_
