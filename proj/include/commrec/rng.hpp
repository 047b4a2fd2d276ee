#ifndef COMMREC_RNG_HPP_
#define COMMREC_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace commrec {

// splitmix64 finalizer, used to derive per-stream seeds.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// mt19937_64 with hand-rolled distribution transforms. The engine sequence is
// pinned by the standard; std::uniform_*_distribution is not, so we avoid it
// to keep artifacts byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, n), n >= 1. Lemire multiply-shift with rejection.
  uint64_t uniform(uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<uint64_t>(m);
    if (lo < n) {
      uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1).
  double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller. No cached spare, so draw order is a pure
  // function of call order.
  double gaussian() {
    double u1 = uniform_real();
    double u2 = uniform_real();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  // Independent deterministic substream.
  Rng fork(uint64_t stream) const { return Rng(mix64(seed_ ^ mix64(stream + 0x632be59bd9b4e019ULL))); }

  // First m indices of a partial Fisher-Yates shuffle of [0, n).
  std::vector<size_t> sample_without_replacement(size_t n, size_t m) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    if (m > n) m = n;
    for (size_t i = 0; i < m; ++i) {
      size_t j = i + static_cast<size_t>(uniform(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(m);
    return idx;
  }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace commrec

#endif  // COMMREC_RNG_HPP_
