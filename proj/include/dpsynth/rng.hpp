#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dpsynth {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seeded random stream. Named substreams let independent pipeline phases
// (per column, per row, per attack) draw reproducibly regardless of the
// order in which they run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

  // Uniform on the open interval (0,1); never returns an exact endpoint.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  std::uint64_t next() { return gen_(); }

  // Uniform integer in [0, n).
  std::size_t below(std::size_t n) {
    auto v = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return v >= n ? n - 1 : v;
  }

  Rng substream(std::string_view label) const {
    return Rng(splitmix64(seed_ ^ fnv1a64(label)));
  }
  Rng substream(std::uint64_t index) const {
    return Rng(splitmix64(seed_ ^ splitmix64(index + 0x51ed2701)));
  }

  std::mt19937_64& engine() { return gen_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace dpsynth
