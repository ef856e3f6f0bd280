#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace latred {

/* Splittable seeding: every Monte-Carlo entity (a channel, one noise draw,
   ...) gets its own generator seeded from a hash of the master seed and the
   entity's coordinates. Results then cannot depend on how work is sliced
   across threads. */

// splitmix64 finalizer (Steele, Lea & Flood 2014); bijective on 64 bits.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Fold coordinates into a stream seed, one splitmix64 step per component.
inline std::uint64_t derive_stream(std::uint64_t master,
                                   std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = master;
  for (std::uint64_t p : parts) h = mix64(h + 0x9E3779B97F4A7C15ULL + p);
  return h;
}

// Deterministic per-entity random source: standard-specified mt19937_64
// core with explicit uniform/Gaussian/bit transformations on top, so output
// sequences are identical across platforms and build modes.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t stream_seed) : engine_(stream_seed) {}

  // Uniform on (0, 1]: 53 random bits, never zero (safe under log).
  double uniform01() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller, one spare value cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double m = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586 * u2;
    spare_ = m * std::sin(a);
    has_spare_ = true;
    return m * std::cos(a);
  }

  // One fair bit; 64 bits are drawn per engine word, least significant first.
  int bit() {
    if (bits_left_ == 0) {
      bit_word_ = engine_();
      bits_left_ = 64;
    }
    const int b = static_cast<int>(bit_word_ & 1u);
    bit_word_ >>= 1;
    --bits_left_;
    return b;
  }

  std::vector<int> bits(std::size_t count) {
    std::vector<int> out(count);
    for (auto& b : out) b = bit();
    return out;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
  std::uint64_t bit_word_ = 0;
  int bits_left_ = 0;
};

}  // namespace latred
