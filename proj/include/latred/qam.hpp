#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "latred/errors.hpp"

namespace latred {

/* Square QAM as two independent Gray-coded PAM dimensions. Levels per real
   dimension are the odd integers {-(q-1), ..., q-1} with q = sqrt(M); the
   shifted-integer domain used by the lattice machinery maps level l to
   (l + q - 1) / 2, i.e. the consecutive integers {0, ..., q-1}. */
struct QamSpec {
  int m = 4;                    // constellation order
  int bits_per_dim = 1;         // log2(M) / 2
  std::vector<int> pam_levels;  // indexed by shifted-domain value
  double es = 2.0;              // mean symbol energy per complex symbol
};

inline QamSpec make_qam(int m) {
  if (m != 4 && m != 16)
    throw ParameterError("QAM order must be 4 or 16");
  QamSpec spec;
  spec.m = m;
  const int q = (m == 4) ? 2 : 4;
  spec.bits_per_dim = (m == 4) ? 1 : 2;
  spec.pam_levels.resize(q);
  double energy = 0.0;
  for (int t = 0; t < q; ++t) {
    spec.pam_levels[t] = 2 * t - (q - 1);
    energy += static_cast<double>(spec.pam_levels[t] * spec.pam_levels[t]);
  }
  spec.es = 2.0 * energy / q;  // two real dimensions per complex symbol
  return spec;
}

namespace detail {

// Binary-reflected Gray code and its inverse, on bits_per_dim-bit values.
inline int gray_encode(int t) { return t ^ (t >> 1); }
inline int gray_decode(int g) {
  int t = g;
  for (int shift = 1; (g >> shift) != 0; ++shift) t ^= g >> shift;
  return t;
}

}  // namespace detail

/* Map a bit string to shifted-domain symbols, bits_per_dim bits per real
   dimension, most significant bit first. The Gray labeling makes adjacent
   levels differ in one bit (for 16-QAM: 00 -> -3, 01 -> -1, 11 -> 1,
   10 -> 3). */
inline std::vector<long long> qam_encode(const std::vector<int>& bits,
                                         const QamSpec& spec) {
  const std::size_t b = static_cast<std::size_t>(spec.bits_per_dim);
  if (bits.size() % b != 0)
    throw ParameterError("bit count must be a multiple of bits per dimension");
  std::vector<long long> out(bits.size() / b);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int g = 0;
    for (std::size_t j = 0; j < b; ++j) g = (g << 1) | (bits[i * b + j] & 1);
    out[i] = detail::gray_decode(g);
  }
  return out;
}

inline std::vector<int> qam_decode(const std::vector<long long>& x,
                                   const QamSpec& spec) {
  const int b = spec.bits_per_dim;
  std::vector<int> bits(x.size() * static_cast<std::size_t>(b));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long long t = x[i];
    if (t < 0 || t >= static_cast<long long>(spec.pam_levels.size()))
      throw ParameterError("symbol outside the constellation range");
    const int g = detail::gray_encode(static_cast<int>(t));
    for (int j = 0; j < b; ++j)
      bits[i * static_cast<std::size_t>(b) + static_cast<std::size_t>(j)] =
          (g >> (b - 1 - j)) & 1;
  }
  return bits;
}

/* Noise level for a bit-energy-to-noise-density ratio in dB:
   N0 = Es / (log2(M) * 10^(dB/10)), sigma = sqrt(N0 / 2) per real
   dimension. */
inline double ebn0_to_sigma(double ebn0_db, const QamSpec& spec) {
  const double bits_per_symbol = std::log2(static_cast<double>(spec.m));
  const double n0 =
      spec.es / (bits_per_symbol * std::pow(10.0, ebn0_db / 10.0));
  return std::sqrt(n0 / 2.0);
}

}  // namespace latred
