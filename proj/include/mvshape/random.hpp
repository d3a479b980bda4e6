#pragma once

#include <cstdint>
#include <random>

namespace mvshape {

/** splitmix64 finalizer. */
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/**
 * Counter-based seed derivation: the substream for (seed, tag, index) does not
 * depend on the order in which other substreams are consumed.
 */
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                    std::uint64_t index = 0) {
  return mix64(mix64(mix64(seed) ^ tag) ^ index);
}

namespace stream {
inline constexpr std::uint64_t kIcfStarts = 0x1cf5;
inline constexpr std::uint64_t kTemplateInit = 0x7e3b;
inline constexpr std::uint64_t kSynth = 0x5e17;
inline constexpr std::uint64_t kScenario2 = 0x5c02;
inline constexpr std::uint64_t kFolds = 0xf01d;
inline constexpr std::uint64_t kClassData = 0xc1a5;
}  // namespace stream

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
  return Rng(derive_seed(seed, tag, index));
}

/** Uniform draw on [0,1). */
inline double uniform01(Rng& rng) {
  // 53 random mantissa bits; independent of the standard library's distribution code.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace mvshape
