#pragma once

#include <cstdint>
#include <random>

namespace cdrlab {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds from (seed, tag).
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix_seed(mix_seed(seed) ^ (tag * 0xd1b54a32d192ed03ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return derive_seed(derive_seed(seed, tag), index + 1);
}

// Stream tags; keep stable, they define reproducibility of stored runs.
namespace stream {
inline constexpr std::uint64_t kEnvTarget = 1;
inline constexpr std::uint64_t kEnvDraw = 2;
inline constexpr std::uint64_t kEnvNoise = 3;
inline constexpr std::uint64_t kInit = 10;
inline constexpr std::uint64_t kPhaseTrain = 11;
inline constexpr std::uint64_t kFisher = 12;
inline constexpr std::uint64_t kEval = 13;
}  // namespace stream

}  // namespace cdrlab
