#pragma once

#include <cstdint>
#include <random>

namespace bwclass {

using Rng = std::mt19937_64;

//! SplitMix64 finaliser.
constexpr std::uint64_t
splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

//! Derives the seed of sub-stream `stream` from a master seed.
//!
//! Every parallel unit of work (bootstrap replicate, Monte Carlo replicate,
//! study cell) owns a generator seeded with derive_seed(master, index), so
//! results do not depend on thread scheduling.
constexpr std::uint64_t
derive_seed(std::uint64_t master, std::uint64_t stream)
{
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t
derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b)
{
  return derive_seed(derive_seed(master, a), b);
}

inline Rng
make_rng(std::uint64_t seed)
{
  return Rng(seed);
}

//! Uniform draw on [0, 1).
inline double
uniform01(Rng& rng)
{
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace bwclass
