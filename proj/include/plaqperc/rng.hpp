#pragma once

// Counter-based randomness: every random quantity is a pure hash of a master
// seed and a counter, so results do not depend on evaluation order or on the
// number of worker threads.

#include <cstdint>
#include <initializer_list>

#include "plaqperc/lattice.hpp"

namespace plaqperc {

// SplitMix64 finalizer; a bijective 64-bit avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Order-sensitive combination of a seed with a sequence of counters.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> counters) {
  std::uint64_t h = mix64(seed);
  for (auto c : counters) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

// Packs a cell into 64 bits: 2 bits dim, 2 bits axis, 20 bits per coordinate.
// Coordinates must lie in [-2^19, 2^19).
constexpr std::uint64_t pack_cell(const CellId& c) {
  constexpr std::uint64_t bias = 1u << 19;
  constexpr std::uint64_t mask = (1u << 20) - 1;
  std::uint64_t key = static_cast<std::uint64_t>(c.dim & 3);
  key = (key << 2) | static_cast<std::uint64_t>(c.axis & 3);
  for (int i = 0; i < 3; ++i)
    key = (key << 20) | ((static_cast<std::uint64_t>(static_cast<std::int64_t>(c.anchor[i]) +
                                                     static_cast<std::int64_t>(bias))) &
                         mask);
  return key;
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double to_unit_interval(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

constexpr double cell_uniform(std::uint64_t seed, const CellId& c) {
  return to_unit_interval(mix64(mix64(seed) ^ pack_cell(c)));
}

}  // namespace plaqperc
