#pragma once

#include <cstdint>
#include <random>

#include "dconvex/dag.hpp"

namespace dconvex {

// Uniform double in [0,1) from the top 53 bits of the engine output.
// mt19937_64 output is pinned by the standard, so results are identical
// across platforms; std::uniform_real_distribution is not.
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) by rejection sampling.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Stable per-unit seed derivation (splitmix64 over master ^ unit).
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t unit);

// Erdos-Renyi style DAG: vertex labels are permuted, then each pair that is
// forward in the permutation gets an edge with probability p. The
// permutation keeps edge direction uncorrelated with the label order.
// Vertices are named v0..v{n-1}.
Dag random_dag(std::size_t n, double p, std::uint64_t seed);

// Random directed spanning tree (each non-root picks one earlier vertex as
// parent) plus extra forward edges added with probability p_extra, capped at
// max_parents incoming edges per vertex.
Dag random_tree_dag(std::size_t n, double p_extra, std::size_t max_parents,
                    std::uint64_t seed);

}  // namespace dconvex
