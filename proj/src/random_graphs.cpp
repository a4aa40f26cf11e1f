#include "dconvex/random_graphs.hpp"

#include <numeric>
#include <stdexcept>

#include "dconvex/errors.hpp"

namespace dconvex {

namespace {

std::vector<std::string> numbered_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  return names;
}

void shuffle_in_place(std::vector<VertexId>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_below(rng, i)]);
  }
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t unit) {
  std::uint64_t z = master ^ (unit + 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Dag random_dag(std::size_t n, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("edge probability must be in [0,1]");
  }
  std::mt19937_64 rng(seed);
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  shuffle_in_place(order, rng);

  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (p >= 1.0 || unit_double(rng) < p) {
        edges.emplace_back(order[i], order[j]);
      }
    }
  }
  return Dag(numbered_names(n), edges);
}

Dag random_tree_dag(std::size_t n, double p_extra, std::size_t max_parents,
                    std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("tree needs at least one vertex");
  if (max_parents < 1) throw std::invalid_argument("max_parents must be >= 1");
  if (p_extra < 0.0 || p_extra > 1.0) {
    throw std::invalid_argument("edge probability must be in [0,1]");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t v = 1; v < n; ++v) {
    const auto parent = static_cast<VertexId>(uniform_below(rng, v));
    edges.emplace_back(parent, static_cast<VertexId>(v));
    indegree[v] = 1;
  }
  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  for (const auto& [u, v] : edges) present[u][v] = true;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (present[u][v] || indegree[v] >= max_parents) continue;
      if (unit_double(rng) < p_extra) {
        edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
        ++indegree[v];
      }
    }
  }
  return Dag(numbered_names(n), edges);
}

}  // namespace dconvex
