#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dconvex/dag.hpp"
#include "dconvex/dag_ops.hpp"
#include "dconvex/factor.hpp"
#include "dconvex/vertex_set.hpp"

namespace dconvex {

inline constexpr std::size_t kDefaultJointCap = std::size_t{1} << 20;

// Complete-assignment rows, one state per vertex, column order = vertex
// index order.
class Dataset {
 public:
  explicit Dataset(std::size_t columns) : columns_(columns) {}

  std::size_t columns() const { return columns_; }
  std::size_t rows() const { return columns_ ? values_.size() / columns_ : 0; }
  bool empty() const { return values_.empty(); }

  void append_row(std::span<const std::uint32_t> row);
  std::span<const std::uint32_t> row(std::size_t i) const {
    return {values_.data() + i * columns_, columns_};
  }

  // New dataset whose column j is this dataset's column `columns[j]`.
  Dataset select(const std::vector<VertexId>& columns) const;

 private:
  std::size_t columns_;
  std::vector<std::uint32_t> values_;
};

// Discrete Bayesian network: DAG + per-vertex cardinalities + one CPT per
// vertex, stored as a Factor over {v} and its parents. Every CPT slice over
// the child's states sums to 1 within kRowTolerance.
class DiscreteBn {
 public:
  static constexpr double kRowTolerance = 1e-12;

  DiscreteBn(Dag dag, std::vector<std::uint32_t> cardinalities,
             std::vector<Factor> cpts);

  const Dag& dag() const { return dag_; }
  std::size_t vertex_count() const { return dag_.vertex_count(); }
  std::uint32_t cardinality(VertexId v) const { return cards_.at(v); }
  const std::vector<std::uint32_t>& cardinalities() const { return cards_; }
  const Factor& cpt(VertexId v) const { return cpts_.at(v); }

  friend bool operator==(const DiscreteBn& a, const DiscreteBn& b);

 private:
  Dag dag_;
  std::vector<std::uint32_t> cards_;
  std::vector<Factor> cpts_;
};

// Seeded network with Dirichlet(1,...,1) CPT rows over the given structure.
DiscreteBn random_cpts(const Dag& dag, const std::vector<std::uint32_t>& cards,
                       std::uint64_t seed);

// Deterministic min-fill elimination order (ties: degree, then index) for
// the variables outside query and evidence.
std::vector<VertexId> elimination_order(const DiscreteBn& bn,
                                        const VertexSet& query,
                                        const EvidenceMap& evidence);

// Normalized conditional P(query | evidence) as a factor over `query`.
Factor variable_elimination(const DiscreteBn& bn, const VertexSet& query,
                            const EvidenceMap& evidence);

// Test oracle: the full joint as one factor. Guarded by `max_states`.
Factor joint_enumerate(const DiscreteBn& bn,
                       std::size_t max_states = kDefaultJointCap);

// Network over the induced subgraph on a d-convex hull whose joint equals
// the global marginal. CPTs of vertices with unchanged parent sets are
// copied; the rest are recomputed by inference on the global network.
struct LocalizedBn {
  DiscreteBn bn;
  std::vector<VertexId> to_original;    // local index -> global index
  std::vector<VertexId> from_original;  // global index -> local or kNoVertex
};

// Cache of recomputed conditionals keyed by (vertex, local parent set),
// scopes in global indices. Unbounded.
using CptCache = std::map<std::pair<VertexId, std::vector<VertexId>>, Factor>;

LocalizedBn localize_from_global(const DiscreteBn& bn, const VertexSet& hull,
                                 CptCache* cache = nullptr);

// Ancestral sampling in topological order; reproducible per seed.
Dataset forward_sample(const DiscreteBn& bn, std::size_t count,
                       std::uint64_t seed);

// Maximum-likelihood CPTs with additive smoothing:
// (count + smoothing) / (config count + smoothing * cardinality).
DiscreteBn mle_fit(const Dag& structure,
                   const std::vector<std::uint32_t>& cards,
                   const Dataset& data, double smoothing = 1.0);

// Exact KL(p || q) over the enumerated joint. Conventions: terms with
// p(x) = 0 contribute 0; p(x) > 0 with q(x) = 0 yields +infinity.
double kl_divergence(const DiscreteBn& p, const DiscreteBn& q,
                     std::size_t max_states = kDefaultJointCap);

}  // namespace dconvex
