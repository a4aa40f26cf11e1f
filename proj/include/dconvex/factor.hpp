#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dconvex/vertex_set.hpp"

namespace dconvex {

// Hard ceiling on the dense table size of any single factor (entries).
inline constexpr std::size_t kMaxFactorEntries = std::size_t{1} << 26;

// Observed states, vertex index -> state index.
class EvidenceMap {
 public:
  EvidenceMap() = default;

  void set(VertexId v, std::uint32_t state) { states_[v] = state; }
  bool contains(VertexId v) const { return states_.count(v) != 0; }
  std::optional<std::uint32_t> state_of(VertexId v) const {
    auto it = states_.find(v);
    if (it == states_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  auto begin() const { return states_.begin(); }
  auto end() const { return states_.end(); }

 private:
  std::map<VertexId, std::uint32_t> states_;
};

// Dense non-negative table over an ordered variable scope. The scope is
// kept sorted ascending by vertex index and the table is laid out in
// mixed-radix order with the LAST scope variable varying fastest.
class Factor {
 public:
  // Scalar factor (empty scope) holding `value`.
  static Factor constant(double value);

  // `scope` must be strictly ascending; table length must equal the product
  // of the cardinalities.
  Factor(std::vector<VertexId> scope, std::vector<std::uint32_t> cards,
         std::vector<double> table);

  const std::vector<VertexId>& scope() const { return scope_; }
  const std::vector<std::uint32_t>& cardinalities() const { return cards_; }
  const std::vector<double>& table() const { return table_; }
  std::vector<double>& table() { return table_; }

  std::size_t size() const { return table_.size(); }
  bool in_scope(VertexId v) const;
  std::size_t position_of(VertexId v) const;  // throws ScopeError if absent
  std::uint32_t cardinality_of(VertexId v) const;

  // Strides follow the layout above: stride(last) == 1.
  std::size_t stride_at(std::size_t position) const;

  // Entry index for states given in scope order.
  std::size_t index_of(const std::vector<std::uint32_t>& states) const;

  double total_mass() const;

 private:
  std::vector<VertexId> scope_;
  std::vector<std::uint32_t> cards_;
  std::vector<double> table_;
};

// Pointwise product over the merged scope. Shared variables must agree on
// cardinality.
Factor factor_product(const Factor& a, const Factor& b);

// Sums out the listed variables; total mass is preserved.
Factor factor_marginalize(const Factor& f, const VertexSet& out);

// Slices the table at the evidence states; evidence variables leave the
// scope. Evidence on variables outside the scope is ignored.
Factor factor_reduce(const Factor& f, const EvidenceMap& evidence);

// Divides by total mass. Throws ZeroEvidenceProbabilityError on zero mass.
Factor normalized(const Factor& f);

// Per-configuration conditional from a joint: every slice over `child`'s
// states is normalized to sum 1; zero-mass configurations become uniform.
Factor conditional_from_joint(const Factor& joint, VertexId child);

}  // namespace dconvex
