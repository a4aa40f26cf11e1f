#pragma once

// Shared row-layout conventions for the on-disk network formats.
//
// A CPT is exchanged as one row per parent configuration. Configurations
// iterate in odometer order over the parents AS LISTED (first parent
// slowest, last parent fastest); each row is the child distribution in
// declared state order. Internally a CPT is a Factor over the sorted scope
// {child} + parents with the last scope variable fastest; the helpers below
// translate between the two layouts.

#include <cstdint>
#include <vector>

#include "dconvex/errors.hpp"
#include "dconvex/factor.hpp"

namespace dconvex::detail {

inline Factor cpt_from_rows(VertexId child, std::uint32_t child_card,
                            const std::vector<VertexId>& parents,
                            const std::vector<std::uint32_t>& parent_cards,
                            const std::vector<std::vector<double>>& rows) {
  std::vector<VertexId> scope = parents;
  scope.push_back(child);
  std::vector<std::uint32_t> scope_cards = parent_cards;
  scope_cards.push_back(child_card);
  // Sort scope ascending, carrying cardinalities along.
  std::vector<std::size_t> perm(scope.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t a, std::size_t b) { return scope[a] < scope[b]; });
  std::vector<VertexId> sorted_scope;
  std::vector<std::uint32_t> sorted_cards;
  for (std::size_t i : perm) {
    sorted_scope.push_back(scope[i]);
    sorted_cards.push_back(scope_cards[i]);
  }
  std::size_t total = 1;
  for (std::uint32_t c : sorted_cards) total *= c;
  Factor f(sorted_scope, sorted_cards, std::vector<double>(total, 0.0));

  std::size_t configs = 1;
  for (std::uint32_t c : parent_cards) configs *= c;
  if (rows.size() != configs) {
    throw BifSemanticError("wrong number of CPT rows");
  }
  std::vector<std::uint32_t> parent_state(parents.size(), 0);
  std::vector<std::uint32_t> assignment(scope.size());
  for (std::size_t cfg = 0; cfg < configs; ++cfg) {
    if (rows[cfg].size() != child_card) {
      throw BifSemanticError("CPT row length does not match cardinality");
    }
    for (std::uint32_t s = 0; s < child_card; ++s) {
      for (std::size_t i = 0; i < perm.size(); ++i) {
        const std::size_t src = perm[i];
        assignment[i] =
            src < parents.size() ? parent_state[src] : s;
      }
      f.table()[f.index_of(assignment)] = rows[cfg][s];
    }
    // Advance the parent odometer, last parent fastest.
    for (std::size_t p = parents.size(); p-- > 0;) {
      if (++parent_state[p] < parent_cards[p]) break;
      parent_state[p] = 0;
    }
  }
  return f;
}

inline std::vector<std::vector<double>> rows_from_cpt(
    const Factor& cpt, VertexId child, std::uint32_t child_card,
    const std::vector<VertexId>& parents,
    const std::vector<std::uint32_t>& parent_cards) {
  std::size_t configs = 1;
  for (std::uint32_t c : parent_cards) configs *= c;
  std::vector<std::vector<double>> rows(
      configs, std::vector<double>(child_card, 0.0));
  std::vector<std::uint32_t> parent_state(parents.size(), 0);
  std::vector<std::uint32_t> assignment(cpt.scope().size());
  for (std::size_t cfg = 0; cfg < configs; ++cfg) {
    for (std::uint32_t s = 0; s < child_card; ++s) {
      for (std::size_t i = 0; i < cpt.scope().size(); ++i) {
        const VertexId var = cpt.scope()[i];
        if (var == child) {
          assignment[i] = s;
        } else {
          for (std::size_t p = 0; p < parents.size(); ++p) {
            if (parents[p] == var) assignment[i] = parent_state[p];
          }
        }
      }
      rows[cfg][s] = cpt.table()[cpt.index_of(assignment)];
    }
    for (std::size_t p = parents.size(); p-- > 0;) {
      if (++parent_state[p] < parent_cards[p]) break;
      parent_state[p] = 0;
    }
  }
  return rows;
}

}  // namespace dconvex::detail
