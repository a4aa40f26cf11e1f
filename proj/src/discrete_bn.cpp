#include "dconvex/discrete_bn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "dconvex/convexity.hpp"
#include "dconvex/errors.hpp"
#include "dconvex/random_graphs.hpp"

namespace dconvex {

void Dataset::append_row(std::span<const std::uint32_t> row) {
  if (row.size() != columns_) {
    throw std::invalid_argument("row width does not match dataset columns");
  }
  values_.insert(values_.end(), row.begin(), row.end());
}

Dataset Dataset::select(const std::vector<VertexId>& columns) const {
  Dataset out(columns.size());
  std::vector<std::uint32_t> buffer(columns.size());
  for (std::size_t r = 0; r < rows(); ++r) {
    const auto src = row(r);
    for (std::size_t j = 0; j < columns.size(); ++j) {
      buffer[j] = src[columns[j]];
    }
    out.append_row(buffer);
  }
  return out;
}

namespace {

std::vector<VertexId> cpt_scope(const Dag& dag, VertexId v) {
  std::vector<VertexId> scope = dag.parents(v);
  scope.insert(std::lower_bound(scope.begin(), scope.end(), v), v);
  return scope;
}

}  // namespace

DiscreteBn::DiscreteBn(Dag dag, std::vector<std::uint32_t> cardinalities,
                       std::vector<Factor> cpts)
    : dag_(std::move(dag)), cards_(std::move(cardinalities)),
      cpts_(std::move(cpts)) {
  const std::size_t n = dag_.vertex_count();
  if (cards_.size() != n || cpts_.size() != n) {
    throw std::invalid_argument(
        "cardinality and CPT lists must cover every vertex");
  }
  for (VertexId v = 0; v < n; ++v) {
    const Factor& f = cpts_[v];
    if (f.scope() != cpt_scope(dag_, v)) {
      throw ScopeError("CPT scope of '" + dag_.name(v) +
                       "' must be the vertex plus its parents");
    }
    for (std::size_t i = 0; i < f.scope().size(); ++i) {
      if (f.cardinalities()[i] != cards_[f.scope()[i]]) {
        throw CardinalityMismatchError("CPT cardinalities of '" +
                                       dag_.name(v) +
                                       "' disagree with the network");
      }
    }
    for (double x : f.table()) {
      if (!(x >= 0.0) || x > 1.0 + kRowTolerance) {
        throw std::invalid_argument("CPT entry of '" + dag_.name(v) +
                                    "' outside [0,1]");
      }
    }
    VertexSet child(n);
    child.insert(v);
    const Factor row_sums = factor_marginalize(f, child);
    for (double row_sum : row_sums.table()) {
      if (std::abs(row_sum - 1.0) > kRowTolerance) {
        throw std::invalid_argument("CPT row of '" + dag_.name(v) +
                                    "' does not sum to 1");
      }
    }
  }
}

bool operator==(const DiscreteBn& a, const DiscreteBn& b) {
  if (!(a.dag_ == b.dag_) || a.cards_ != b.cards_) return false;
  for (std::size_t v = 0; v < a.cpts_.size(); ++v) {
    if (a.cpts_[v].table() != b.cpts_[v].table()) return false;
  }
  return true;
}

DiscreteBn random_cpts(const Dag& dag, const std::vector<std::uint32_t>& cards,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Strictly inside (0,1) so the exponential weights stay positive.
  auto open_unit = [&rng] {
    return (static_cast<double>(rng() >> 12) + 0.5) * 0x1.0p-52;
  };
  const std::size_t n = dag.vertex_count();
  std::vector<Factor> cpts;
  cpts.reserve(n);
  for (VertexId v = 0; v < n; ++v) {
    const std::vector<VertexId> scope = cpt_scope(dag, v);
    std::vector<std::uint32_t> scope_cards;
    std::size_t total = 1;
    for (VertexId s : scope) {
      scope_cards.push_back(cards.at(s));
      total *= cards.at(s);
    }
    Factor f(scope, scope_cards, std::vector<double>(total, 0.0));
    const std::size_t pos = f.position_of(v);
    const std::size_t stride = f.stride_at(pos);
    const std::uint32_t card = cards.at(v);
    const std::size_t block = stride * card;
    std::vector<double> weights(card);
    for (std::size_t start = 0; start < total; start += block) {
      for (std::size_t offset = 0; offset < stride; ++offset) {
        double sum = 0;
        for (std::uint32_t s = 0; s < card; ++s) {
          weights[s] = -std::log(open_unit());
          sum += weights[s];
        }
        for (std::uint32_t s = 0; s < card; ++s) {
          f.table()[start + offset + s * stride] = weights[s] / sum;
        }
      }
    }
    cpts.push_back(std::move(f));
  }
  return DiscreteBn(dag, cards, std::move(cpts));
}

namespace {

// Greedy min-fill over the interaction graph of the given scopes.
std::vector<VertexId> min_fill(std::size_t n,
                               const std::vector<std::vector<VertexId>>& scopes,
                               const VertexSet& eliminate) {
  std::vector<std::set<VertexId>> adj(n);
  for (const auto& scope : scopes) {
    for (std::size_t i = 0; i < scope.size(); ++i) {
      for (std::size_t j = i + 1; j < scope.size(); ++j) {
        adj[scope[i]].insert(scope[j]);
        adj[scope[j]].insert(scope[i]);
      }
    }
  }
  std::vector<VertexId> order;
  VertexSet remaining = eliminate;
  while (!remaining.empty()) {
    VertexId best = kNoVertex;
    std::size_t best_fill = 0, best_degree = 0;
    remaining.for_each([&](VertexId v) {
      std::size_t fill = 0;
      const std::vector<VertexId> nb(adj[v].begin(), adj[v].end());
      for (std::size_t i = 0; i < nb.size(); ++i) {
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
          if (!adj[nb[i]].count(nb[j])) ++fill;
        }
      }
      const std::size_t degree = nb.size();
      if (best == kNoVertex || fill < best_fill ||
          (fill == best_fill && degree < best_degree)) {
        best = v;
        best_fill = fill;
        best_degree = degree;
      }
    });
    order.push_back(best);
    remaining.erase(best);
    const std::vector<VertexId> nb(adj[best].begin(), adj[best].end());
    for (VertexId u : nb) adj[u].erase(best);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        adj[nb[i]].insert(nb[j]);
        adj[nb[j]].insert(nb[i]);
      }
    }
    adj[best].clear();
  }
  return order;
}

std::vector<std::vector<VertexId>> reduced_scopes(const DiscreteBn& bn,
                                                  const EvidenceMap& evidence) {
  std::vector<std::vector<VertexId>> scopes;
  scopes.reserve(bn.vertex_count());
  for (VertexId v = 0; v < bn.vertex_count(); ++v) {
    std::vector<VertexId> scope;
    for (VertexId s : bn.cpt(v).scope()) {
      if (!evidence.contains(s)) scope.push_back(s);
    }
    scopes.push_back(std::move(scope));
  }
  return scopes;
}

void check_query(const DiscreteBn& bn, const VertexSet& query,
                 const EvidenceMap& evidence) {
  if (query.universe_size() != bn.vertex_count()) {
    throw std::out_of_range("query universe does not match the network");
  }
  if (query.empty()) throw EmptyQueryError("query must be nonempty");
  for (const auto& [v, state] : evidence) {
    if (v >= bn.vertex_count()) {
      throw std::out_of_range("evidence vertex out of range");
    }
    if (state >= bn.cardinality(v)) {
      throw std::out_of_range("evidence state exceeds cardinality");
    }
    if (query.contains(v)) {
      throw OverlapError("query and evidence sets overlap");
    }
  }
}

}  // namespace

std::vector<VertexId> elimination_order(const DiscreteBn& bn,
                                        const VertexSet& query,
                                        const EvidenceMap& evidence) {
  check_query(bn, query, evidence);
  VertexSet eliminate(bn.vertex_count());
  for (VertexId v = 0; v < bn.vertex_count(); ++v) {
    if (!query.contains(v) && !evidence.contains(v)) eliminate.insert(v);
  }
  return min_fill(bn.vertex_count(), reduced_scopes(bn, evidence), eliminate);
}

Factor variable_elimination(const DiscreteBn& bn, const VertexSet& query,
                            const EvidenceMap& evidence) {
  check_query(bn, query, evidence);

  std::vector<Factor> factors;
  factors.reserve(bn.vertex_count());
  for (VertexId v = 0; v < bn.vertex_count(); ++v) {
    factors.push_back(factor_reduce(bn.cpt(v), evidence));
  }

  VertexSet eliminate(bn.vertex_count());
  for (VertexId v = 0; v < bn.vertex_count(); ++v) {
    if (!query.contains(v) && !evidence.contains(v)) eliminate.insert(v);
  }
  const std::vector<VertexId> order =
      min_fill(bn.vertex_count(), reduced_scopes(bn, evidence), eliminate);

  for (VertexId v : order) {
    Factor bucket = Factor::constant(1.0);
    std::vector<Factor> rest;
    rest.reserve(factors.size());
    for (auto& f : factors) {
      if (f.in_scope(v)) {
        bucket = factor_product(bucket, f);
      } else {
        rest.push_back(std::move(f));
      }
    }
    VertexSet out(bn.vertex_count());
    out.insert(v);
    rest.push_back(factor_marginalize(bucket, out));
    factors = std::move(rest);
  }

  Factor result = Factor::constant(1.0);
  for (const auto& f : factors) result = factor_product(result, f);
  return normalized(result);
}

Factor joint_enumerate(const DiscreteBn& bn, std::size_t max_states) {
  std::size_t states = 1;
  for (VertexId v = 0; v < bn.vertex_count(); ++v) {
    const std::uint32_t c = bn.cardinality(v);
    if (states > max_states / c) {
      throw SizeGuardError("joint of more than " + std::to_string(max_states) +
                           " states");
    }
    states *= c;
  }
  Factor joint = Factor::constant(1.0);
  for (VertexId v : bn.dag().topological_order()) {
    joint = factor_product(joint, bn.cpt(v));
  }
  return joint;
}

namespace {

// P(v | parents) computed on the global network restricted to the
// ancestral closure of {v} + parents (everything below is barren for this
// marginal). Scope of the result is in global indices.
Factor recompute_conditional(const DiscreteBn& bn, VertexId v,
                             const std::vector<VertexId>& parents) {
  VertexSet family(bn.vertex_count());
  family.insert(v);
  for (VertexId p : parents) family.insert(p);
  const VertexSet closure = ancestral_closure(bn.dag(), family);
  const InducedSubgraph anc = induced_subgraph(bn.dag(), closure);

  std::vector<std::uint32_t> anc_cards(anc.dag.vertex_count());
  std::vector<Factor> anc_cpts;
  for (VertexId av = 0; av < anc.dag.vertex_count(); ++av) {
    const VertexId gv = anc.original(av);
    anc_cards[av] = bn.cardinality(gv);
    std::vector<VertexId> scope;
    for (VertexId s : bn.cpt(gv).scope()) {
      scope.push_back(anc.sub_index(s).value());
    }
    anc_cpts.emplace_back(std::move(scope), bn.cpt(gv).cardinalities(),
                          bn.cpt(gv).table());
  }
  const DiscreteBn restricted(anc.dag, std::move(anc_cards),
                              std::move(anc_cpts));

  VertexSet query(anc.dag.vertex_count());
  family.for_each(
      [&](VertexId gv) { query.insert(anc.sub_index(gv).value()); });
  const Factor marginal =
      variable_elimination(restricted, query, EvidenceMap{});

  std::vector<VertexId> global_scope;
  for (VertexId av : marginal.scope()) {
    global_scope.push_back(anc.original(av));
  }
  const Factor joint(std::move(global_scope), marginal.cardinalities(),
                     marginal.table());
  return conditional_from_joint(joint, v);
}

}  // namespace

LocalizedBn localize_from_global(const DiscreteBn& bn, const VertexSet& hull,
                                 CptCache* cache) {
  if (!is_d_convex(bn.dag(), hull)) {
    throw NotConvexError("hull must be d-convex in the network's DAG");
  }
  const InducedSubgraph sub = induced_subgraph(bn.dag(), hull);
  const std::size_t k = sub.dag.vertex_count();

  std::vector<std::uint32_t> cards(k);
  for (VertexId sv = 0; sv < k; ++sv) {
    cards[sv] = bn.cardinality(sub.original(sv));
  }

  // Any scope in global indices relabels to hull indices position by
  // position: induced subgraphs preserve the relative index order.
  auto relabel = [&sub](const Factor& f) {
    std::vector<VertexId> scope;
    for (VertexId s : f.scope()) scope.push_back(sub.sub_index(s).value());
    return Factor(std::move(scope), f.cardinalities(), f.table());
  };

  std::vector<Factor> cpts;
  cpts.reserve(k);
  for (VertexId sv = 0; sv < k; ++sv) {
    const VertexId ov = sub.original(sv);
    std::vector<VertexId> local_parents_orig;
    for (VertexId sp : sub.dag.parents(sv)) {
      local_parents_orig.push_back(sub.original(sp));
    }
    std::sort(local_parents_orig.begin(), local_parents_orig.end());

    if (local_parents_orig == bn.dag().parents(ov)) {
      cpts.push_back(relabel(bn.cpt(ov)));
      continue;
    }
    if (cache) {
      const auto key = std::make_pair(ov, local_parents_orig);
      auto it = cache->find(key);
      if (it == cache->end()) {
        it = cache->emplace(key, recompute_conditional(bn, ov,
                                                       local_parents_orig))
                 .first;
      }
      cpts.push_back(relabel(it->second));
    } else {
      cpts.push_back(
          relabel(recompute_conditional(bn, ov, local_parents_orig)));
    }
  }

  return LocalizedBn{DiscreteBn(sub.dag, std::move(cards), std::move(cpts)),
                     sub.to_original, sub.from_original};
}

Dataset forward_sample(const DiscreteBn& bn, std::size_t count,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = bn.vertex_count();
  Dataset data(n);
  std::vector<std::uint32_t> row(n, 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (VertexId v : bn.dag().topological_order()) {
      const Factor& f = bn.cpt(v);
      // Base index of the row selected by the sampled parents.
      std::size_t base = 0;
      for (std::size_t p = 0; p < f.scope().size(); ++p) {
        if (f.scope()[p] != v) {
          base += static_cast<std::size_t>(row[f.scope()[p]]) * f.stride_at(p);
        }
      }
      const std::size_t stride = f.stride_at(f.position_of(v));
      const std::uint32_t card = bn.cardinality(v);
      const double r = unit_double(rng);
      double cum = 0;
      std::uint32_t s = 0;
      for (; s + 1 < card; ++s) {
        cum += f.table()[base + s * stride];
        if (r < cum) break;
      }
      row[v] = s;
    }
    data.append_row(row);
  }
  return data;
}

DiscreteBn mle_fit(const Dag& structure,
                   const std::vector<std::uint32_t>& cards,
                   const Dataset& data, double smoothing) {
  if (smoothing < 0) throw std::invalid_argument("smoothing must be >= 0");
  const std::size_t n = structure.vertex_count();
  if (data.columns() != n) {
    throw std::invalid_argument("dataset columns must cover the structure");
  }
  std::vector<Factor> cpts;
  cpts.reserve(n);
  for (VertexId v = 0; v < n; ++v) {
    const std::vector<VertexId> scope = cpt_scope(structure, v);
    std::vector<std::uint32_t> scope_cards;
    std::size_t total = 1;
    for (VertexId s : scope) {
      scope_cards.push_back(cards.at(s));
      total *= cards.at(s);
    }
    Factor f(scope, scope_cards, std::vector<double>(total, 0.0));
    for (std::size_t r = 0; r < data.rows(); ++r) {
      const auto row = data.row(r);
      std::size_t idx = 0;
      for (std::size_t p = 0; p < scope.size(); ++p) {
        if (row[scope[p]] >= scope_cards[p]) {
          throw std::out_of_range("data state exceeds cardinality");
        }
        idx = idx * scope_cards[p] + row[scope[p]];
      }
      f.table()[idx] += 1.0;
    }
    const std::size_t pos = f.position_of(v);
    const std::size_t stride = f.stride_at(pos);
    const std::uint32_t card = cards.at(v);
    const std::size_t block = stride * card;
    for (std::size_t start = 0; start < total; start += block) {
      for (std::size_t offset = 0; offset < stride; ++offset) {
        double config_count = 0;
        for (std::uint32_t s = 0; s < card; ++s) {
          config_count += f.table()[start + offset + s * stride];
        }
        const double denom = config_count + smoothing * card;
        if (denom <= 0) {
          throw DegenerateEstimateError(
              "unseen parent configuration with zero smoothing for '" +
              structure.name(v) + "'");
        }
        for (std::uint32_t s = 0; s < card; ++s) {
          double& cell = f.table()[start + offset + s * stride];
          cell = (cell + smoothing) / denom;
        }
      }
    }
    cpts.push_back(std::move(f));
  }
  return DiscreteBn(structure, cards, std::move(cpts));
}

double kl_divergence(const DiscreteBn& p, const DiscreteBn& q,
                     std::size_t max_states) {
  if (!(p.dag() == q.dag())) {
    throw ScopeError("networks must share the same structure");
  }
  if (p.cardinalities() != q.cardinalities()) {
    throw CardinalityMismatchError("networks must share cardinalities");
  }
  const Factor jp = joint_enumerate(p, max_states);
  const Factor jq = joint_enumerate(q, max_states);
  double kl = 0;
  for (std::size_t i = 0; i < jp.size(); ++i) {
    const double pv = jp.table()[i];
    if (pv <= 0) continue;
    const double qv = jq.table()[i];
    if (qv <= 0) return std::numeric_limits<double>::infinity();
    kl += pv * (std::log(pv) - std::log(qv));
  }
  return kl;
}

}  // namespace dconvex
