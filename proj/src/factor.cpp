#include "dconvex/factor.hpp"

#include <algorithm>
#include <stdexcept>

#include "dconvex/errors.hpp"

namespace dconvex {

namespace {

std::size_t checked_total(const std::vector<std::uint32_t>& cards) {
  std::size_t total = 1;
  for (std::uint32_t c : cards) {
    if (c == 0) throw CardinalityMismatchError("zero cardinality");
    if (total > kMaxFactorEntries / c) {
      throw SizeGuardError("factor table would exceed " +
                           std::to_string(kMaxFactorEntries) + " entries");
    }
    total *= c;
  }
  return total;
}

}  // namespace

Factor Factor::constant(double value) {
  return Factor({}, {}, {value});
}

Factor::Factor(std::vector<VertexId> scope, std::vector<std::uint32_t> cards,
               std::vector<double> table)
    : scope_(std::move(scope)), cards_(std::move(cards)),
      table_(std::move(table)) {
  if (scope_.size() != cards_.size()) {
    throw ScopeError("scope and cardinality lists differ in length");
  }
  if (!std::is_sorted(scope_.begin(), scope_.end()) ||
      std::adjacent_find(scope_.begin(), scope_.end()) != scope_.end()) {
    throw ScopeError("factor scope must be strictly ascending");
  }
  if (checked_total(cards_) != table_.size()) {
    throw ScopeError("table length does not match scope cardinalities");
  }
}

bool Factor::in_scope(VertexId v) const {
  return std::binary_search(scope_.begin(), scope_.end(), v);
}

std::size_t Factor::position_of(VertexId v) const {
  const auto it = std::lower_bound(scope_.begin(), scope_.end(), v);
  if (it == scope_.end() || *it != v) {
    throw ScopeError("variable not in factor scope");
  }
  return static_cast<std::size_t>(it - scope_.begin());
}

std::uint32_t Factor::cardinality_of(VertexId v) const {
  return cards_[position_of(v)];
}

std::size_t Factor::stride_at(std::size_t position) const {
  std::size_t s = 1;
  for (std::size_t i = scope_.size(); i-- > position + 1;) s *= cards_[i];
  return s;
}

std::size_t Factor::index_of(const std::vector<std::uint32_t>& states) const {
  if (states.size() != scope_.size()) {
    throw ScopeError("assignment length does not match scope");
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] >= cards_[i]) {
      throw std::out_of_range("state index exceeds cardinality");
    }
    idx = idx * cards_[i] + states[i];
  }
  return idx;
}

double Factor::total_mass() const {
  double m = 0;
  for (double x : table_) m += x;
  return m;
}

Factor factor_product(const Factor& a, const Factor& b) {
  // Merge scopes, checking shared cardinalities.
  std::vector<VertexId> scope;
  std::vector<std::uint32_t> cards;
  {
    std::size_t i = 0, j = 0;
    while (i < a.scope().size() || j < b.scope().size()) {
      if (j == b.scope().size() ||
          (i < a.scope().size() && a.scope()[i] < b.scope()[j])) {
        scope.push_back(a.scope()[i]);
        cards.push_back(a.cardinalities()[i]);
        ++i;
      } else if (i == a.scope().size() || b.scope()[j] < a.scope()[i]) {
        scope.push_back(b.scope()[j]);
        cards.push_back(b.cardinalities()[j]);
        ++j;
      } else {
        if (a.cardinalities()[i] != b.cardinalities()[j]) {
          throw CardinalityMismatchError(
              "shared variable has different cardinalities");
        }
        scope.push_back(a.scope()[i]);
        cards.push_back(a.cardinalities()[i]);
        ++i;
        ++j;
      }
    }
  }

  const std::size_t m = scope.size();
  std::size_t total = 1;
  for (std::uint32_t c : cards) {
    if (total > kMaxFactorEntries / c) {
      throw SizeGuardError("product factor would exceed " +
                           std::to_string(kMaxFactorEntries) + " entries");
    }
    total *= c;
  }

  // Per-position strides into a and b (zero when the variable is absent).
  std::vector<std::size_t> sa(m, 0), sb(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (a.in_scope(scope[i])) sa[i] = a.stride_at(a.position_of(scope[i]));
    if (b.in_scope(scope[i])) sb[i] = b.stride_at(b.position_of(scope[i]));
  }

  std::vector<double> out(total);
  std::vector<std::uint32_t> state(m, 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    out[idx] = a.table()[ia] * b.table()[ib];
    for (std::size_t pos = m; pos-- > 0;) {
      ++state[pos];
      ia += sa[pos];
      ib += sb[pos];
      if (state[pos] < cards[pos]) break;
      state[pos] = 0;
      ia -= sa[pos] * cards[pos];
      ib -= sb[pos] * cards[pos];
    }
  }
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

Factor factor_marginalize(const Factor& f, const VertexSet& out) {
  for (const VertexId v : out.to_vector()) {
    if (!f.in_scope(v)) {
      throw ScopeError("cannot marginalize a variable outside the scope");
    }
  }
  std::vector<VertexId> scope;
  std::vector<std::uint32_t> cards;
  for (std::size_t i = 0; i < f.scope().size(); ++i) {
    if (!out.contains(f.scope()[i])) {
      scope.push_back(f.scope()[i]);
      cards.push_back(f.cardinalities()[i]);
    }
  }
  std::size_t total = 1;
  for (std::uint32_t c : cards) total *= c;

  Factor result(std::move(scope), std::move(cards),
                std::vector<double>(total, 0.0));
  // Walk the source; track the destination index incrementally.
  const std::size_t src_m = f.scope().size();
  std::vector<std::size_t> sd(src_m, 0);
  for (std::size_t i = 0; i < src_m; ++i) {
    if (result.in_scope(f.scope()[i])) {
      sd[i] = result.stride_at(result.position_of(f.scope()[i]));
    }
  }
  std::vector<std::uint32_t> state(src_m, 0);
  std::size_t id = 0;
  for (std::size_t is = 0; is < f.size(); ++is) {
    result.table()[id] += f.table()[is];
    for (std::size_t pos = src_m; pos-- > 0;) {
      ++state[pos];
      id += sd[pos];
      if (state[pos] < f.cardinalities()[pos]) break;
      state[pos] = 0;
      id -= sd[pos] * f.cardinalities()[pos];
    }
  }
  return result;
}

Factor factor_reduce(const Factor& f, const EvidenceMap& evidence) {
  std::vector<VertexId> scope;
  std::vector<std::uint32_t> cards;
  std::size_t base = 0;
  for (std::size_t i = 0; i < f.scope().size(); ++i) {
    const auto state = evidence.state_of(f.scope()[i]);
    if (state) {
      if (*state >= f.cardinalities()[i]) {
        throw std::out_of_range("evidence state exceeds cardinality");
      }
      base += static_cast<std::size_t>(*state) * f.stride_at(i);
    } else {
      scope.push_back(f.scope()[i]);
      cards.push_back(f.cardinalities()[i]);
    }
  }
  std::size_t total = 1;
  for (std::uint32_t c : cards) total *= c;

  const std::size_t kept = scope.size();
  std::vector<std::size_t> ss(kept);
  {
    std::size_t j = 0;
    for (std::size_t i = 0; i < f.scope().size(); ++i) {
      if (!evidence.contains(f.scope()[i])) ss[j++] = f.stride_at(i);
    }
  }
  std::vector<double> out(total);
  std::vector<std::uint32_t> state(kept, 0);
  std::size_t is = base;
  for (std::size_t idx = 0; idx < total; ++idx) {
    out[idx] = f.table()[is];
    for (std::size_t pos = kept; pos-- > 0;) {
      ++state[pos];
      is += ss[pos];
      if (state[pos] < cards[pos]) break;
      state[pos] = 0;
      is -= ss[pos] * cards[pos];
    }
  }
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

Factor normalized(const Factor& f) {
  const double mass = f.total_mass();
  if (mass <= 0.0) {
    throw ZeroEvidenceProbabilityError(
        "distribution has zero total probability");
  }
  Factor g = f;
  for (double& x : g.table()) x /= mass;
  return g;
}

Factor conditional_from_joint(const Factor& joint, VertexId child) {
  const std::size_t pos = joint.position_of(child);
  const std::uint32_t card = joint.cardinalities()[pos];
  const std::size_t stride = joint.stride_at(pos);
  Factor out = joint;
  // Visit each slice over the child's states exactly once.
  const std::size_t block = stride * card;
  for (std::size_t start = 0; start < out.size(); start += block) {
    for (std::size_t offset = 0; offset < stride; ++offset) {
      double sum = 0;
      for (std::uint32_t s = 0; s < card; ++s) {
        sum += out.table()[start + offset + s * stride];
      }
      for (std::uint32_t s = 0; s < card; ++s) {
        double& cell = out.table()[start + offset + s * stride];
        cell = sum > 0 ? cell / sum : 1.0 / card;
      }
    }
  }
  return out;
}

}  // namespace dconvex
