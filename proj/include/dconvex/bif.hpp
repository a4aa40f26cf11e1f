#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dconvex/discrete_bn.hpp"

namespace dconvex {

struct BifVariable {
  std::string name;
  std::vector<std::string> states;
};

// One conditional table. `rows` holds one child distribution per parent
// configuration; configurations iterate in odometer order over `parents`
// as listed, last parent fastest.
struct BifCpt {
  std::string variable;
  std::vector<std::string> parents;
  std::vector<std::vector<double>> rows;
};

// On-disk form of a discrete network: declaration-ordered variables, the
// edge list implied by the probability blocks, and one table per variable.
struct NetworkDocument {
  std::string name;
  std::vector<BifVariable> variables;
  std::vector<std::pair<std::string, std::string>> edges;  // parent, child
  std::vector<BifCpt> tables;  // aligned with `variables`
  std::vector<std::string> warnings;  // e.g. renormalized rows
};

// Parses a BIF 0.3 document. Supports `table` rows (child slowest, last
// parent fastest) and per-configuration entries keyed by state labels;
// property blocks are skipped. Rows off by more than 1e-6 raise
// BifSemanticError; smaller deviations are renormalized with a warning.
NetworkDocument parse_bif(std::string_view text);

std::string write_bif(const NetworkDocument& doc);

DiscreteBn to_discrete_bn(const NetworkDocument& doc);

// Canonical document for a network; states are labeled s0, s1, ...
NetworkDocument make_document(const DiscreteBn& bn,
                              std::string name = "network");

}  // namespace dconvex
