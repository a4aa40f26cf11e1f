#pragma once

#include <string>
#include <string_view>

#include "dconvex/discrete_bn.hpp"

namespace dconvex {

// Canonical JSON form:
//   {"cpts":[{"parents":[...],"rows":[[...]],"variable":"..."}],
//    "edges":[["p","c"],...],
//    "name":"...",
//    "variables":[{"name":"...","states":["s0",...]}]}
// Keys are emitted sorted; `rows` follow the layout documented in bif.hpp
// (parents as listed, last fastest). Round-trips are lossless.
std::string write_json(const DiscreteBn& bn, std::string_view name = "network");

// Validates the schema and reports violations with JSON-pointer paths.
DiscreteBn read_json(std::string_view text);

}  // namespace dconvex
