#pragma once

#include <string>
#include <string_view>

#include "dconvex/dag.hpp"

namespace dconvex {

// Plain structure-only format: one "parent child" pair per line. Blank
// lines and lines starting with '#' are skipped.
Dag read_edge_list(std::string_view text);

std::string write_edge_list(const Dag& g);

}  // namespace dconvex
