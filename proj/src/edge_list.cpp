#include "dconvex/edge_list.hpp"

#include <sstream>

#include "dconvex/errors.hpp"

namespace dconvex {

Dag read_edge_list(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string parent, child, extra;
    if (!(fields >> parent)) continue;
    if (parent[0] == '#') continue;
    if (!(fields >> child) || (fields >> extra)) {
      throw Error("edge list line " + std::to_string(line_no) +
                  ": expected 'parent child'");
    }
    edges.emplace_back(parent, child);
  }
  return build_dag(edges);
}

std::string write_edge_list(const Dag& g) {
  std::string out;
  for (const auto& [u, v] : g.edges()) {
    out += g.name(u) + " " + g.name(v) + "\n";
  }
  return out;
}

}  // namespace dconvex
