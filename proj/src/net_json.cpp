#include "dconvex/net_json.hpp"

#include <json.hpp>
#include <map>

#include "dconvex/errors.hpp"
#include "table_layout.hpp"

namespace dconvex {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, json::value_t type,
                    const std::string& pointer) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(pointer, std::string("missing key '") + key + "'");
  }
  const bool ok =
      it->type() == type ||
      (type == json::value_t::array && it->is_array());
  if (!ok) {
    throw SchemaError(pointer + "/" + key, "unexpected type");
  }
  return *it;
}

}  // namespace

std::string write_json(const DiscreteBn& bn, std::string_view name) {
  json j;
  j["name"] = std::string(name);
  json variables = json::array();
  for (VertexId v = 0; v < bn.vertex_count(); ++v) {
    json states = json::array();
    for (std::uint32_t s = 0; s < bn.cardinality(v); ++s) {
      states.push_back("s" + std::to_string(s));
    }
    variables.push_back({{"name", bn.dag().name(v)}, {"states", states}});
  }
  j["variables"] = variables;

  json edges = json::array();
  for (const auto& [u, v] : bn.dag().edges()) {
    edges.push_back({bn.dag().name(u), bn.dag().name(v)});
  }
  j["edges"] = edges;

  json cpts = json::array();
  for (VertexId v = 0; v < bn.vertex_count(); ++v) {
    json parents = json::array();
    std::vector<std::uint32_t> parent_cards;
    for (VertexId p : bn.dag().parents(v)) {
      parents.push_back(bn.dag().name(p));
      parent_cards.push_back(bn.cardinality(p));
    }
    const auto rows = detail::rows_from_cpt(bn.cpt(v), v, bn.cardinality(v),
                                            bn.dag().parents(v), parent_cards);
    cpts.push_back({{"variable", bn.dag().name(v)},
                    {"parents", parents},
                    {"rows", rows}});
  }
  j["cpts"] = cpts;
  return j.dump(2);
}

DiscreteBn read_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("", "document must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "name" && key != "variables" && key != "edges" &&
        key != "cpts") {
      throw SchemaError("/" + key, "unknown key");
    }
  }
  require(j, "name", json::value_t::string, "");
  const json& variables = require(j, "variables", json::value_t::array, "");
  const json& edges = require(j, "edges", json::value_t::array, "");
  const json& cpts = require(j, "cpts", json::value_t::array, "");

  std::vector<std::string> names;
  std::vector<std::uint32_t> cards;
  std::map<std::string, VertexId> index;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const std::string pointer = "/variables/" + std::to_string(i);
    const json& var = variables[i];
    if (!var.is_object()) throw SchemaError(pointer, "must be an object");
    const json& name = require(var, "name", json::value_t::string, pointer);
    const json& states = require(var, "states", json::value_t::array, pointer);
    if (states.empty()) {
      throw SchemaError(pointer + "/states", "must be nonempty");
    }
    for (std::size_t s = 0; s < states.size(); ++s) {
      if (!states[s].is_string()) {
        throw SchemaError(pointer + "/states/" + std::to_string(s),
                          "must be a string");
      }
    }
    if (index.count(name.get<std::string>())) {
      throw SchemaError(pointer + "/name", "duplicate variable");
    }
    index[name.get<std::string>()] = static_cast<VertexId>(names.size());
    names.push_back(name.get<std::string>());
    cards.push_back(static_cast<std::uint32_t>(states.size()));
  }

  auto lookup = [&](const json& name, const std::string& pointer) {
    if (!name.is_string()) throw SchemaError(pointer, "must be a string");
    const auto it = index.find(name.get<std::string>());
    if (it == index.end()) {
      throw SchemaError(pointer, "unknown variable '" +
                                     name.get<std::string>() + "'");
    }
    return it->second;
  };

  std::vector<std::pair<VertexId, VertexId>> edge_list;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string pointer = "/edges/" + std::to_string(i);
    const json& e = edges[i];
    if (!e.is_array() || e.size() != 2) {
      throw SchemaError(pointer, "must be a [parent, child] pair");
    }
    edge_list.emplace_back(lookup(e[0], pointer + "/0"),
                           lookup(e[1], pointer + "/1"));
  }
  Dag dag(names, edge_list);

  if (cpts.size() != names.size()) {
    throw SchemaError("/cpts", "must list one table per variable");
  }
  std::vector<Factor> factors;
  std::vector<bool> seen(names.size(), false);
  factors.reserve(names.size());
  std::vector<std::optional<Factor>> slots(names.size());
  for (std::size_t i = 0; i < cpts.size(); ++i) {
    const std::string pointer = "/cpts/" + std::to_string(i);
    const json& t = cpts[i];
    if (!t.is_object()) throw SchemaError(pointer, "must be an object");
    const VertexId child =
        lookup(require(t, "variable", json::value_t::string, pointer),
               pointer + "/variable");
    if (seen[child]) throw SchemaError(pointer, "duplicate table");
    seen[child] = true;
    const json& parents = require(t, "parents", json::value_t::array, pointer);
    std::vector<VertexId> parent_ids;
    std::vector<std::uint32_t> parent_cards;
    for (std::size_t p = 0; p < parents.size(); ++p) {
      const VertexId pid =
          lookup(parents[p], pointer + "/parents/" + std::to_string(p));
      parent_ids.push_back(pid);
      parent_cards.push_back(cards[pid]);
    }
    {
      auto sorted = parent_ids;
      std::sort(sorted.begin(), sorted.end());
      if (sorted != dag.parents(child)) {
        throw SchemaError(pointer + "/parents",
                          "must match the edges of '" + names[child] + "'");
      }
    }
    const json& rows = require(t, "rows", json::value_t::array, pointer);
    std::vector<std::vector<double>> row_values;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string rp = pointer + "/rows/" + std::to_string(r);
      if (!rows[r].is_array()) throw SchemaError(rp, "must be an array");
      std::vector<double> row;
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        if (!rows[r][c].is_number()) {
          throw SchemaError(rp + "/" + std::to_string(c),
                            "must be a number");
        }
        row.push_back(rows[r][c].get<double>());
      }
      row_values.push_back(std::move(row));
    }
    try {
      slots[child] = detail::cpt_from_rows(child, cards[child], parent_ids,
                                           parent_cards, row_values);
    } catch (const BifSemanticError& e) {
      throw SchemaError(pointer + "/rows", e.what());
    }
  }
  for (std::size_t v = 0; v < names.size(); ++v) {
    factors.push_back(std::move(*slots[v]));
  }
  return DiscreteBn(std::move(dag), std::move(cards), std::move(factors));
}

}  // namespace dconvex
