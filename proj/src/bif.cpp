#include "dconvex/bif.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

#include "dconvex/errors.hpp"
#include "table_layout.hpp"

namespace dconvex {

namespace {

constexpr double kRowTolerance = 1e-6;

struct Token {
  enum class Kind { kWord, kPunct, kEnd } kind = Kind::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw BifSyntaxError(current_.line, current_.col,
                         "expected " + expected + ", got '" +
                             (current_.kind == Token::Kind::kEnd
                                  ? "<end of input>"
                                  : current_.text) +
                             "'");
  }

  Token expect_word() {
    if (current_.kind != Token::Kind::kWord) fail("a name");
    return take();
  }

  void expect_punct(char c) {
    if (current_.kind != Token::Kind::kPunct || current_.text[0] != c) {
      fail(std::string("'") + c + "'");
    }
    take();
  }

  bool at_punct(char c) const {
    return current_.kind == Token::Kind::kPunct && current_.text[0] == c;
  }

  bool at_end() const { return current_.kind == Token::Kind::kEnd; }

 private:
  void advance() {
    skip_space_and_comments();
    current_.line = line_;
    current_.col = col_;
    if (pos_ >= text_.size()) {
      current_ = Token{Token::Kind::kEnd, "", line_, col_};
      return;
    }
    const char c = text_[pos_];
    if (is_punct(c)) {
      current_ = Token{Token::Kind::kPunct, std::string(1, c), line_, col_};
      bump();
      return;
    }
    if (c == '"') {
      bump();
      std::string word;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        word += text_[pos_];
        bump();
      }
      if (pos_ < text_.size()) bump();  // closing quote
      current_ = Token{Token::Kind::kWord, word, current_.line, current_.col};
      return;
    }
    std::string word;
    while (pos_ < text_.size() && !std::isspace(
               static_cast<unsigned char>(text_[pos_])) &&
           !is_punct(text_[pos_]) && text_[pos_] != '"') {
      word += text_[pos_];
      bump();
    }
    current_ = Token{Token::Kind::kWord, word, current_.line, current_.col};
  }

  static bool is_punct(char c) {
    return c == '(' || c == ')' || c == '{' || c == '}' || c == '[' ||
           c == ']' || c == ',' || c == ';' || c == '|' || c == '=';
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else if (c == '/' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (c == '/' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '*') {
        bump();
        bump();
        while (pos_ + 1 < text_.size() &&
               !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
          bump();
        }
        if (pos_ + 1 < text_.size()) {
          bump();
          bump();
        }
      } else {
        break;
      }
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Token current_;
};

double parse_number(Lexer& lex) {
  const Token t = lex.peek();
  if (t.kind != Token::Kind::kWord) lex.fail("a number");
  char* end = nullptr;
  const double value = std::strtod(t.text.c_str(), &end);
  if (end != t.text.c_str() + t.text.size()) lex.fail("a number");
  lex.take();
  return value;
}

// Skips a balanced-brace property/unknown entry up to and including ';'.
void skip_statement(Lexer& lex) {
  while (!lex.at_end() && !lex.at_punct(';')) lex.take();
  if (!lex.at_end()) lex.take();
}

struct ParserState {
  NetworkDocument doc;
  std::map<std::string, std::size_t> variable_index;
  std::vector<bool> has_table;
};

void parse_network_block(Lexer& lex, ParserState& st) {
  lex.take();  // 'network'
  std::string name;
  while (!lex.at_punct('{') && !lex.at_end()) {
    if (!name.empty()) name += ' ';
    name += lex.take().text;
  }
  st.doc.name = name;
  lex.expect_punct('{');
  while (!lex.at_punct('}') && !lex.at_end()) skip_statement(lex);
  lex.expect_punct('}');
}

void parse_variable_block(Lexer& lex, ParserState& st) {
  lex.take();  // 'variable'
  BifVariable var;
  var.name = lex.expect_word().text;
  if (st.variable_index.count(var.name)) {
    throw BifSemanticError("variable '" + var.name + "' declared twice");
  }
  lex.expect_punct('{');
  while (!lex.at_punct('}')) {
    if (lex.at_end()) lex.fail("'}'");
    const Token t = lex.peek();
    if (t.kind == Token::Kind::kWord && t.text == "type") {
      lex.take();
      const Token kind = lex.expect_word();
      if (kind.text != "discrete") {
        throw BifSemanticError("variable '" + var.name +
                               "' has unsupported type '" + kind.text + "'");
      }
      lex.expect_punct('[');
      const double count = parse_number(lex);
      lex.expect_punct(']');
      lex.expect_punct('{');
      while (!lex.at_punct('}')) {
        if (lex.at_end()) lex.fail("'}'");
        if (lex.at_punct(',')) {
          lex.take();
          continue;
        }
        var.states.push_back(lex.expect_word().text);
      }
      lex.expect_punct('}');
      if (lex.at_punct(';')) lex.take();
      if (var.states.size() != static_cast<std::size_t>(count)) {
        throw BifSemanticError("variable '" + var.name + "' declares " +
                               std::to_string(static_cast<long>(count)) +
                               " states but lists " +
                               std::to_string(var.states.size()));
      }
    } else {
      skip_statement(lex);
    }
  }
  lex.expect_punct('}');
  if (var.states.empty()) {
    throw BifSemanticError("variable '" + var.name + "' has no states");
  }
  st.variable_index[var.name] = st.doc.variables.size();
  st.doc.variables.push_back(std::move(var));
  st.doc.tables.emplace_back();
  st.has_table.push_back(false);
}

std::size_t lookup_variable(const ParserState& st, const std::string& name) {
  auto it = st.variable_index.find(name);
  if (it == st.variable_index.end()) {
    throw BifSemanticError("undeclared variable '" + name + "'");
  }
  return it->second;
}

void parse_probability_block(Lexer& lex, ParserState& st) {
  lex.take();  // 'probability'
  lex.expect_punct('(');
  const std::string child_name = lex.expect_word().text;
  const std::size_t child = lookup_variable(st, child_name);
  std::vector<std::string> parent_names;
  if (lex.at_punct('|')) {
    lex.take();
    while (!lex.at_punct(')')) {
      if (lex.at_end()) lex.fail("')'");
      if (lex.at_punct(',')) {
        lex.take();
        continue;
      }
      parent_names.push_back(lex.expect_word().text);
    }
  }
  lex.expect_punct(')');

  if (st.has_table[child]) {
    throw BifSemanticError("variable '" + child_name +
                           "' has more than one probability block");
  }
  st.has_table[child] = true;

  std::vector<std::size_t> parents;
  std::vector<std::uint32_t> parent_cards;
  for (const auto& p : parent_names) {
    const std::size_t pi = lookup_variable(st, p);
    parents.push_back(pi);
    parent_cards.push_back(
        static_cast<std::uint32_t>(st.doc.variables[pi].states.size()));
    st.doc.edges.emplace_back(p, child_name);
  }
  const auto child_card =
      static_cast<std::uint32_t>(st.doc.variables[child].states.size());
  std::size_t configs = 1;
  for (auto c : parent_cards) configs *= c;

  BifCpt table;
  table.variable = child_name;
  table.parents = parent_names;
  table.rows.assign(configs, {});
  std::vector<bool> seen(configs, false);

  lex.expect_punct('{');
  while (!lex.at_punct('}')) {
    if (lex.at_end()) lex.fail("'}'");
    const Token t = lex.peek();
    if (t.kind == Token::Kind::kWord && t.text == "table") {
      lex.take();
      std::vector<double> values;
      while (!lex.at_punct(';')) {
        if (lex.at_end()) lex.fail("';'");
        if (lex.at_punct(',')) {
          lex.take();
          continue;
        }
        values.push_back(parse_number(lex));
      }
      lex.take();  // ';'
      if (values.size() != configs * child_card) {
        throw BifSemanticError(
            "table for '" + child_name + "' lists " +
            std::to_string(values.size()) + " values, expected " +
            std::to_string(configs * child_card));
      }
      // Child varies slowest, parents run their odometer per child state.
      for (std::size_t cfg = 0; cfg < configs; ++cfg) {
        table.rows[cfg].resize(child_card);
        seen[cfg] = true;
        for (std::uint32_t s = 0; s < child_card; ++s) {
          table.rows[cfg][s] = values[s * configs + cfg];
        }
      }
    } else if (lex.at_punct('(')) {
      lex.take();
      std::vector<std::string> labels;
      while (!lex.at_punct(')')) {
        if (lex.at_end()) lex.fail("')'");
        if (lex.at_punct(',')) {
          lex.take();
          continue;
        }
        labels.push_back(lex.expect_word().text);
      }
      lex.take();  // ')'
      if (labels.size() != parents.size()) {
        throw BifSemanticError("configuration for '" + child_name +
                               "' lists " + std::to_string(labels.size()) +
                               " states for " +
                               std::to_string(parents.size()) + " parents");
      }
      std::size_t cfg = 0;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto& states = st.doc.variables[parents[i]].states;
        const auto it = std::find(states.begin(), states.end(), labels[i]);
        if (it == states.end()) {
          throw BifSemanticError("unknown state '" + labels[i] + "' of '" +
                                 parent_names[i] + "'");
        }
        cfg = cfg * parent_cards[i] +
              static_cast<std::size_t>(it - states.begin());
      }
      std::vector<double> values;
      while (!lex.at_punct(';')) {
        if (lex.at_end()) lex.fail("';'");
        if (lex.at_punct(',')) {
          lex.take();
          continue;
        }
        values.push_back(parse_number(lex));
      }
      lex.take();  // ';'
      if (values.size() != child_card) {
        throw BifSemanticError("row for '" + child_name + "' lists " +
                               std::to_string(values.size()) +
                               " values for " + std::to_string(child_card) +
                               " states");
      }
      if (seen[cfg]) {
        throw BifSemanticError("duplicate configuration row for '" +
                               child_name + "'");
      }
      seen[cfg] = true;
      table.rows[cfg] = std::move(values);
    } else {
      skip_statement(lex);
    }
  }
  lex.expect_punct('}');

  for (std::size_t cfg = 0; cfg < configs; ++cfg) {
    if (!seen[cfg]) {
      throw BifSemanticError("missing configuration row for '" + child_name +
                             "'");
    }
    double sum = 0;
    for (double v : table.rows[cfg]) {
      if (v < 0) {
        throw BifSemanticError("negative probability for '" + child_name +
                               "'");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowTolerance) {
      throw BifSemanticError("row of '" + child_name + "' sums to " +
                             std::to_string(sum));
    }
    if (sum != 1.0) {
      for (double& v : table.rows[cfg]) v /= sum;
      st.doc.warnings.push_back("renormalized a row of '" + child_name +
                                "' (sum deviation " +
                                std::to_string(std::abs(sum - 1.0)) + ")");
    }
  }
  st.doc.tables[child] = std::move(table);
}

}  // namespace

NetworkDocument parse_bif(std::string_view text) {
  Lexer lex(text);
  ParserState st;
  while (!lex.at_end()) {
    const Token t = lex.peek();
    if (t.kind != Token::Kind::kWord) lex.fail("a block keyword");
    if (t.text == "network") {
      parse_network_block(lex, st);
    } else if (t.text == "variable") {
      parse_variable_block(lex, st);
    } else if (t.text == "probability") {
      parse_probability_block(lex, st);
    } else {
      lex.fail("'network', 'variable' or 'probability'");
    }
  }
  for (std::size_t i = 0; i < st.doc.variables.size(); ++i) {
    if (!st.has_table[i]) {
      throw BifSemanticError("variable '" + st.doc.variables[i].name +
                             "' has no probability block");
    }
  }
  // Acyclicity check; the constructed graph is discarded.
  to_discrete_bn(st.doc);
  return st.doc;
}

namespace {

std::string format_number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string write_bif(const NetworkDocument& doc) {
  std::string out = "network " + (doc.name.empty() ? "unknown" : doc.name) +
                    " {\n}\n";
  for (const auto& var : doc.variables) {
    out += "variable " + var.name + " {\n  type discrete [ " +
           std::to_string(var.states.size()) + " ] { ";
    for (std::size_t i = 0; i < var.states.size(); ++i) {
      if (i) out += ", ";
      out += var.states[i];
    }
    out += " };\n}\n";
  }
  for (std::size_t vi = 0; vi < doc.variables.size(); ++vi) {
    const BifCpt& table = doc.tables[vi];
    const BifVariable& var = doc.variables[vi];
    out += "probability ( " + var.name;
    if (!table.parents.empty()) {
      out += " | ";
      for (std::size_t i = 0; i < table.parents.size(); ++i) {
        if (i) out += ", ";
        out += table.parents[i];
      }
    }
    out += " ) {\n";
    if (table.parents.empty()) {
      out += "  table ";
      for (std::size_t s = 0; s < table.rows[0].size(); ++s) {
        if (s) out += ", ";
        out += format_number(table.rows[0][s]);
      }
      out += ";\n";
    } else {
      // Recover each configuration's state labels from its row index.
      std::vector<const BifVariable*> parent_vars;
      for (const auto& p : table.parents) {
        for (const auto& cand : doc.variables) {
          if (cand.name == p) parent_vars.push_back(&cand);
        }
      }
      std::vector<std::size_t> state(table.parents.size(), 0);
      for (const auto& row : table.rows) {
        out += "  (";
        for (std::size_t i = 0; i < state.size(); ++i) {
          if (i) out += ", ";
          out += parent_vars[i]->states[state[i]];
        }
        out += ") ";
        for (std::size_t s = 0; s < row.size(); ++s) {
          if (s) out += ", ";
          out += format_number(row[s]);
        }
        out += ";\n";
        for (std::size_t p = state.size(); p-- > 0;) {
          if (++state[p] < parent_vars[p]->states.size()) break;
          state[p] = 0;
        }
      }
    }
    out += "}\n";
  }
  return out;
}

DiscreteBn to_discrete_bn(const NetworkDocument& doc) {
  std::vector<std::string> names;
  std::vector<std::uint32_t> cards;
  for (const auto& var : doc.variables) {
    names.push_back(var.name);
    cards.push_back(static_cast<std::uint32_t>(var.states.size()));
  }
  std::map<std::string, VertexId> index;
  for (std::size_t i = 0; i < names.size(); ++i) {
    index[names[i]] = static_cast<VertexId>(i);
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& [p, c] : doc.edges) {
    edges.emplace_back(index.at(p), index.at(c));
  }
  Dag dag(names, edges);

  std::vector<Factor> cpts;
  for (std::size_t vi = 0; vi < doc.variables.size(); ++vi) {
    const BifCpt& table = doc.tables[vi];
    std::vector<VertexId> parents;
    std::vector<std::uint32_t> parent_cards;
    for (const auto& p : table.parents) {
      parents.push_back(index.at(p));
      parent_cards.push_back(cards[index.at(p)]);
    }
    cpts.push_back(detail::cpt_from_rows(static_cast<VertexId>(vi), cards[vi],
                                         parents, parent_cards, table.rows));
  }
  return DiscreteBn(std::move(dag), std::move(cards), std::move(cpts));
}

NetworkDocument make_document(const DiscreteBn& bn, std::string name) {
  NetworkDocument doc;
  doc.name = std::move(name);
  const std::size_t n = bn.vertex_count();
  for (VertexId v = 0; v < n; ++v) {
    BifVariable var;
    var.name = bn.dag().name(v);
    for (std::uint32_t s = 0; s < bn.cardinality(v); ++s) {
      var.states.push_back("s" + std::to_string(s));
    }
    doc.variables.push_back(std::move(var));
  }
  for (const auto& [u, v] : bn.dag().edges()) {
    doc.edges.emplace_back(bn.dag().name(u), bn.dag().name(v));
  }
  for (VertexId v = 0; v < n; ++v) {
    BifCpt table;
    table.variable = bn.dag().name(v);
    std::vector<std::uint32_t> parent_cards;
    for (VertexId p : bn.dag().parents(v)) {
      table.parents.push_back(bn.dag().name(p));
      parent_cards.push_back(bn.cardinality(p));
    }
    table.rows = detail::rows_from_cpt(bn.cpt(v), v, bn.cardinality(v),
                                       bn.dag().parents(v), parent_cards);
    doc.tables.push_back(std::move(table));
  }
  return doc;
}

}  // namespace dconvex
