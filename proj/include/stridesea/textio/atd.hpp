#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>

#include "stridesea/atree.hpp"
#include "stridesea/format.hpp"
#include "stridesea/textio/lexer.hpp"

namespace stridesea::textio {

// Grammar:
//   forest := tree+
//   tree   := "tree" STRING "asset" STRING "{" node "}"
//   node   := gate | leaf
//   gate   := ("or"|"and") [STRING] ["category" C] ["risk"] "{" node+ "}"
//   leaf   := "leaf" STRING ("low"|"moderate"|"high"|NUMBER) ["category" C] ["risk"]
//   C      := "S"|"T"|"R"|"I"|"D"|"E"
struct SourceText {
  std::string file;
  std::string text;
};

namespace detail {

class AtdParser {
 public:
  AtdParser(std::string_view text, const std::string& file,
            std::map<std::string, SourceSpan>& risk_names)
      : ts_(text, file), risk_names_(risk_names) {}

  atree::AttackForest parse_forest() {
    atree::AttackForest forest;
    do {
      forest.push_back(parse_tree());
    } while (ts_.peek().kind != TokenKind::kEnd);
    return forest;
  }

 private:
  atree::AttackTree parse_tree() {
    atree::AttackTree tree;
    ts_.expect_word("tree");
    tree.goal = ts_.expect_string("tree goal");
    ts_.expect_word("asset");
    tree.asset = ts_.expect_string("asset name");
    ts_.expect(TokenKind::kLBrace, "\"{\"");
    tree.root = parse_node();
    ts_.expect(TokenKind::kRBrace, "\"}\"");
    return tree;
  }

  std::optional<StrideCategory> parse_category() {
    if (!ts_.accept_word("category")) return std::nullopt;
    const Token& t = ts_.peek();
    auto c = t.kind == TokenKind::kWord ? category_from_string(t.text) : std::nullopt;
    if (!c) ts_.fail("category letter S, T, R, I, D or E");
    ts_.take();
    return c;
  }

  void register_risk(const std::string& name, const SourceSpan& at) {
    auto [it, inserted] = risk_names_.emplace(name, at);
    if (!inserted)
      throw ParseError(at, "unique risk name",
                       "duplicate risk name \"" + name + "\" (first at " + it->second.to_string() +
                           ")");
  }

  atree::AttackNode parse_node() {
    const Token& head = ts_.peek();
    SourceSpan at = head.span;
    if (head.is_word("leaf")) {
      ts_.take();
      atree::AttackNode node;
      node.kind = atree::NodeKind::kLeaf;
      node.name = ts_.expect_string("leaf name");
      const Token& v = ts_.peek();
      if (v.kind == TokenKind::kWord && atree::level_value(v.text)) {
        node.leaf_value = *atree::level_value(v.text);
      } else if (v.kind == TokenKind::kNumber) {
        if (!(v.number >= 0.0 && v.number <= 1.0)) ts_.fail("leaf value in [0,1]");
        node.leaf_value = v.number;
      } else {
        ts_.fail("low, moderate, high or a number");
      }
      ts_.take();
      node.category = parse_category();
      if (ts_.accept_word("risk")) {
        node.is_risk = true;
        register_risk(node.name, at);
      }
      return node;
    }
    if (head.is_word("or") || head.is_word("and")) {
      atree::AttackNode node;
      node.kind = head.is_word("or") ? atree::NodeKind::kOr : atree::NodeKind::kAnd;
      ts_.take();
      if (ts_.peek().kind == TokenKind::kString) node.name = ts_.take().text;
      node.category = parse_category();
      if (ts_.accept_word("risk")) {
        if (node.name.empty()) throw ParseError(at, "named gate for risk tag", "unnamed gate");
        node.is_risk = true;
        register_risk(node.name, at);
      }
      ts_.expect(TokenKind::kLBrace, "\"{\"");
      if (ts_.peek().kind == TokenKind::kRBrace)
        throw ParseError(at, "at least one child node", "empty gate");
      while (ts_.peek().kind != TokenKind::kRBrace) node.children.push_back(parse_node());
      ts_.take();
      return node;
    }
    ts_.fail("\"leaf\", \"and\" or \"or\"");
  }

  TokenStream ts_;
  std::map<std::string, SourceSpan>& risk_names_;
};

inline void append_node(std::string& out, const atree::AttackNode& node, int depth) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  auto suffix = [&] {
    std::string s;
    if (node.category) s += std::string(" category ") + letter(*node.category);
    if (node.is_risk) s += " risk";
    return s;
  };
  if (node.kind == atree::NodeKind::kLeaf) {
    auto named = atree::level_name(node.leaf_value);
    out += indent + "leaf " + quote(node.name) + " " +
           (named ? std::string(*named) : format_number(node.leaf_value)) + suffix() + "\n";
    return;
  }
  out += indent + std::string(atree::kind_name(node.kind));
  if (!node.name.empty()) out += " " + quote(node.name);
  out += suffix() + " {\n";
  for (const auto& c : node.children) append_node(out, c, depth + 1);
  out += indent + "}\n";
}

}  // namespace detail

// Parses several files into one forest; risk names must be unique across all.
inline atree::AttackForest parse_attack_trees(std::span<const SourceText> sources) {
  std::map<std::string, SourceSpan> risk_names;
  atree::AttackForest forest;
  for (const auto& src : sources) {
    auto part = detail::AtdParser(src.text, src.file, risk_names).parse_forest();
    for (auto& t : part) forest.push_back(std::move(t));
  }
  return forest;
}

inline atree::AttackForest parse_attack_tree(std::string_view text,
                                             const std::string& file = "<input>") {
  std::map<std::string, SourceSpan> risk_names;
  return detail::AtdParser(text, file, risk_names).parse_forest();
}

inline std::string serialize_attack_trees(std::span<const atree::AttackTree> forest) {
  std::string out;
  for (std::size_t i = 0; i < forest.size(); ++i) {
    if (i > 0) out += "\n";
    const auto& t = forest[i];
    out += "tree " + quote(t.goal) + " asset " + quote(t.asset) + " {\n";
    detail::append_node(out, t.root, 1);
    out += "}\n";
  }
  return out;
}

}  // namespace stridesea::textio
