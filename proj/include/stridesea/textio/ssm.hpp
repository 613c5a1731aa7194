#pragma once

#include <map>
#include <string>
#include <string_view>

#include "stridesea/format.hpp"
#include "stridesea/model.hpp"
#include "stridesea/textio/lexer.hpp"

namespace stridesea::textio {

// Grammar:
//   model := "system" STRING "{" item* "}"
//   item  := "boundary" STRING
//          | ("external"|"process"|"store") STRING ["in" STRING]
//          | "flow" STRING "from" STRING "to" STRING ["carries" STRING]
//          | "asset" STRING
//          | "objective" STRING "importance" NUMBER ["protects" STRING]
//
// Syntax errors throw ParseError. The parsed model is validated; any error
// diagnostic is rethrown as ValidationError with declaration positions.
inline SystemModel parse_system_model(std::string_view text, const std::string& file = "<input>") {
  TokenStream ts(text, file);
  SystemModel model;
  std::map<std::string, SourceSpan> decl_spans;

  ts.expect_word("system");
  model.name = ts.expect_string("system name");
  ts.expect(TokenKind::kLBrace, "\"{\"");

  while (ts.peek().kind != TokenKind::kRBrace) {
    const Token& head = ts.peek();
    SourceSpan at = head.span;
    if (head.kind != TokenKind::kWord)
      ts.fail("declaration keyword or \"}\"");
    if (head.is_word("boundary")) {
      ts.take();
      model.boundaries.push_back({ts.expect_string("boundary name")});
      decl_spans.emplace(model.boundaries.back().name, at);
    } else if (head.is_word("external") || head.is_word("process") || head.is_word("store")) {
      Element e;
      e.kind = head.is_word("external") ? ElementKind::kExternalEntity
               : head.is_word("process") ? ElementKind::kProcess
                                         : ElementKind::kDataStore;
      ts.take();
      e.name = ts.expect_string("element name");
      if (ts.accept_word("in")) e.boundary = ts.expect_string("boundary name");
      decl_spans.emplace(e.name, at);
      model.elements.push_back(std::move(e));
    } else if (head.is_word("flow")) {
      ts.take();
      DataFlow f;
      f.name = ts.expect_string("flow name");
      ts.expect_word("from");
      f.source = ts.expect_string("source element name");
      ts.expect_word("to");
      f.target = ts.expect_string("target element name");
      if (ts.accept_word("carries")) f.carries = ts.expect_string("asset name");
      decl_spans.emplace(f.label(), at);
      model.flows.push_back(std::move(f));
    } else if (head.is_word("asset")) {
      ts.take();
      model.assets.push_back({ts.expect_string("asset name")});
      decl_spans.emplace(model.assets.back().name, at);
    } else if (head.is_word("objective")) {
      ts.take();
      SecurityObjective o;
      o.name = ts.expect_string("objective name");
      ts.expect_word("importance");
      o.importance = ts.expect(TokenKind::kNumber, "importance value").number;
      if (ts.accept_word("protects")) o.protects = ts.expect_string("asset name");
      decl_spans.emplace(o.name, at);
      model.objectives.push_back(std::move(o));
    } else {
      ts.fail("declaration keyword or \"}\"");
    }
  }
  ts.take();
  if (ts.peek().kind != TokenKind::kEnd) ts.fail("end of input");

  auto diagnostics = validate_model(model);
  if (has_errors(diagnostics)) {
    std::vector<Diagnostic> errors;
    for (auto& d : diagnostics) {
      if (d.severity != Severity::kError) continue;
      if (auto it = decl_spans.find(d.subject); it != decl_spans.end()) d.where = it->second;
      errors.push_back(std::move(d));
    }
    throw ValidationError(std::move(errors));
  }
  return model;
}

// Canonical text: boundaries, elements, assets, flows, objectives, each group
// in model order, two-space indent, LF line endings.
inline std::string serialize_system_model(const SystemModel& model) {
  std::string out = "system " + quote(model.name) + " {\n";
  for (const auto& b : model.boundaries) out += "  boundary " + quote(b.name) + "\n";
  for (const auto& e : model.elements) {
    out += "  " + std::string(keyword(e.kind)) + " " + quote(e.name);
    if (e.boundary) out += " in " + quote(*e.boundary);
    out += "\n";
  }
  for (const auto& a : model.assets) out += "  asset " + quote(a.name) + "\n";
  for (const auto& f : model.flows) {
    out += "  flow " + quote(f.name) + " from " + quote(f.source) + " to " + quote(f.target);
    if (f.carries) out += " carries " + quote(*f.carries);
    out += "\n";
  }
  for (const auto& o : model.objectives) {
    out += "  objective " + quote(o.name) + " importance " + format_number(o.importance);
    if (o.protects) out += " protects " + quote(*o.protects);
    out += "\n";
  }
  out += "}\n";
  return out;
}

}  // namespace stridesea::textio
