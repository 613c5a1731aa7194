#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stridesea/ddp.hpp"
#include "stridesea/error.hpp"
#include "stridesea/format.hpp"
#include "stridesea/model.hpp"

namespace stridesea::textio {

// Dialect: comma separator, no quoting, cells trimmed of surrounding
// whitespace, blank lines and lines starting with '#' ignored. First
// non-ignored line is the header.
struct CsvCell {
  std::string text;
  SourceSpan span;
};

struct CsvRow {
  std::vector<CsvCell> cells;
  SourceSpan span;
};

namespace detail {
inline int code_points(std::string_view s) {
  int n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

inline SourceSpan csv_end_span(std::string_view text, const std::string& file) {
  if (text.empty()) return {file, 1, 1};
  int line = 1;
  std::size_t line_start = 0;
  for (std::size_t i = 0; i + 1 < text.size(); ++i)
    if (text[i] == '\n') ++line, line_start = i + 1;
  int col = code_points(text.substr(line_start, text.size() - 1 - line_start)) + 1;
  return {file, line, col};
}
}  // namespace detail

inline std::vector<CsvRow> read_csv(std::string_view text, const std::string& file = "<input>") {
  std::vector<CsvRow> rows;
  std::size_t start = 0;
  int line = 0;
  while (start < text.size()) {
    ++line;
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::size_t first = raw.find_first_not_of(" \t");
    if (first != std::string_view::npos && raw[first] != '#') {
      CsvRow row;
      row.span = {file, line, 1};
      std::size_t cell_start = 0;
      while (true) {
        std::size_t comma = raw.find(',', cell_start);
        std::string_view cell =
            raw.substr(cell_start, comma == std::string_view::npos ? raw.npos : comma - cell_start);
        std::size_t lead = cell.find_first_not_of(" \t");
        std::size_t trail = cell.find_last_not_of(" \t");
        std::string_view trimmed =
            lead == std::string_view::npos ? std::string_view{} : cell.substr(lead, trail - lead + 1);
        std::size_t offset = cell_start + (lead == std::string_view::npos ? 0 : lead);
        row.cells.push_back(
            {std::string(trimmed), {file, line, detail::code_points(raw.substr(0, offset)) + 1}});
        if (comma == std::string_view::npos) break;
        cell_start = comma + 1;
      }
      rows.push_back(std::move(row));
    }
    start = end + 1;
  }
  return rows;
}

namespace detail {

inline std::string describe_cell(const CsvCell& c) {
  return c.text.empty() ? "empty cell" : "\"" + c.text + "\"";
}

inline double unit_value(const CsvCell& cell, const std::string& what) {
  auto v = parse_decimal(cell.text);
  if (!v) throw ParseError(cell.span, what + " number", describe_cell(cell));
  if (!(*v >= 0.0 && *v <= 1.0)) throw ParseError(cell.span, what + " in [0,1]", cell.text);
  return *v;
}

inline void expect_width(const CsvRow& row, std::size_t width) {
  if (row.cells.size() != width)
    throw ParseError(row.span, std::to_string(width) + " cells",
                     std::to_string(row.cells.size()) + " cells");
}

// Header risk columns starting at `first`; unique names required.
inline std::vector<std::string> risk_columns(const CsvRow& header, std::size_t first) {
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (std::size_t i = first; i < header.cells.size(); ++i) {
    const auto& c = header.cells[i];
    if (c.text.empty()) throw ParseError(c.span, "risk name", "empty cell");
    if (!seen.insert(c.text).second)
      throw ParseError(c.span, "unique risk column", "duplicate \"" + c.text + "\"");
    names.push_back(c.text);
  }
  return names;
}

// Every name in `expected` must appear among the columns and vice versa.
inline void match_columns(const CsvRow& header, std::size_t first,
                          const std::vector<std::string>& columns,
                          const std::vector<std::string>& expected) {
  std::set<std::string> known(expected.begin(), expected.end());
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (!known.contains(columns[i]))
      throw ParseError(header.cells[first + i].span, "risk name",
                       "unknown risk \"" + columns[i] + "\"");
  std::set<std::string> present(columns.begin(), columns.end());
  for (const auto& name : expected)
    if (!present.contains(name))
      throw ParseError(header.span, "column for risk \"" + name + "\"", "missing column");
}

}  // namespace detail

// Header `objective,<risk>...`; one row per model objective; optional
// `@likelihood` row replacing the tree-derived likelihoods. Objectives keep
// model order, risks keep column order.
inline ddp::RiskImpactMatrix parse_impact_csv(std::string_view text, const SystemModel& model,
                                              std::span<const Risk> risks,
                                              const std::string& file = "<input>") {
  auto rows = read_csv(text, file);
  if (rows.empty()) throw ParseError(detail::csv_end_span(text, file), "header row", "end of input");
  const CsvRow& header = rows.front();
  if (header.cells.front().text != "objective")
    throw ParseError(header.cells.front().span, "\"objective\"", detail::describe_cell(header.cells.front()));

  auto columns = detail::risk_columns(header, 1);
  std::vector<std::string> risk_names;
  for (const auto& r : risks) risk_names.push_back(r.name);
  detail::match_columns(header, 1, columns, risk_names);

  std::vector<Risk> ordered;
  for (const auto& name : columns)
    for (const auto& r : risks)
      if (r.name == name) ordered.push_back(r);

  std::map<std::string, std::vector<double>> by_objective;
  std::optional<SourceSpan> likelihood_at;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const CsvRow& row = rows[i];
    detail::expect_width(row, header.cells.size());
    const CsvCell& key = row.cells.front();
    if (key.text == "@likelihood") {
      if (likelihood_at)
        throw ParseError(key.span, "single @likelihood row",
                         "duplicate (first at " + likelihood_at->to_string() + ")");
      likelihood_at = key.span;
      for (std::size_t r = 0; r < columns.size(); ++r)
        ordered[r].likelihood = detail::unit_value(row.cells[r + 1], "likelihood");
      continue;
    }
    if (!key.text.empty() && key.text.front() == '@')
      throw ParseError(key.span, "@likelihood or objective name", "\"" + key.text + "\"");
    if (!model.find_objective(key.text))
      throw ParseError(key.span, "objective name", "unknown objective \"" + key.text + "\"");
    if (by_objective.contains(key.text))
      throw ParseError(key.span, "unique objective row", "duplicate \"" + key.text + "\"");
    std::vector<double> values;
    for (std::size_t r = 0; r < columns.size(); ++r)
      values.push_back(detail::unit_value(row.cells[r + 1], "impact"));
    by_objective.emplace(key.text, std::move(values));
  }

  std::vector<std::vector<double>> impact;
  for (const auto& o : model.objectives) {
    auto it = by_objective.find(o.name);
    if (it == by_objective.end())
      throw ParseError(detail::csv_end_span(text, file), "row for objective \"" + o.name + "\"",
                       "end of input");
    impact.push_back(it->second);
  }
  return ddp::make_impact_matrix(model.objectives, std::move(ordered), std::move(impact));
}

struct CriticalRisk {
  std::string name;
  double criticality = 0.0;
};

namespace detail {

struct EffectRows {
  ddp::EffectivenessMatrix matrix;
  std::optional<std::vector<double>> criticality_row;
  CsvRow header;
};

inline EffectRows read_effect_rows(std::string_view text, const std::string& file) {
  auto rows = read_csv(text, file);
  if (rows.empty()) throw ParseError(csv_end_span(text, file), "header row", "end of input");
  EffectRows out;
  out.header = rows.front();
  const CsvRow& header = out.header;
  if (header.cells.front().text != "countermeasure")
    throw ParseError(header.cells.front().span, "\"countermeasure\"", describe_cell(header.cells.front()));
  if (header.cells.size() < 2 || header.cells[1].text != "cost")
    throw ParseError(header.cells.size() < 2 ? header.span : header.cells[1].span, "\"cost\"",
                     header.cells.size() < 2 ? "end of line" : describe_cell(header.cells[1]));
  out.matrix.risks = risk_columns(header, 2);

  std::set<std::string> seen;
  std::optional<SourceSpan> criticality_at;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const CsvRow& row = rows[i];
    expect_width(row, header.cells.size());
    const CsvCell& key = row.cells.front();
    if (key.text == "@criticality") {
      if (criticality_at)
        throw ParseError(key.span, "single @criticality row",
                         "duplicate (first at " + criticality_at->to_string() + ")");
      criticality_at = key.span;
      if (!row.cells[1].text.empty())
        throw ParseError(row.cells[1].span, "empty cost cell", describe_cell(row.cells[1]));
      std::vector<double> crit;
      for (std::size_t r = 0; r < out.matrix.risks.size(); ++r)
        crit.push_back(unit_value(row.cells[r + 2], "criticality"));
      out.criticality_row = std::move(crit);
      continue;
    }
    if (key.text.empty()) throw ParseError(key.span, "countermeasure name", "empty cell");
    if (key.text.front() == '@')
      throw ParseError(key.span, "@criticality or countermeasure name", "\"" + key.text + "\"");
    if (!seen.insert(key.text).second)
      throw ParseError(key.span, "unique countermeasure row", "duplicate \"" + key.text + "\"");
    auto cost = parse_decimal(row.cells[1].text);
    if (!cost) throw ParseError(row.cells[1].span, "cost number", describe_cell(row.cells[1]));
    if (*cost < 0.0) throw ParseError(row.cells[1].span, "non-negative cost", "negative cost " + row.cells[1].text);
    std::vector<double> reductions;
    for (std::size_t r = 0; r < out.matrix.risks.size(); ++r)
      reductions.push_back(unit_value(row.cells[r + 2], "reduction"));
    out.matrix.countermeasures.push_back({key.text, *cost});
    out.matrix.reduction.push_back(std::move(reductions));
  }
  return out;
}

}  // namespace detail

// Standalone form: header `countermeasure,cost,<risk>...`, one row per
// countermeasure, and a required `@criticality` row (empty cost cell)
// supplying C_r for each risk column.
inline ddp::EffectivenessMatrix parse_effect_csv(std::string_view text,
                                                 const std::string& file = "<input>") {
  auto parsed = detail::read_effect_rows(text, file);
  if (!parsed.criticality_row)
    throw ParseError(detail::csv_end_span(text, file), "@criticality row", "end of input");
  parsed.matrix.criticality = std::move(*parsed.criticality_row);
  return std::move(parsed.matrix);
}

// Bound form: risk columns must match `risks` exactly and their criticalities
// come from `risks`. An `@criticality` row is still validated but not applied.
inline ddp::EffectivenessMatrix parse_effect_csv(std::string_view text,
                                                 std::span<const CriticalRisk> risks,
                                                 const std::string& file = "<input>") {
  auto parsed = detail::read_effect_rows(text, file);
  std::vector<std::string> names;
  for (const auto& r : risks) names.push_back(r.name);
  detail::match_columns(parsed.header, 2, parsed.matrix.risks, names);
  for (const auto& column : parsed.matrix.risks)
    for (const auto& r : risks)
      if (r.name == column) parsed.matrix.criticality.push_back(r.criticality);
  return std::move(parsed.matrix);
}

}  // namespace stridesea::textio
