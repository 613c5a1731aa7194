#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stridesea/atree.hpp"
#include "stridesea/ddp.hpp"
#include "stridesea/error.hpp"
#include "stridesea/format.hpp"
#include "stridesea/model.hpp"
#include "stridesea/portfolio.hpp"
#include "stridesea/textio/csv.hpp"
#include "stridesea/threatgen.hpp"

namespace stridesea::report {

using Json = nlohmann::ordered_json;

enum class Format { kText, kCsv, kJson };

inline std::optional<Format> parse_format(std::string_view s) {
  if (s == "text") return Format::kText;
  if (s == "csv") return Format::kCsv;
  if (s == "json") return Format::kJson;
  return std::nullopt;
}

// ---- CSV writing ---------------------------------------------------------

// The CSV dialect has no quoting, so cells that would not survive a re-read
// are refused rather than silently mangled.
inline const std::string& csv_cell(const std::string& s) {
  const bool bad = s.find_first_of(",\n\r") != std::string::npos ||
                   (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.back() == ' ' ||
                                   s.back() == '\t'));
  if (bad) throw ValidationError("cannot write \"" + s + "\" as a CSV cell");
  return s;
}

inline std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    if (i == 0 && !cells[i].empty() && cells[i].front() == '#')
      throw ValidationError("cannot write \"" + cells[i] + "\" as a leading CSV cell");
    out += csv_cell(cells[i]);
  }
  return out + "\n";
}

inline std::string csv_bool(bool b) { return b ? "true" : "false"; }

// ---- CSV reading (reports) ----------------------------------------------

namespace detail {

class ReportCsv {
 public:
  ReportCsv(std::string_view text, const std::string& file, const std::vector<std::string>& header)
      : file_(file), rows_(textio::read_csv(text, file)) {
    if (rows_.empty()) throw ParseError(textio::detail::csv_end_span(text, file), "header row", "end of input");
    const auto& h = rows_.front();
    textio::detail::expect_width(h, header.size());
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (h.cells[i].text != header[i])
        throw ParseError(h.cells[i].span, "\"" + header[i] + "\"", textio::detail::describe_cell(h.cells[i]));
      index_.emplace(header[i], i);
    }
    for (std::size_t i = 1; i < rows_.size(); ++i) textio::detail::expect_width(rows_[i], header.size());
  }

  std::span<const textio::CsvRow> rows() const {
    return std::span<const textio::CsvRow>(rows_).subspan(1);
  }
  const textio::CsvCell& cell(const textio::CsvRow& row, const std::string& column) const {
    return row.cells[index_.at(column)];
  }
  const std::string& text(const textio::CsvRow& row, const std::string& column) const {
    return cell(row, column).text;
  }
  double number(const textio::CsvRow& row, const std::string& column) const {
    const auto& c = cell(row, column);
    auto v = parse_decimal(c.text);
    if (!v) throw ParseError(c.span, column + " number", textio::detail::describe_cell(c));
    return *v;
  }
  bool boolean(const textio::CsvRow& row, const std::string& column) const {
    const auto& c = cell(row, column);
    if (c.text == "true") return true;
    if (c.text == "false") return false;
    throw ParseError(c.span, "true or false", textio::detail::describe_cell(c));
  }
  StrideCategory category(const textio::CsvRow& row, const std::string& column) const {
    const auto& c = cell(row, column);
    auto v = category_from_string(c.text);
    if (!v) throw ParseError(c.span, "category letter", textio::detail::describe_cell(c));
    return *v;
  }

 private:
  std::string file_;
  std::vector<textio::CsvRow> rows_;
  std::map<std::string, std::size_t> index_;
};

template <class T>
std::size_t position_of(const std::vector<T>& v, const T& x) {
  return static_cast<std::size_t>(std::find(v.begin(), v.end(), x) - v.begin());
}

}  // namespace detail

// ---- text tables ---------------------------------------------------------

class TextTable {
 public:
  explicit TextTable(std::vector<std::string> headers, std::vector<bool> right_aligned = {})
      : headers_(std::move(headers)), right_(std::move(right_aligned)) {
    right_.resize(headers_.size(), false);
  }
  void add(std::vector<std::string> row) {
    row.resize(headers_.size());
    rows_.push_back(std::move(row));
  }
  std::string render(std::string_view indent = "  ") const {
    std::vector<std::size_t> width(headers_.size(), 0);
    auto measure = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i)
        width[i] = std::max(width[i], static_cast<std::size_t>(textio::detail::code_points(r[i])));
    };
    measure(headers_);
    for (const auto& r : rows_) measure(r);
    auto line = [&](const std::vector<std::string>& r) {
      std::string out(indent);
      for (std::size_t i = 0; i < r.size(); ++i) {
        const std::string pad(width[i] - static_cast<std::size_t>(textio::detail::code_points(r[i])), ' ');
        const bool last = i + 1 == r.size();
        if (right_[i]) out += pad + r[i];
        else out += r[i] + (last ? "" : pad);
        if (!last) out += "  ";
      }
      while (!out.empty() && out.back() == ' ') out.pop_back();
      return out + "\n";
    };
    std::string out = line(headers_);
    for (const auto& r : rows_) out += line(r);
    return out;
  }

 private:
  std::vector<std::string> headers_;
  std::vector<bool> right_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::string category_letter(StrideCategory c) { return std::string(1, letter(c)); }

// ---- threats ---------------------------------------------------------------

inline std::string scope_name(threatgen::Scope s) {
  return s == threatgen::Scope::kAll ? "all" : "boundary";
}

inline std::string threats_text(const threatgen::ThreatSet& set, const SystemModel& model) {
  std::string out = "Threats for \"" + model.name + "\" (scope " + scope_name(set.scope) +
                    "): " + std::to_string(set.threats.size()) + "\n";
  if (set.threats.empty()) return out;
  TextTable t({"#", "Category", "Crossing", "Title"}, {true, false, false, false});
  for (const auto& th : set.threats)
    t.add({std::to_string(th.id), std::string(display_name(th.category)),
           th.boundary_crossing ? "yes" : "no", th.title});
  out += "\n" + t.render();

  TextTable by_asset({"Asset", "Threats", "S", "T", "R", "I", "D", "E"},
                     {false, true, true, true, true, true, true, true});
  for (const auto& [asset, threats] : threatgen::threats_by_asset(set, model)) {
    std::array<int, 6> counts{};
    for (const auto& th : threats) ++counts[index_of(th.category)];
    std::vector<std::string> row{asset, std::to_string(threats.size())};
    for (int c : counts) row.push_back(std::to_string(c));
    by_asset.add(std::move(row));
  }
  out += "\nBy asset:\n" + by_asset.render();
  return out;
}

inline const std::vector<std::string>& threat_csv_header() {
  static const std::vector<std::string> h{"id",     "category", "subject_kind", "subject",
                                          "source", "target",   "crossing",     "title"};
  return h;
}

inline std::string threats_csv(const threatgen::ThreatSet& set) {
  std::string out = csv_line(threat_csv_header());
  for (const auto& th : set.threats)
    out += csv_line({std::to_string(th.id), category_letter(th.category),
                     th.subject.is_flow ? "flow" : "element", th.subject.name, th.subject.source,
                     th.subject.target, csv_bool(th.boundary_crossing), th.title});
  return out;
}

inline threatgen::ThreatSet parse_threats_csv(std::string_view text, threatgen::Scope scope,
                                              const std::string& file = "<input>") {
  detail::ReportCsv csv(text, file, threat_csv_header());
  threatgen::ThreatSet set;
  set.scope = scope;
  for (const auto& row : csv.rows()) {
    Threat th;
    th.id = static_cast<int>(csv.number(row, "id"));
    th.category = csv.category(row, "category");
    const auto& kind = csv.cell(row, "subject_kind");
    if (kind.text != "flow" && kind.text != "element")
      throw ParseError(kind.span, "flow or element", textio::detail::describe_cell(kind));
    th.subject = {kind.text == "flow", csv.text(row, "subject"), csv.text(row, "source"),
                  csv.text(row, "target")};
    th.boundary_crossing = csv.boolean(row, "crossing");
    th.title = csv.text(row, "title");
    set.threats.push_back(std::move(th));
  }
  return set;
}

inline Json threats_json(const threatgen::ThreatSet& set) {
  Json threats = Json::array();
  for (const auto& th : set.threats) {
    Json subject = {{"kind", th.subject.is_flow ? "flow" : "element"}, {"name", th.subject.name}};
    if (th.subject.is_flow) {
      subject["source"] = th.subject.source;
      subject["target"] = th.subject.target;
    }
    threats.push_back({{"id", th.id},
                       {"category", category_letter(th.category)},
                       {"subject", subject},
                       {"title", th.title},
                       {"boundaryCrossing", th.boundary_crossing}});
  }
  return {{"scope", scope_name(set.scope)}, {"count", set.threats.size()}, {"threats", threats}};
}

inline threatgen::ThreatSet threats_from_json(const Json& j) {
  threatgen::ThreatSet set;
  set.scope = j.at("scope") == "all" ? threatgen::Scope::kAll : threatgen::Scope::kBoundary;
  for (const auto& t : j.at("threats")) {
    Threat th;
    th.id = t.at("id").get<int>();
    th.category = category_from_string(t.at("category").get<std::string>()).value();
    const auto& s = t.at("subject");
    th.subject.is_flow = s.at("kind") == "flow";
    th.subject.name = s.at("name").get<std::string>();
    if (th.subject.is_flow) {
      th.subject.source = s.at("source").get<std::string>();
      th.subject.target = s.at("target").get<std::string>();
    }
    th.title = t.at("title").get<std::string>();
    th.boundary_crossing = t.at("boundaryCrossing").get<bool>();
    set.threats.push_back(std::move(th));
  }
  return set;
}

// ---- attack trees ----------------------------------------------------------

inline std::string node_tags(const atree::AttackNode& n) {
  std::string s;
  if (n.category) s += " [" + category_letter(*n.category) + "]";
  if (n.is_risk) s += " [risk]";
  return s;
}

inline std::string trees_text(std::span<const atree::EvaluatedTree> forest) {
  std::string out;
  for (std::size_t i = 0; i < forest.size(); ++i) {
    const auto& et = forest[i];
    if (i > 0) out += "\n";
    out += "Tree \"" + et.tree.goal + "\" (asset " + et.tree.asset +
           "): " + format_display(et.root_value()) + "\n";
    et.visit([&](const atree::AttackNode& n, double v, int depth) {
      out += std::string(static_cast<std::size_t>(depth + 1) * 2, ' ') + format_display(v) + "  " +
             std::string(atree::kind_name(n.kind)) + (n.name.empty() ? "" : " " + n.name) +
             node_tags(n) + "\n";
    });
  }
  return out;
}

inline const std::vector<std::string>& tree_csv_header() {
  static const std::vector<std::string> h{"tree",     "asset", "depth", "kind",
                                          "name", "category", "risk", "value"};
  return h;
}

inline std::string trees_csv(std::span<const atree::EvaluatedTree> forest) {
  std::string out = csv_line(tree_csv_header());
  for (const auto& et : forest)
    et.visit([&](const atree::AttackNode& n, double v, int depth) {
      out += csv_line({et.tree.goal, et.tree.asset, std::to_string(depth),
                       std::string(atree::kind_name(n.kind)), n.name,
                       n.category ? category_letter(*n.category) : "", csv_bool(n.is_risk),
                       format_number(v)});
    });
  return out;
}

inline std::vector<atree::EvaluatedTree> parse_trees_csv(std::string_view text,
                                                         const std::string& file = "<input>") {
  detail::ReportCsv csv(text, file, tree_csv_header());
  std::vector<atree::EvaluatedTree> out;
  std::vector<atree::AttackNode*> stack;
  for (const auto& row : csv.rows()) {
    const int depth = static_cast<int>(csv.number(row, "depth"));
    atree::AttackNode n;
    const auto& kind = csv.cell(row, "kind");
    if (kind.text == "leaf") n.kind = atree::NodeKind::kLeaf;
    else if (kind.text == "and") n.kind = atree::NodeKind::kAnd;
    else if (kind.text == "or") n.kind = atree::NodeKind::kOr;
    else throw ParseError(kind.span, "leaf, and or or", textio::detail::describe_cell(kind));
    n.name = csv.text(row, "name");
    if (!csv.text(row, "category").empty()) n.category = csv.category(row, "category");
    n.is_risk = csv.boolean(row, "risk");
    const double v = csv.number(row, "value");
    if (n.kind == atree::NodeKind::kLeaf) n.leaf_value = v;

    if (depth == 0) {
      out.push_back({{csv.text(row, "tree"), csv.text(row, "asset"), std::move(n)}, {v}});
      stack.assign(1, &out.back().tree.root);
      continue;
    }
    if (out.empty() || depth > static_cast<int>(stack.size()) || !stack[depth - 1]->is_gate())
      throw ParseError(csv.cell(row, "depth").span, "depth under an enclosing gate",
                       std::to_string(depth));
    stack.resize(static_cast<std::size_t>(depth));
    stack.back()->children.push_back(std::move(n));
    stack.push_back(&stack.back()->children.back());
    out.back().values.push_back(v);
  }
  return out;
}

inline Json node_json(const atree::AttackNode& n, const std::vector<double>& values,
                      std::size_t& index) {
  Json j = {{"name", n.name}, {"kind", atree::kind_name(n.kind)}, {"value", values[index++]}};
  if (n.category) j["category"] = category_letter(*n.category);
  j["risk"] = n.is_risk;
  if (n.is_gate()) {
    Json children = Json::array();
    for (const auto& c : n.children) children.push_back(node_json(c, values, index));
    j["children"] = std::move(children);
  }
  return j;
}

inline Json trees_json(std::span<const atree::EvaluatedTree> forest) {
  Json trees = Json::array();
  for (const auto& et : forest) {
    std::size_t index = 0;
    trees.push_back({{"goal", et.tree.goal},
                     {"asset", et.tree.asset},
                     {"value", et.root_value()},
                     {"root", node_json(et.tree.root, et.values, index)}});
  }
  return {{"trees", trees}};
}

inline atree::AttackNode node_from_json(const Json& j, std::vector<double>& values) {
  atree::AttackNode n;
  n.name = j.at("name").get<std::string>();
  const auto kind = j.at("kind").get<std::string>();
  n.kind = kind == "leaf" ? atree::NodeKind::kLeaf
           : kind == "and" ? atree::NodeKind::kAnd
                           : atree::NodeKind::kOr;
  const double v = j.at("value").get<double>();
  values.push_back(v);
  if (n.kind == atree::NodeKind::kLeaf) n.leaf_value = v;
  if (j.contains("category"))
    n.category = category_from_string(j.at("category").get<std::string>()).value();
  n.is_risk = j.at("risk").get<bool>();
  if (j.contains("children"))
    for (const auto& c : j.at("children")) n.children.push_back(node_from_json(c, values));
  return n;
}

inline std::vector<atree::EvaluatedTree> trees_from_json(const Json& j) {
  std::vector<atree::EvaluatedTree> out;
  for (const auto& t : j.at("trees")) {
    atree::EvaluatedTree et;
    et.tree.goal = t.at("goal").get<std::string>();
    et.tree.asset = t.at("asset").get<std::string>();
    et.tree.root = node_from_json(t.at("root"), et.values);
    out.push_back(std::move(et));
  }
  return out;
}

struct ExploitabilityRow {
  std::string asset;
  StrideCategory category = StrideCategory::kSpoofing;
  std::optional<double> value;
  bool operator==(const ExploitabilityRow&) const = default;
};

inline std::string exploitability_text(std::span<const ExploitabilityRow> rows) {
  TextTable t({"Asset", "Category", "Exploitability"}, {false, false, true});
  for (const auto& r : rows)
    t.add({r.asset, std::string(display_name(r.category)),
           r.value ? format_display(*r.value) : "absent"});
  return t.render("");
}

inline std::string exploitability_csv(std::span<const ExploitabilityRow> rows) {
  std::string out = csv_line({"asset", "category", "exploitability"});
  for (const auto& r : rows)
    out += csv_line({r.asset, category_letter(r.category), r.value ? format_number(*r.value) : ""});
  return out;
}

inline Json exploitability_json(std::span<const ExploitabilityRow> rows) {
  Json out = Json::array();
  for (const auto& r : rows)
    out.push_back({{"asset", r.asset},
                   {"category", category_letter(r.category)},
                   {"exploitability", r.value ? Json(*r.value) : Json(nullptr)}});
  return {{"exploitability", out}};
}

// ---- risk analysis ---------------------------------------------------------

inline std::string risk_label(std::size_t r) { return "R" + std::to_string(r + 1); }
inline std::string objective_label(std::size_t o) { return "O" + std::to_string(o + 1); }

inline std::string risk_legend(const std::vector<std::string>& names,
                               const std::vector<std::string>& details = {}) {
  TextTable t({"", "Risk", details.empty() ? "" : "Category, asset"});
  for (std::size_t r = 0; r < names.size(); ++r)
    t.add({risk_label(r), names[r], details.empty() ? "" : details[r]});
  return t.render();
}

inline std::string analysis_text(const ddp::RiskAnalysis& a) {
  std::string out = "Risk matrix: " + std::to_string(a.objectives.size()) + " objectives, " +
                    std::to_string(a.risks.size()) + " risks\n\n";
  std::vector<std::string> headers{"Objective", "Importance", "Weight"};
  std::vector<bool> right{false, true, true};
  for (std::size_t r = 0; r < a.risks.size(); ++r) {
    headers.push_back(risk_label(r));
    right.push_back(true);
  }
  headers.push_back("Loss");
  right.push_back(true);
  TextTable grid(headers, right);
  if (a.risks.empty()) return out + grid.render();

  for (std::size_t o = 0; o < a.objectives.size(); ++o) {
    std::vector<std::string> row{objective_label(o) + " " + a.objectives[o],
                                 format_display(a.importances[o]), format_display(a.weights[o])};
    for (std::size_t r = 0; r < a.risks.size(); ++r) row.push_back(format_display(a.impact[o][r]));
    row.push_back(format_display(a.loss[o]));
    grid.add(std::move(row));
  }
  std::vector<std::string> likelihood{"Likelihood", "", ""};
  std::vector<std::string> crit{"Risk Criticality", "", ""};
  for (std::size_t r = 0; r < a.risks.size(); ++r) {
    likelihood.push_back(format_display(a.risks[r].likelihood));
    crit.push_back(format_display(a.criticality[r]));
  }
  grid.add(std::move(likelihood));
  grid.add(std::move(crit));
  out += grid.render();

  std::vector<std::string> names, details;
  for (const auto& r : a.risks) {
    names.push_back(r.name);
    details.push_back(category_letter(r.category) + ", " + r.asset);
  }
  out += "\nRisks:\n" + risk_legend(names, details);

  std::vector<std::string> rh{"Category", "Risks", "Criticality", "Loss"};
  std::vector<bool> rr{false, true, true, true};
  for (std::size_t o = 0; o < a.objectives.size(); ++o) {
    rh.push_back(objective_label(o));
    rr.push_back(true);
  }
  TextTable rollup(rh, rr);
  for (auto c : kAllCategories) {
    const auto& cr = a.rollup[index_of(c)];
    std::vector<std::string> row{std::string(display_name(c)), std::to_string(cr.risk_count),
                                 format_display(cr.criticality), format_display(cr.loss)};
    for (double v : cr.loss_by_objective) row.push_back(format_display(v));
    rollup.add(std::move(row));
  }
  out += "\nSTRIDE rollup (loss by objective):\n" + rollup.render();
  return out;
}

inline const std::vector<std::string>& analysis_csv_header() {
  static const std::vector<std::string> h{"record",     "risk",       "objective",   "category",
                                          "asset",      "likelihood", "criticality", "importance",
                                          "weight",     "impact",     "loss"};
  return h;
}

// Long form: objective, risk and impact records carry the matrix; rollup
// records carry the per-category series. Criticality is a column of its own.
inline std::string analysis_csv(const ddp::RiskAnalysis& a) {
  std::string out = csv_line(analysis_csv_header());
  if (a.risks.empty()) return out;
  auto n = [](double v) { return format_number(v); };
  for (std::size_t o = 0; o < a.objectives.size(); ++o)
    out += csv_line({"objective", "", a.objectives[o], "", "", "", "", n(a.importances[o]),
                     n(a.weights[o]), "", n(a.loss[o])});
  for (std::size_t r = 0; r < a.risks.size(); ++r) {
    const auto& risk = a.risks[r];
    out += csv_line({"risk", risk.name, "", category_letter(risk.category), risk.asset,
                     n(risk.likelihood), n(a.criticality[r]), "", "", "", ""});
  }
  for (std::size_t r = 0; r < a.risks.size(); ++r)
    for (std::size_t o = 0; o < a.objectives.size(); ++o)
      out += csv_line({"impact", a.risks[r].name, a.objectives[o], "", "", "", "", "", "",
                       n(a.impact[o][r]), ""});
  for (auto c : kAllCategories) {
    const auto& cr = a.rollup[index_of(c)];
    out += csv_line({"rollup", "", "", category_letter(c), "", "", n(cr.criticality), "", "", "",
                     n(cr.loss)});
    if (cr.risk_count == 0) continue;
    for (std::size_t o = 0; o < a.objectives.size(); ++o)
      out += csv_line({"rollup", "", a.objectives[o], category_letter(c), "", "", "", "", "", "",
                       n(cr.loss_by_objective[o])});
  }
  return out;
}

inline ddp::RiskAnalysis parse_analysis_csv(std::string_view text,
                                            const std::string& file = "<input>") {
  detail::ReportCsv csv(text, file, analysis_csv_header());
  ddp::RiskAnalysis a;
  struct Cell {
    std::string risk, objective;
    double value;
  };
  std::vector<Cell> impacts;
  struct RollupCell {
    StrideCategory category;
    std::string objective;
    double value;
  };
  std::vector<RollupCell> by_objective;
  for (auto& cr : a.rollup) cr = {};

  for (const auto& row : csv.rows()) {
    const auto& record = csv.cell(row, "record");
    if (record.text == "objective") {
      a.objectives.push_back(csv.text(row, "objective"));
      a.importances.push_back(csv.number(row, "importance"));
      a.weights.push_back(csv.number(row, "weight"));
      a.loss.push_back(csv.number(row, "loss"));
    } else if (record.text == "risk") {
      a.risks.push_back({csv.text(row, "risk"), csv.number(row, "likelihood"),
                         csv.category(row, "category"), csv.text(row, "asset")});
      a.criticality.push_back(csv.number(row, "criticality"));
    } else if (record.text == "impact") {
      impacts.push_back({csv.text(row, "risk"), csv.text(row, "objective"), csv.number(row, "impact")});
    } else if (record.text == "rollup") {
      auto c = csv.category(row, "category");
      if (csv.text(row, "objective").empty()) {
        a.rollup[index_of(c)].criticality = csv.number(row, "criticality");
        a.rollup[index_of(c)].loss = csv.number(row, "loss");
      } else {
        by_objective.push_back({c, csv.text(row, "objective"), csv.number(row, "loss")});
      }
    } else {
      throw ParseError(record.span, "objective, risk, impact or rollup record",
                       textio::detail::describe_cell(record));
    }
  }

  std::vector<std::string> risk_names;
  for (const auto& r : a.risks) risk_names.push_back(r.name);
  a.impact.assign(a.objectives.size(), std::vector<double>(a.risks.size(), 0.0));
  for (const auto& c : impacts) {
    const auto o = detail::position_of(a.objectives, c.objective);
    const auto r = detail::position_of(risk_names, c.risk);
    if (o == a.objectives.size() || r == risk_names.size())
      throw ValidationError("impact record for unknown risk or objective");
    a.impact[o][r] = c.value;
  }
  for (auto& cr : a.rollup) cr.loss_by_objective.assign(a.objectives.size(), 0.0);
  for (const auto& r : a.risks) ++a.rollup[index_of(r.category)].risk_count;
  for (const auto& c : by_objective) {
    const auto o = detail::position_of(a.objectives, c.objective);
    if (o == a.objectives.size()) throw ValidationError("rollup record for unknown objective");
    a.rollup[index_of(c.category)].loss_by_objective[o] = c.value;
  }
  return a;
}

inline Json analysis_json(const ddp::RiskAnalysis& a) {
  Json objectives = Json::array(), risks = Json::array(), rollup = Json::array();
  if (a.risks.empty()) return {{"objectives", objectives}, {"risks", risks}, {"rollup", rollup}};
  for (std::size_t o = 0; o < a.objectives.size(); ++o)
    objectives.push_back({{"name", a.objectives[o]},
                          {"importance", a.importances[o]},
                          {"weight", a.weights[o]},
                          {"loss", a.loss[o]}});
  for (std::size_t r = 0; r < a.risks.size(); ++r) {
    Json impact = Json::array();
    for (std::size_t o = 0; o < a.objectives.size(); ++o) impact.push_back(a.impact[o][r]);
    risks.push_back({{"name", a.risks[r].name},
                     {"category", category_letter(a.risks[r].category)},
                     {"asset", a.risks[r].asset},
                     {"likelihood", a.risks[r].likelihood},
                     {"criticality", a.criticality[r]},
                     {"impact", impact}});
  }
  for (auto c : kAllCategories) {
    const auto& cr = a.rollup[index_of(c)];
    rollup.push_back({{"category", category_letter(c)},
                      {"riskCount", cr.risk_count},
                      {"criticality", cr.criticality},
                      {"loss", cr.loss},
                      {"lossByObjective", cr.loss_by_objective}});
  }
  return {{"objectives", objectives}, {"risks", risks}, {"rollup", rollup}};
}

inline ddp::RiskAnalysis analysis_from_json(const Json& j) {
  ddp::RiskAnalysis a;
  for (auto& cr : a.rollup) cr = {};
  for (const auto& o : j.at("objectives")) {
    a.objectives.push_back(o.at("name").get<std::string>());
    a.importances.push_back(o.at("importance").get<double>());
    a.weights.push_back(o.at("weight").get<double>());
    a.loss.push_back(o.at("loss").get<double>());
  }
  a.impact.assign(a.objectives.size(), {});
  for (const auto& r : j.at("risks")) {
    a.risks.push_back({r.at("name").get<std::string>(), r.at("likelihood").get<double>(),
                       category_from_string(r.at("category").get<std::string>()).value(),
                       r.at("asset").get<std::string>()});
    a.criticality.push_back(r.at("criticality").get<double>());
    const auto& impact = r.at("impact");
    for (std::size_t o = 0; o < a.objectives.size(); ++o) a.impact[o].push_back(impact.at(o).get<double>());
  }
  for (const auto& c : j.at("rollup")) {
    auto& cr = a.rollup[index_of(category_from_string(c.at("category").get<std::string>()).value())];
    cr.risk_count = c.at("riskCount").get<std::size_t>();
    cr.criticality = c.at("criticality").get<double>();
    cr.loss = c.at("loss").get<double>();
    cr.loss_by_objective = c.at("lossByObjective").get<std::vector<double>>();
  }
  if (j.at("rollup").empty())
    for (auto& cr : a.rollup) cr.loss_by_objective.assign(a.objectives.size(), 0.0);
  return a;
}

// ---- portfolios ------------------------------------------------------------

struct PortfolioReport {
  ddp::EffectivenessMatrix effect;
  ddp::PortfolioEvaluation evaluation;
  double threshold = 0.8;
  double cutoff = 0.0;
  std::optional<ddp::PortfolioEvaluation> baseline;  // what-if reference (all selected)

  std::vector<std::string> uncovered() const {
    return ddp::uncovered_risks(effect, evaluation.crr, threshold, cutoff);
  }
  bool feasible() const { return uncovered().empty(); }
  bool operator==(const PortfolioReport&) const = default;
};

inline bool is_selected(const ddp::PortfolioEvaluation& p, const std::string& name) {
  return std::binary_search(p.selected.begin(), p.selected.end(), name);
}

inline std::string join_names(const std::vector<std::string>& names) {
  if (names.empty()) return "(none)";
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out;
}

inline std::string portfolio_text(const PortfolioReport& p) {
  const auto& e = p.effect;
  const auto& ev = p.evaluation;
  std::vector<std::string> headers{"Countermeasure", "Cost"};
  std::vector<bool> right{false, true};
  for (std::size_t r = 0; r < e.risks.size(); ++r) {
    headers.push_back(risk_label(r));
    right.push_back(true);
  }
  headers.insert(headers.end(), {"OE", "Selected"});
  right.insert(right.end(), {true, false});
  TextTable grid(headers, right);

  for (std::size_t c = 0; c < e.countermeasures.size(); ++c) {
    const auto& cm = e.countermeasures[c];
    std::vector<std::string> row{cm.name, format_display(cm.cost)};
    for (double v : e.reduction[c]) row.push_back(format_display(v));
    row.push_back(format_display(ev.oe[c]));
    row.push_back(is_selected(ev, cm.name) ? "yes" : "no");
    grid.add(std::move(row));
  }
  auto series = [&](std::string label, const std::vector<double>& values) {
    std::vector<std::string> row{std::move(label), ""};
    for (double v : values) row.push_back(format_display(v));
    grid.add(std::move(row));
  };
  series("Risk Criticality", e.criticality);
  if (p.baseline) series("Combined Risk Reduction (all)", p.baseline->crr);
  series("Combined Risk Reduction", ev.crr);
  series("Residual Criticality", ev.residual);
  std::vector<std::string> covered{"Covered", ""};
  const auto constrained = ddp::constrained_risks(e, p.cutoff);
  for (std::size_t r = 0; r < e.risks.size(); ++r) {
    const bool bound = std::find(constrained.begin(), constrained.end(), r) != constrained.end();
    covered.push_back(!bound ? "-" : ddp::covers(ev.crr[r], p.threshold) ? "yes" : "no");
  }
  grid.add(std::move(covered));

  std::string out = "Countermeasure effectiveness: " + std::to_string(e.countermeasures.size()) +
                    " countermeasures, " + std::to_string(e.risks.size()) + " risks\n\n";
  out += grid.render();
  if (!e.risks.empty()) out += "\nRisks:\n" + risk_legend(e.risks);
  out += "\nSelection: " + join_names(ev.selected) + "\n";
  out += "Total cost " + format_display(ev.total_cost) + ", total residual " +
         format_display(ev.total_residual) + "\n";
  const auto missing = p.uncovered();
  out += "Threshold " + format_display(p.threshold) + ", cutoff " + format_display(p.cutoff) + ": " +
         (missing.empty() ? "feasible" : "not covered: " + join_names(missing)) + "\n";
  return out;
}

inline const std::vector<std::string>& portfolio_csv_header() {
  static const std::vector<std::string> h{"record",    "countermeasure", "risk", "cost",
                                          "selected",  "oe",             "reduction",
                                          "criticality", "crr",          "residual", "value"};
  return h;
}

inline std::string portfolio_csv(const PortfolioReport& p) {
  const auto& e = p.effect;
  const auto& ev = p.evaluation;
  auto n = [](double v) { return format_number(v); };
  std::string out = csv_line(portfolio_csv_header());
  for (std::size_t c = 0; c < e.countermeasures.size(); ++c) {
    const auto& cm = e.countermeasures[c];
    out += csv_line({"countermeasure", cm.name, "", n(cm.cost), csv_bool(is_selected(ev, cm.name)),
                     n(ev.oe[c]), "", "", "", "", ""});
  }
  for (std::size_t c = 0; c < e.countermeasures.size(); ++c)
    for (std::size_t r = 0; r < e.risks.size(); ++r)
      out += csv_line({"reduction", e.countermeasures[c].name, e.risks[r], "", "", "",
                       n(e.reduction[c][r]), "", "", "", ""});
  for (std::size_t r = 0; r < e.risks.size(); ++r)
    out += csv_line({"risk", "", e.risks[r], "", "", "", "", n(e.criticality[r]), n(ev.crr[r]),
                     n(ev.residual[r]), ""});
  if (p.baseline)
    for (std::size_t r = 0; r < e.risks.size(); ++r)
      out += csv_line({"baseline", "", e.risks[r], "", "", "", "", "", n(p.baseline->crr[r]),
                       n(p.baseline->residual[r]), ""});
  auto summary = [&](const std::string& name, const std::string& v) {
    out += csv_line({name, "", "", "", "", "", "", "", "", "", v});
  };
  summary("total-cost", n(ev.total_cost));
  summary("total-residual", n(ev.total_residual));
  if (p.baseline) {
    summary("baseline-cost", n(p.baseline->total_cost));
    summary("baseline-residual", n(p.baseline->total_residual));
  }
  summary("threshold", n(p.threshold));
  summary("cutoff", n(p.cutoff));
  summary("feasible", csv_bool(p.feasible()));
  return out;
}

inline PortfolioReport parse_portfolio_csv(std::string_view text,
                                           const std::string& file = "<input>") {
  detail::ReportCsv csv(text, file, portfolio_csv_header());
  PortfolioReport p;
  auto& e = p.effect;
  auto& ev = p.evaluation;
  ddp::PortfolioEvaluation base;
  bool has_baseline = false;
  struct Cell {
    std::string cm, risk;
    double value;
  };
  std::vector<Cell> reductions;
  for (const auto& row : csv.rows()) {
    const auto& record = csv.cell(row, "record");
    const auto& r = record.text;
    if (r == "countermeasure") {
      e.countermeasures.push_back({csv.text(row, "countermeasure"), csv.number(row, "cost")});
      if (csv.boolean(row, "selected")) ev.selected.push_back(e.countermeasures.back().name);
      ev.oe.push_back(csv.number(row, "oe"));
    } else if (r == "reduction") {
      reductions.push_back({csv.text(row, "countermeasure"), csv.text(row, "risk"),
                            csv.number(row, "reduction")});
    } else if (r == "risk") {
      e.risks.push_back(csv.text(row, "risk"));
      e.criticality.push_back(csv.number(row, "criticality"));
      ev.crr.push_back(csv.number(row, "crr"));
      ev.residual.push_back(csv.number(row, "residual"));
    } else if (r == "baseline") {
      has_baseline = true;
      base.crr.push_back(csv.number(row, "crr"));
      base.residual.push_back(csv.number(row, "residual"));
    } else if (r == "total-cost") {
      ev.total_cost = csv.number(row, "value");
    } else if (r == "total-residual") {
      ev.total_residual = csv.number(row, "value");
    } else if (r == "baseline-cost") {
      base.total_cost = csv.number(row, "value");
    } else if (r == "baseline-residual") {
      base.total_residual = csv.number(row, "value");
    } else if (r == "threshold") {
      p.threshold = csv.number(row, "value");
    } else if (r == "cutoff") {
      p.cutoff = csv.number(row, "value");
    } else if (r == "feasible") {
      csv.boolean(row, "value");  // derived; checked for form only
    } else {
      throw ParseError(record.span, "portfolio record", textio::detail::describe_cell(record));
    }
  }
  const auto names = e.countermeasure_names();
  e.reduction.assign(e.countermeasures.size(), std::vector<double>(e.risks.size(), 0.0));
  for (const auto& c : reductions) {
    const auto ci = detail::position_of(names, c.cm);
    const auto ri = detail::position_of(e.risks, c.risk);
    if (ci == names.size() || ri == e.risks.size())
      throw ValidationError("reduction record for unknown countermeasure or risk");
    e.reduction[ci][ri] = c.value;
  }
  std::sort(ev.selected.begin(), ev.selected.end());
  if (has_baseline) {
    base.selected = names;
    std::sort(base.selected.begin(), base.selected.end());
    base.oe = ev.oe;
    p.baseline = std::move(base);
  }
  return p;
}

inline Json evaluation_summary_json(const ddp::PortfolioEvaluation& ev) {
  return {{"selection", ev.selected}, {"crr", ev.crr}, {"residual", ev.residual},
          {"totalCost", ev.total_cost}, {"totalResidual", ev.total_residual}};
}

inline Json portfolio_json(const PortfolioReport& p) {
  const auto& e = p.effect;
  const auto& ev = p.evaluation;
  Json risks = Json::array(), cms = Json::array();
  for (std::size_t r = 0; r < e.risks.size(); ++r)
    risks.push_back({{"name", e.risks[r]},
                     {"criticality", e.criticality[r]},
                     {"crr", ev.crr[r]},
                     {"residual", ev.residual[r]}});
  for (std::size_t c = 0; c < e.countermeasures.size(); ++c)
    cms.push_back({{"name", e.countermeasures[c].name},
                   {"cost", e.countermeasures[c].cost},
                   {"oe", ev.oe[c]},
                   {"selected", is_selected(ev, e.countermeasures[c].name)},
                   {"reduction", e.reduction[c]}});
  Json out = {{"risks", risks},
              {"countermeasures", cms},
              {"selection", ev.selected},
              {"portfolio",
               {{"totalCost", ev.total_cost},
                {"totalResidual", ev.total_residual},
                {"feasible", p.feasible()},
                {"threshold", p.threshold},
                {"cutoff", p.cutoff},
                {"uncovered", p.uncovered()}}}};
  if (p.baseline) out["baseline"] = evaluation_summary_json(*p.baseline);
  return out;
}

inline PortfolioReport portfolio_from_json(const Json& j) {
  PortfolioReport p;
  auto& e = p.effect;
  auto& ev = p.evaluation;
  for (const auto& r : j.at("risks")) {
    e.risks.push_back(r.at("name").get<std::string>());
    e.criticality.push_back(r.at("criticality").get<double>());
    ev.crr.push_back(r.at("crr").get<double>());
    ev.residual.push_back(r.at("residual").get<double>());
  }
  for (const auto& c : j.at("countermeasures")) {
    e.countermeasures.push_back({c.at("name").get<std::string>(), c.at("cost").get<double>()});
    e.reduction.push_back(c.at("reduction").get<std::vector<double>>());
    ev.oe.push_back(c.at("oe").get<double>());
  }
  ev.selected = j.at("selection").get<std::vector<std::string>>();
  const auto& s = j.at("portfolio");
  ev.total_cost = s.at("totalCost").get<double>();
  ev.total_residual = s.at("totalResidual").get<double>();
  p.threshold = s.at("threshold").get<double>();
  p.cutoff = s.at("cutoff").get<double>();
  if (j.contains("baseline")) {
    const auto& b = j.at("baseline");
    ddp::PortfolioEvaluation base;
    base.selected = b.at("selection").get<std::vector<std::string>>();
    base.crr = b.at("crr").get<std::vector<double>>();
    base.residual = b.at("residual").get<std::vector<double>>();
    base.oe = ev.oe;
    base.total_cost = b.at("totalCost").get<double>();
    base.total_residual = b.at("totalResidual").get<double>();
    p.baseline = std::move(base);
  }
  return p;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace stridesea::report
