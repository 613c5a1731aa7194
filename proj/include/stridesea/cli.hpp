#pragma once

#include <algorithm>
#include <csignal>
#include <iostream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stridesea/atree.hpp"
#include "stridesea/ddp.hpp"
#include "stridesea/error.hpp"
#include "stridesea/pipeline.hpp"
#include "stridesea/portfolio.hpp"
#include "stridesea/report.hpp"
#include "stridesea/service.hpp"
#include "stridesea/threatgen.hpp"

namespace stridesea::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kParse = 2,
  kInfeasible = 3,
  kIo = 4,
};

struct RunConfig {
  std::string subcommand;
  std::string model;
  std::vector<std::string> inputs;
  std::string scope = "all";
  std::string rules;
  std::string format = "text";
  std::string impact;
  std::string effect;
  std::optional<std::string> select;
  std::string asset;
  std::string category;
  double threshold = 0.8;
  double cutoff = 0.0;
  int port = service::kDefaultPort;
  std::string host = "127.0.0.1";
  std::string static_dir;
};

namespace detail {

inline std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    std::string name = s.substr(start, comma - start);
    const auto a = name.find_first_not_of(" \t");
    const auto b = name.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(name.substr(a, b - a + 1));
    start = comma + 1;
  }
  return out;
}

inline report::Format format_of(const RunConfig& c) {
  auto f = report::parse_format(c.format);
  if (!f) throw ValidationError("unknown format \"" + c.format + "\" (text, csv or json)");
  return *f;
}

inline void check_ranges(const RunConfig& c) {
  if (!(c.threshold >= 0.0 && c.threshold <= 1.0))
    throw ValidationError("--threshold must lie in [0,1]");
  if (!(c.cutoff >= 0.0)) throw ValidationError("--cutoff must be non-negative");
  if (c.port < 0 || c.port > 65535) throw ValidationError("--port must lie in [0,65535]");
}

template <class Text, class Csv, class JsonFn>
std::string emit(report::Format f, Text text, Csv csv, JsonFn json) {
  switch (f) {
    case report::Format::kText: return text();
    case report::Format::kCsv: return csv();
    case report::Format::kJson: return report::dump(json());
  }
  return {};
}

inline void print_warnings(const std::vector<Diagnostic>& ds, std::ostream& err) {
  for (const auto& d : ds)
    if (d.severity == Severity::kWarning) err << d.to_string() << "\n";
}

inline int cmd_validate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto model = load_model(c.model);
  const auto diagnostics = validate_model(model);
  print_warnings(diagnostics, err);
  out << "model \"" << model.name << "\": " << model.elements.size() << " elements, "
      << model.flows.size() << " flows, " << model.assets.size() << " assets, "
      << model.objectives.size() << " objectives\n";
  if (!c.inputs.empty()) {
    const auto forest = load_forest(c.inputs);
    check_tree_assets(forest, model);
    for (const auto& t : forest)
      if (auto e = atree::find_structural_error(t.root)) throw ValidationError(*e);
    const auto evaluated = atree::evaluate(std::span<const atree::AttackTree>(forest));
    const auto risks = atree::extract_risks(evaluated);
    out << forest.size() << " attack trees, " << risks.size() << " risks\n";
  }
  out << "ok\n";
  return kOk;
}

inline int cmd_threats(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto f = format_of(c);
  if (c.scope != "all" && c.scope != "boundary")
    throw ValidationError("unknown scope \"" + c.scope + "\" (all or boundary)");
  const auto model = load_model(c.model);
  print_warnings(validate_model(model), err);
  const auto rules = c.rules.empty() ? threatgen::default_rules()
                                     : threatgen::load_rules(read_file(c.rules), c.rules);
  const auto set = threatgen::generate_threats(
      model, rules, c.scope == "all" ? threatgen::Scope::kAll : threatgen::Scope::kBoundary);
  out << emit(
      f, [&] { return report::threats_text(set, model); }, [&] { return report::threats_csv(set); },
      [&] { return report::threats_json(set); });
  return kOk;
}

inline int cmd_atree_eval(const RunConfig& c, std::ostream& out) {
  const auto f = format_of(c);
  const auto forest = load_forest(c.inputs);
  auto evaluated = atree::evaluate(std::span<const atree::AttackTree>(forest));
  if (!c.asset.empty()) {
    std::erase_if(evaluated, [&](const atree::EvaluatedTree& et) { return et.tree.asset != c.asset; });
    if (evaluated.empty()) throw UnknownNameError("asset", c.asset);
  }
  if (c.category.empty()) {
    out << emit(
        f, [&] { return report::trees_text(evaluated); }, [&] { return report::trees_csv(evaluated); },
        [&] { return report::trees_json(evaluated); });
    return kOk;
  }
  const auto category = category_from_string(c.category);
  if (!category) throw ValidationError("unknown category \"" + c.category + "\" (S, T, R, I, D or E)");
  std::vector<std::string> assets;
  for (const auto& et : evaluated)
    if (std::find(assets.begin(), assets.end(), et.tree.asset) == assets.end())
      assets.push_back(et.tree.asset);
  std::vector<report::ExploitabilityRow> rows;
  for (const auto& a : assets)
    rows.push_back({a, *category, atree::category_exploitability(evaluated, a, *category)});
  out << emit(
      f, [&] { return report::exploitability_text(rows); },
      [&] { return report::exploitability_csv(rows); },
      [&] { return report::exploitability_json(rows); });
  return kOk;
}

inline int cmd_risk(const RunConfig& c, std::ostream& out) {
  const auto f = format_of(c);
  const auto p = load_pipeline(c.model, c.inputs, c.impact);
  out << emit(
      f, [&] { return report::analysis_text(p.analysis); },
      [&] { return report::analysis_csv(p.analysis); },
      [&] { return report::analysis_json(p.analysis); });
  return kOk;
}

inline ddp::PortfolioEvaluation evaluate_all(const ddp::EffectivenessMatrix& e) {
  const auto names = e.countermeasure_names();
  return ddp::evaluate_portfolio(e, std::span<const std::string>(names));
}

inline int cmd_cm(const std::string& action, const RunConfig& c, std::ostream& out) {
  const auto f = format_of(c);
  report::PortfolioReport p;
  p.effect = load_effect(c.effect);
  p.threshold = c.threshold;
  p.cutoff = c.cutoff;
  std::string preface;
  if (action == "optimize") {
    p.evaluation = ddp::optimize_portfolio(p.effect, c.threshold, c.cutoff);
    preface = "Optimal portfolio at threshold " + format_display(c.threshold) + " (cutoff " +
              format_display(c.cutoff) + "): " + report::join_names(p.evaluation.selected) + "\n\n";
  } else {
    if (c.select) {
      const auto names = split_names(*c.select);
      p.evaluation = ddp::evaluate_portfolio(p.effect, std::span<const std::string>(names));
    } else {
      p.evaluation = evaluate_all(p.effect);
    }
    if (action == "whatif") p.baseline = evaluate_all(p.effect);
  }
  out << emit(
      f, [&] { return preface + report::portfolio_text(p); },
      [&] { return report::portfolio_csv(p); }, [&] { return report::portfolio_json(p); });
  return kOk;
}

inline int cmd_serve(const RunConfig& c, std::ostream& out) {
  const auto p = load_pipeline(c.model, c.inputs, c.impact);
  service::Session session(p.analysis, load_bound_effect(c.effect, p.analysis));
  service::Server server(session, c.static_dir);
  const int port = server.bind(c.host, c.port);
  out << "serving on http://" << c.host << ":" << port << "/\n" << std::flush;
  server.listen();
  return kOk;
}

}  // namespace detail

// `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"STRIDE threat modeling, attack-tree and DDP risk analysis", "stridesea"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "text, csv or json")->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "Parse and validate a model and optional attack trees");
  validate->add_option("model", c.model, "System model (.ssm)")->required();
  validate->add_option("trees", c.inputs, "Attack tree files (.atd)");

  auto* threats = app.add_subcommand("threats", "Generate STRIDE-per-element threats");
  threats->add_option("model", c.model, "System model (.ssm)")->required();
  threats->add_option("--scope", c.scope, "all or boundary")->capture_default_str();
  threats->add_option("--rules", c.rules, "Rule table CSV");
  add_format(threats);

  auto* atree_cmd = app.add_subcommand("atree", "Attack-tree commands");
  atree_cmd->require_subcommand(1);
  auto* atree_eval = atree_cmd->add_subcommand("eval", "Evaluate attack trees bottom-up");
  atree_eval->add_option("atd", c.inputs, "Attack tree files (.atd)")->required();
  atree_eval->add_option("--asset", c.asset, "Only trees targeting this asset");
  atree_eval->add_option("--category", c.category, "Report the subgoal tagged with this category");
  add_format(atree_eval);

  auto* risk = app.add_subcommand("risk", "Risk criticality and loss of objectives");
  risk->add_option("model", c.model, "System model (.ssm)")->required();
  risk->add_option("atd", c.inputs, "Attack tree files (.atd)")->required();
  risk->add_option("--impact", c.impact, "Impact matrix CSV")->required();
  add_format(risk);

  auto* cm = app.add_subcommand("cm", "Countermeasure effectiveness");
  cm->require_subcommand(1);
  std::string cm_action;
  for (const char* action : {"eval", "whatif", "optimize"}) {
    auto* sub = cm->add_subcommand(action, std::string(action) == "eval"       ? "Evaluate a selection"
                                           : std::string(action) == "whatif" ? "Compare a selection with all countermeasures"
                                                                             : "Minimum-cost portfolio");
    sub->add_option("--effect", c.effect, "Effectiveness matrix CSV")->required();
    const std::string name = action;
    if (name != "optimize") {
      auto* select = sub->add_option("--select", c.select, "Comma-separated countermeasure names");
      if (name == "whatif") select->required();
    }
    sub->add_option("--threshold", c.threshold, "Required combined risk reduction")->capture_default_str();
    sub->add_option("--cutoff", c.cutoff, "Only risks with criticality >= cutoff are constrained")
        ->capture_default_str();
    add_format(sub);
    sub->callback([&cm_action, action] { cm_action = action; });
  }

  auto* serve = app.add_subcommand("serve", "Run the what-if HTTP service");
  serve->add_option("model", c.model, "System model (.ssm)")->required();
  serve->add_option("atd", c.inputs, "Attack tree files (.atd)")->required();
  serve->add_option("--impact", c.impact, "Impact matrix CSV")->required();
  serve->add_option("--effect", c.effect, "Effectiveness matrix CSV")->required();
  serve->add_option("--port", c.port, "TCP port (0 picks a free one)")->capture_default_str();
  serve->add_option("--host", c.host, "Listen address")->capture_default_str();
  serve->add_option("--static", c.static_dir, "Directory of console assets served at /");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }
  // Nested --help is reported as CallForHelp above; anything else parsed.

  try {
    detail::check_ranges(c);
    if (validate->parsed()) return detail::cmd_validate(c, out, err);
    if (threats->parsed()) return detail::cmd_threats(c, out, err);
    if (atree_eval->parsed()) return detail::cmd_atree_eval(c, out);
    if (risk->parsed()) return detail::cmd_risk(c, out);
    if (cm->parsed()) return detail::cmd_cm(cm_action, c, out);
    if (serve->parsed()) return detail::cmd_serve(c, out);
    err << "error: no subcommand\n";
    return kParse;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ValidationError& e) {
    if (e.diagnostics().size() > 1 || (e.diagnostics().size() == 1 && e.diagnostics()[0].where)) {
      for (const auto& d : e.diagnostics()) err << d.to_string() << "\n";
    } else {
      err << "error: " << e.what() << "\n";
    }
    return kValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace stridesea::cli
