#pragma once

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stridesea/atree.hpp"
#include "stridesea/ddp.hpp"
#include "stridesea/error.hpp"
#include "stridesea/model.hpp"
#include "stridesea/textio/atd.hpp"
#include "stridesea/textio/csv.hpp"
#include "stridesea/textio/ssm.hpp"

namespace stridesea {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path + ": " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

inline SystemModel load_model(const std::string& path) {
  return textio::parse_system_model(read_file(path), path);
}

inline atree::AttackForest load_forest(const std::vector<std::string>& paths) {
  std::vector<textio::SourceText> sources;
  for (const auto& p : paths) sources.push_back({p, read_file(p)});
  return textio::parse_attack_trees(sources);
}

// Every tree must target a declared asset.
inline void check_tree_assets(const atree::AttackForest& forest, const SystemModel& model) {
  std::vector<Diagnostic> errors;
  for (const auto& t : forest)
    if (!model.has_asset(t.asset))
      errors.push_back({Severity::kError, t.goal, "tree targets unknown asset \"" + t.asset + "\""});
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

struct Pipeline {
  SystemModel model;
  atree::AttackForest forest;
  std::vector<atree::EvaluatedTree> evaluated;
  ddp::RiskImpactMatrix matrix;
  ddp::RiskAnalysis analysis;
};

// Model -> trees -> risks -> impact matrix -> analysis.
inline Pipeline load_pipeline(const std::string& model_path, const std::vector<std::string>& tree_paths,
                              const std::string& impact_path) {
  Pipeline p;
  p.model = load_model(model_path);
  p.forest = load_forest(tree_paths);
  check_tree_assets(p.forest, p.model);
  p.evaluated = atree::evaluate(std::span<const atree::AttackTree>(p.forest));
  const auto risks = atree::extract_risks(p.evaluated);
  p.matrix = textio::parse_impact_csv(read_file(impact_path), p.model, risks, impact_path);
  p.analysis = ddp::analyze(p.matrix);
  return p;
}

inline std::vector<textio::CriticalRisk> critical_risks(const ddp::RiskAnalysis& a) {
  std::vector<textio::CriticalRisk> out;
  for (std::size_t r = 0; r < a.risks.size(); ++r) out.push_back({a.risks[r].name, a.criticality[r]});
  return out;
}

// Effect matrix bound to the analysis: criticalities come from the analysis.
inline ddp::EffectivenessMatrix load_bound_effect(const std::string& path, const ddp::RiskAnalysis& a) {
  const auto risks = critical_risks(a);
  auto e = textio::parse_effect_csv(read_file(path), risks, path);
  ddp::check_effectiveness(e);
  return e;
}

inline ddp::EffectivenessMatrix load_effect(const std::string& path) {
  auto e = textio::parse_effect_csv(read_file(path), path);
  ddp::check_effectiveness(e);
  return e;
}

}  // namespace stridesea
