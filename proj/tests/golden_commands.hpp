#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stridesea::testing {

// Run from the fixture directory so reports and diagnostics carry relative paths.
struct GoldenCommand {
  std::string golden;  // file under tests/golden
  std::vector<std::string> args;
  int exit_code = 0;
};

inline void PrintTo(const GoldenCommand& c, std::ostream* os) { *os << c.golden; }

inline const std::vector<GoldenCommand>& golden_commands() {
  static const std::vector<GoldenCommand> commands = {
      {"validate.txt", {"validate", "ois.ssm", "trees/tampering.atd", "trees/tampering_memory.atd"}},
      {"threats_all.txt", {"threats", "ois.ssm", "--scope", "all"}},
      {"threats_boundary.csv", {"threats", "ois.ssm", "--scope", "boundary", "--format", "csv"}},
      {"threats_custom_rules.json", {"threats", "ois.ssm", "--rules", "default_rules.csv", "--format", "json"}},
      {"atree_tampering.txt", {"atree", "eval", "trees/tampering.atd"}},
      {"atree_tampering.json", {"atree", "eval", "trees/tampering.atd", "--format", "json"}},
      {"atree_forest.csv", {"atree", "eval", "trees/tampering.atd", "trees/tampering_memory.atd", "--format", "csv"}},
      {"atree_exploitability.txt",
       {"atree", "eval", "trees/tampering.atd", "--asset", "Immunization Records", "--category", "T"}},
      {"risk.txt", {"risk", "ois.ssm", "trees/tampering.atd", "trees/tampering_memory.atd", "--impact", "impact.csv"}},
      {"risk.csv",
       {"risk", "ois.ssm", "trees/tampering.atd", "trees/tampering_memory.atd", "--impact", "impact.csv", "--format",
        "csv"}},
      {"risk.json",
       {"risk", "ois.ssm", "trees/tampering.atd", "trees/tampering_memory.atd", "--impact", "impact.csv", "--format",
        "json"}},
      {"cm_eval.txt", {"cm", "eval", "--effect", "effect.csv"}},
      {"cm_eval.csv", {"cm", "eval", "--effect", "effect.csv", "--format", "csv"}},
      {"cm_whatif.txt",
       {"cm", "whatif", "--effect", "effect.csv", "--select",
        "Use cryptography,Use appropriate access control mechanisms,Validate and sanitize untrusted input"}},
      {"cm_optimize.json", {"cm", "optimize", "--effect", "effect.csv", "--threshold", "0.8", "--format", "json"}},
      {"cm_optimize_infeasible.txt", {"cm", "optimize", "--effect", "effect.csv", "--threshold", "0.9"}, 3},
  };
  return commands;
}

}  // namespace stridesea::testing
