#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "stridesea/ddp.hpp"
#include "stridesea/pipeline.hpp"

namespace stridesea::testing {

inline std::string fixture(const std::string& rel) { return std::string(STRIDESEA_FIXTURES) + "/" + rel; }

inline std::vector<std::string> fixture_trees() {
  return {fixture("trees/tampering.atd"), fixture("trees/tampering_memory.atd")};
}

inline Pipeline fixture_pipeline() {
  return load_pipeline(fixture("ois.ssm"), fixture_trees(), fixture("impact.csv"));
}

inline ddp::EffectivenessMatrix fixture_effect() { return load_effect(fixture("effect.csv")); }

inline bool near(double a, double b, double tol = 1e-12) { return std::fabs(a - b) <= tol; }

inline const std::string kSql = "Perform SQL Injection Attacks";
inline const std::string kPhi = "Modify PHI at Rest";
inline const std::string kTransmission = "Tamper with Immunization Records during transmission";
inline const std::string kJson = "Tamper with Dataflow containing JSON";
inline const std::string kCredentials = "Exploit Weak OIS Credential Storage";
inline const std::string kCollision = "Exploit Hash Collision";
inline const std::string kOverlap = "Overlap Data in OIS Memory";

inline const std::string kCrypto = "Use cryptography";
inline const std::string kAccess = "Use appropriate access control mechanisms";
inline const std::string kValidation = "Validate and sanitize untrusted input";
inline const std::string kFim = "Use file integrity monitoring";

// Hand-typed reference matrices with the arithmetic spelled out directly
// (no library code). Risk order: SQL, PHI, transmission, JSON, credentials,
// collision, overlap. Objective order as in the fixture model.
namespace oracle {

inline constexpr std::array<double, 5> kImportance = {1.0, 1.0, 0.8, 0.5, 0.2};

inline constexpr std::array<std::array<double, 7>, 5> kImpact = {{
    {0.5, 1.0, 1.0, 0.5, 0.5, 0.0, 0.0},
    {0.5, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0},
    {0.0, 1.0, 0.0, 0.0, 0.0, 0.5, 0.0},
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
}};

// SQL = AND(high, high); JSON = OR(low, low); the rest are single leaves.
inline std::array<double, 7> likelihood() {
  return {0.9 * 0.9, 0.1, 0.1, 1.0 - (1.0 - 0.1) * (1.0 - 0.1), 0.1, 0.5, 0.5};
}

inline double importance_sum() { return 1.0 + 1.0 + 0.8 + 0.5 + 0.2; }

inline std::array<double, 7> criticality() {
  const auto l = likelihood();
  std::array<double, 7> out{};
  for (int r = 0; r < 7; ++r) {
    double s = 0.0;
    for (int o = 0; o < 5; ++o) s += kImpact[o][r] * (kImportance[o] / importance_sum());
    out[r] = l[r] * s;
  }
  return out;
}

inline std::array<double, 5> loss() {
  const auto l = likelihood();
  std::array<double, 5> out{};
  for (int o = 0; o < 5; ++o) {
    double s = 0.0;
    for (int r = 0; r < 7; ++r) s += kImpact[o][r] * l[r];
    out[o] = (kImportance[o] / importance_sum()) * s;
  }
  return out;
}

// Countermeasure order: cryptography, access control, input validation, FIM.
inline constexpr std::array<std::array<double, 7>, 4> kReduction = {{
    {0.0, 0.8, 0.8, 0.8, 0.8, 0.8, 0.0},
    {0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.8},
    {0.8, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.0},
}};

inline std::array<double, 7> crr(std::array<bool, 4> selected) {
  std::array<double, 7> out{};
  for (int r = 0; r < 7; ++r) {
    double keep = 1.0;
    for (int c = 0; c < 4; ++c)
      if (selected[c]) keep *= 1.0 - kReduction[c][r];
    out[r] = 1.0 - keep;
  }
  return out;
}

inline double oe(int cm, const std::array<double, 7>& crit) {
  double s = 0.0;
  for (int r = 0; r < 7; ++r) s += kReduction[cm][r] * crit[r];
  return s;
}

// The effect fixture's reference criticality row: the recomputed values with
// the transmission and overlap cells exchanged.
inline std::array<double, 7> reference_criticality() {
  auto c = criticality();
  std::swap(c[2], c[6]);
  return c;
}

}  // namespace oracle

}  // namespace stridesea::testing
