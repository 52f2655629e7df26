#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "gbs/analysis.hpp"

namespace gbs {

/// Echo of one resolved command invocation; every report embeds it so a
/// run can be reproduced from its own output.
struct RunConfig {
  std::string protocol;
  double a_mag = 1.0;
  double a_phase = 0.0;
  double b_mag = 0.0;
  double b_phase = 0.0;
  std::string control = "g";
  double phi = 0.0;
  double theta = 0.0;
  double varphi = 0.0;
  std::string mode = "enumerate";
  long long shots = 10000;
  std::uint64_t seed = 2026;
  std::vector<double> epsilons;
  std::string format = "json";
  bool timestamp = true;
};

nlohmann::ordered_json config_json(const RunConfig& config);

/// Base report: protocol, config echo, branch table, seed, rng (and a
/// timestamp unless suppressed).
nlohmann::ordered_json branch_report(const RunConfig& config, const BranchTree& tree);

void add_sample_section(nlohmann::ordered_json& report, const SampleStats& stats);
void add_gate_section(nlohmann::ordered_json& report, const GateMatrix& gate,
                      double fidelity);
void add_jitter_section(nlohmann::ordered_json& report,
                        const std::vector<JitterPoint>& points);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

nlohmann::ordered_json verify_report(const RunConfig& config,
                                     const std::vector<CheckResult>& checks);

/// format: "json", "csv" or "pretty".
std::string render(const nlohmann::ordered_json& report, const std::string& format);

}  // namespace gbs
