#include "gbs/report.hpp"

#include <cstdio>
#include <ctime>
#include <sstream>

namespace gbs {

namespace {

using nlohmann::ordered_json;

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json amplitudes_json(const Vector& amps) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    rows.push_back({amps[i].real(), amps[i].imag()});
  }
  return rows;
}

ordered_json base_report(const RunConfig& config) {
  ordered_json report;
  report["protocol"] = config.protocol;
  report["config"] = config_json(config);
  return report;
}

void finish_report(ordered_json& report, const RunConfig& config) {
  report["seed"] = config.seed;
  report["rng"] = "mt19937_64";
  if (config.timestamp) report["timestamp"] = utc_timestamp();
}

std::string csv_of(const ordered_json& report) {
  std::ostringstream out;
  if (report.contains("points")) {
    out << "epsilon,fidelity\n";
    for (const auto& p : report["points"]) {
      out << num17(p["epsilon"].get<double>()) << ','
          << num17(p["fidelity"].get<double>()) << '\n';
    }
    return out.str();
  }
  if (report.contains("checks")) {
    out << "name,passed,detail\n";
    for (const auto& c : report["checks"]) {
      out << c["name"].get<std::string>() << ','
          << (c["passed"].get<bool>() ? "true" : "false") << ','
          << c["detail"].get<std::string>() << '\n';
    }
    return out.str();
  }
  if (report.contains("sample")) {
    out << "label,count,frequency\n";
    const auto& sample = report["sample"];
    for (const auto& c : sample["counts"].items()) {
      const double freq = static_cast<double>(c.value().get<long long>()) /
                          static_cast<double>(sample["shots"].get<long long>());
      out << c.key() << ',' << c.value().get<long long>() << ',' << num17(freq)
          << '\n';
    }
    return out.str();
  }
  if (report.contains("gate_matrix")) {
    out << "row,col,re,im\n";
    const auto& m = report["gate_matrix"];
    for (size_t i = 0; i < m.size(); ++i) {
      for (size_t j = 0; j < m[i].size(); ++j) {
        out << i << ',' << j << ',' << num17(m[i][j][0].get<double>()) << ','
            << num17(m[i][j][1].get<double>()) << '\n';
      }
    }
    return out.str();
  }
  out << "label,probability,classification,factor_dims,amplitudes\n";
  for (const auto& b : report["branches"]) {
    out << b["label"].get<std::string>() << ','
        << num17(b["probability"].get<double>()) << ','
        << b["classification"].get<std::string>() << ',';
    const auto& dims = b["factor_dims"];
    for (size_t k = 0; k < dims.size(); ++k) {
      out << (k ? "x" : "") << dims[k].get<int>();
    }
    out << ',';
    const auto& amps = b["amplitudes"];
    for (size_t k = 0; k < amps.size(); ++k) {
      out << (k ? " " : "") << num17(amps[k][0].get<double>()) << ' '
          << num17(amps[k][1].get<double>());
    }
    out << '\n';
  }
  return out.str();
}

std::string pretty_of(const ordered_json& report) {
  std::ostringstream out;
  out << "protocol: " << report["protocol"].get<std::string>() << '\n';
  if (report.contains("branches") && !report["branches"].empty()) {
    out << "branches:\n";
    for (const auto& b : report["branches"]) {
      out << "  " << b["label"].get<std::string>() << "  p="
          << num6(b["probability"].get<double>()) << "  ["
          << b["classification"].get<std::string>() << "]";
      const auto& amps = b["amplitudes"];
      if (!amps.empty()) {
        out << "  amps:";
        for (const auto& a : amps) {
          out << " (" << num6(a[0].get<double>()) << ',' << num6(a[1].get<double>())
              << ')';
        }
      }
      out << '\n';
    }
  }
  if (report.contains("gate_matrix")) {
    out << "gate matrix:\n";
    for (const auto& row : report["gate_matrix"]) {
      out << " ";
      for (const auto& e : row) {
        out << " (" << num6(e[0].get<double>()) << ',' << num6(e[1].get<double>())
            << ')';
      }
      out << '\n';
    }
  }
  if (report.contains("fidelity")) {
    out << "fidelity: " << num17(report["fidelity"].get<double>()) << '\n';
  }
  if (report.contains("points")) {
    out << "jitter sweep:\n";
    for (const auto& p : report["points"]) {
      out << "  epsilon=" << num6(p["epsilon"].get<double>()) << "  fidelity="
          << num17(p["fidelity"].get<double>()) << '\n';
    }
  }
  if (report.contains("sample")) {
    const auto& sample = report["sample"];
    out << "sample: shots=" << sample["shots"].get<long long>() << '\n';
    for (const auto& c : sample["counts"].items()) {
      out << "  " << c.key() << ": " << c.value().get<long long>() << '\n';
    }
  }
  if (report.contains("checks")) {
    for (const auto& c : report["checks"]) {
      out << (c["passed"].get<bool>() ? "[PASS] " : "[FAIL] ")
          << c["name"].get<std::string>();
      const std::string detail = c["detail"].get<std::string>();
      if (!detail.empty()) out << "  (" << detail << ")";
      out << '\n';
    }
  }
  out << "seed: " << report["seed"].get<std::uint64_t>() << "  rng: "
      << report["rng"].get<std::string>() << '\n';
  return out.str();
}

}  // namespace

ordered_json config_json(const RunConfig& config) {
  ordered_json j;
  j["protocol"] = config.protocol;
  j["a"] = {config.a_mag, config.a_phase};
  j["b"] = {config.b_mag, config.b_phase};
  j["control"] = config.control;
  j["phi"] = config.phi;
  j["theta"] = config.theta;
  j["varphi"] = config.varphi;
  j["mode"] = config.mode;
  j["shots"] = config.shots;
  j["seed"] = config.seed;
  j["epsilon"] = config.epsilons;
  j["format"] = config.format;
  return j;
}

ordered_json branch_report(const RunConfig& config, const BranchTree& tree) {
  ordered_json report = base_report(config);
  report["steps"] = tree.steps;
  ordered_json branches = ordered_json::array();
  for (const BranchLeaf& leaf : tree.leaves) {
    ordered_json b;
    b["label"] = leaf.path;
    b["probability"] = leaf.probability;
    b["classification"] = to_string(leaf.classification);
    ordered_json dims = ordered_json::array();
    ordered_json amps = ordered_json::array();
    if (leaf.state) {
      for (Eigen::Index d : leaf.state->factor_dims) dims.push_back(static_cast<int>(d));
      amps = amplitudes_json(leaf.state->amps);
    }
    b["factor_dims"] = std::move(dims);
    b["amplitudes"] = std::move(amps);
    branches.push_back(std::move(b));
  }
  report["branches"] = std::move(branches);
  finish_report(report, config);
  return report;
}

void add_sample_section(nlohmann::ordered_json& report, const SampleStats& stats) {
  ordered_json counts;
  for (const auto& [label, count] : stats.counts) counts[label] = count;
  ordered_json frequencies;
  for (const auto& [label, count] : stats.counts) {
    frequencies[label] =
        static_cast<double>(count) / static_cast<double>(stats.shots);
  }
  ordered_json sample;
  sample["shots"] = stats.shots;
  sample["counts"] = std::move(counts);
  sample["frequencies"] = std::move(frequencies);
  sample["seed"] = stats.seed;
  sample["rng"] = stats.rng;
  report["sample"] = std::move(sample);
}

void add_gate_section(nlohmann::ordered_json& report, const GateMatrix& gate,
                      double fidelity) {
  ordered_json m = ordered_json::array();
  for (int i = 0; i < gate.dim; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < gate.dim; ++j) {
      row.push_back({gate.entries(i, j).real(), gate.entries(i, j).imag()});
    }
    m.push_back(std::move(row));
  }
  report["gate_matrix"] = std::move(m);
  report["fidelity"] = fidelity;
}

void add_jitter_section(nlohmann::ordered_json& report,
                        const std::vector<JitterPoint>& points) {
  ordered_json rows = ordered_json::array();
  for (const JitterPoint& p : points) {
    ordered_json row;
    row["epsilon"] = p.epsilon;
    row["fidelity"] = p.fidelity;
    rows.push_back(std::move(row));
  }
  report["points"] = std::move(rows);
}

ordered_json verify_report(const RunConfig& config,
                           const std::vector<CheckResult>& checks) {
  ordered_json report = base_report(config);
  report["branches"] = ordered_json::array();
  ordered_json rows = ordered_json::array();
  bool all = true;
  for (const CheckResult& c : checks) {
    ordered_json row;
    row["name"] = c.name;
    row["passed"] = c.passed;
    row["detail"] = c.detail;
    rows.push_back(std::move(row));
    all = all && c.passed;
  }
  report["checks"] = std::move(rows);
  report["passed"] = all;
  finish_report(report, config);
  return report;
}

std::string render(const nlohmann::ordered_json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  if (format == "csv") return csv_of(report);
  if (format == "pretty") return pretty_of(report);
  throw std::invalid_argument("render: unknown format '" + format + "'");
}

}  // namespace gbs
