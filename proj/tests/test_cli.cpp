#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int code = -1;
  std::string out;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "gbs-cli-tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path capture = work_dir() / ("capture" + std::to_string(counter++));
  const std::string cmd =
      std::string(GBS_SIM_PATH) + " " + args + " > " + capture.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  if (WIFEXITED(status)) result.code = WEXITSTATUS(status);
  result.out = slurp(capture);
  return result;
}

json run_json(const std::string& args, int expect_code = 0) {
  const RunResult result = run_cli(args + " --format json --no-timestamp");
  REQUIRE(result.code == expect_code);
  return json::parse(result.out);
}

double amp_norm2(const json& amplitudes, size_t begin, size_t end) {
  double s = 0.0;
  for (size_t k = begin; k < end; ++k) {
    const double re = amplitudes[k][0].get<double>();
    const double im = amplitudes[k][1].get<double>();
    s += re * re + im * im;
  }
  return s;
}

}  // namespace

TEST_CASE("preparation report carries branches, steps and config echo") {
  const json d = run_json("prepare --a 0.6 --b 0.8");
  CHECK(d["protocol"] == "prepare");
  CHECK(d["config"]["a"] == json::array({0.6, 0.0}));
  CHECK(d["config"]["mode"] == "enumerate");
  CHECK(d["config"]["seed"] == 2026);
  CHECK(d["steps"].size() == 4);
  CHECK(!d.contains("timestamp"));
  REQUIRE(d["branches"].size() == 2);
  const json& g = d["branches"][0];
  const json& e = d["branches"][1];
  CHECK(g["label"] == "g");
  CHECK(g["classification"] == "alternate");
  CHECK(e["label"] == "e");
  CHECK(e["classification"] == "success");
  for (const json& branch : d["branches"]) {
    CHECK(std::abs(branch["probability"].get<double>() - 0.5) < 1e-12);
    CHECK(branch["factor_dims"] == json::array({3}));
    CHECK(std::abs(amp_norm2(branch["amplitudes"], 0, 3) - 1.0) < 1e-12);
  }
  CHECK(d["rng"] == "mt19937_64");
}

TEST_CASE("reports are byte identical when the timestamp is suppressed") {
  const fs::path f1 = work_dir() / "rep1.json";
  const fs::path f2 = work_dir() / "rep2.json";
  const std::string base = "rotate-z --a 0.6 --b 0.8 --theta 1.1 "
                           "--format json --no-timestamp --output ";
  const RunResult r1 = run_cli(base + f1.string());
  const RunResult r2 = run_cli(base + f2.string());
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  CHECK(r1.out.empty());
  CHECK(slurp(f1) == slurp(f2));
  CHECK(!slurp(f1).empty());
}

TEST_CASE("timestamp appears unless suppressed") {
  const RunResult result = run_cli("prepare --format json");
  REQUIRE(result.code == 0);
  const json d = json::parse(result.out);
  CHECK(d.contains("timestamp"));
  CHECK(!d["timestamp"].get<std::string>().empty());
}

TEST_CASE("cnot with an excited control flips the target deterministically") {
  const json d = run_json("cnot --control e");
  REQUIRE(d["branches"].size() == 1);
  const json& leaf = d["branches"][0];
  CHECK(std::abs(leaf["probability"].get<double>() - 1.0) < 1e-12);
  CHECK(leaf["classification"] == "success");
  CHECK(leaf["factor_dims"] == json::array({2, 3}));
  REQUIRE(leaf["amplitudes"].size() == 6);
  //  the ground component is empty, the excited one holds |phi+pi>
  CHECK(amp_norm2(leaf["amplitudes"], 0, 3) < 1e-12);
  CHECK(std::abs(amp_norm2(leaf["amplitudes"], 3, 6) - 1.0) < 1e-12);
  CHECK(std::abs(leaf["amplitudes"][4][0].get<double>() + 1.0 / std::sqrt(2.0)) <
        1e-12);
}

TEST_CASE("report branch probabilities sum to one") {
  for (const std::string cmd :
       {"rotate-u --a 0.6 --b 0.8 --theta 1.1 --varphi 0.4",
        "hadamard --a 0.28,1.3 --b 0.96", "qpg --a 0.6 --b 0.8 --phi 0.5"}) {
    const json d = run_json(cmd);
    double total = 0.0;
    for (const json& branch : d["branches"]) {
      total += branch["probability"].get<double>();
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("invalid invocations exit with the validation code") {
  CHECK(run_cli("--protocol swap").code == 2);
  CHECK(run_cli("sample --protocol prepare --shots 0").code == 2);
  CHECK(run_cli("prepare --a 1 --b 1").code == 2);
  CHECK(run_cli("prepare --format xml").code == 2);
  CHECK(run_cli("prepare --protocol cnot").code == 2);
  CHECK(run_cli("--bogus-flag").code == 2);
  CHECK(run_cli("prepare --epsilon 0.01 --epsilon 0.02").code == 2);
  CHECK(run_cli("prepare --control 0.5,0.5").code == 2);
}

TEST_CASE("a timing error that leaks out of the logical subspace exits 3") {
  const RunResult result = run_cli("rotate-u --theta 1 --epsilon 0.01");
  CHECK(result.code == 3);
  // the same systematic error is harmless for the measurement-free cnot
  CHECK(run_cli("cnot --epsilon 0.01 --format json --no-timestamp").code == 0);
}

TEST_CASE("sampling is reproducible from the seed") {
  const std::string cmd = "sample --protocol prepare --shots 5000 --seed 9";
  const json first = run_json(cmd);
  const json second = run_json(cmd);
  CHECK(first["sample"] == second["sample"]);
  CHECK(first["sample"]["shots"] == 5000);
  CHECK(first["sample"]["seed"] == 9);
  long long total = 0;
  for (const auto& [label, count] : first["sample"]["counts"].items()) {
    total += count.get<long long>();
  }
  CHECK(total == 5000);
  double freq_sum = 0.0;
  for (const auto& [label, f] : first["sample"]["frequencies"].items()) {
    freq_sum += f.get<double>();
  }
  CHECK(std::abs(freq_sum - 1.0) < 1e-12);

  const json other = run_json("sample --protocol prepare --shots 5000 --seed 10");
  CHECK(other["sample"]["counts"] != first["sample"]["counts"]);
}

TEST_CASE("jitter sweep reports the requested grid") {
  const json d = run_json("jitter --protocol cnot --epsilon 0 --epsilon 0.01");
  REQUIRE(d["points"].size() == 2);
  CHECK(d["points"][0]["fidelity"].get<double>() > 1.0 - 1e-12);
  CHECK(std::abs(d["points"][1]["fidelity"].get<double>() -
                 0.99926002316060103) < 1e-12);

  const json defaulted = run_json("jitter --protocol cnot");
  REQUIRE(defaulted["points"].size() == 5);
  CHECK(defaulted["points"][4]["epsilon"].get<double>() ==
        doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("tomography reconstructs gates with unit fidelity") {
  const json cnot = run_json("tomography --protocol cnot");
  REQUIRE(cnot["gate_matrix"].size() == 4);
  CHECK(cnot["fidelity"].get<double>() > 1.0 - 1e-9);
  CHECK(std::abs(cnot["gate_matrix"][2][3][0].get<double>() - 1.0) < 1e-9);
  CHECK(std::abs(cnot["gate_matrix"][2][2][0].get<double>()) < 1e-9);

  const json rot = run_json("tomography --protocol rotate-u --theta 1.1 --varphi 0.4");
  REQUIRE(rot["gate_matrix"].size() == 2);
  CHECK(rot["fidelity"].get<double>() > 1.0 - 1e-9);
  CHECK(std::abs(rot["gate_matrix"][0][0][0].get<double>() - std::cos(0.55)) <
        1e-9);
}

TEST_CASE("config files feed defaults and flags override them") {
  const fs::path cfg = work_dir() / "run.cfg";
  std::ofstream(cfg) << "protocol=prepare\na=0.8\nb=0.6\nphi=0.3\n";
  const json d = run_json("--config " + cfg.string());
  CHECK(d["protocol"] == "prepare");
  CHECK(d["config"]["a"] == json::array({0.8, 0.0}));
  CHECK(d["config"]["phi"] == 0.3);

  const json overridden = run_json("--config " + cfg.string() + " --a 0.6 --b 0.8");
  CHECK(overridden["config"]["a"] == json::array({0.6, 0.0}));
  CHECK(overridden["config"]["b"] == json::array({0.8, 0.0}));
}

TEST_CASE("verification suite passes and defaults to the pretty format") {
  const RunResult pretty = run_cli("verify");
  CHECK(pretty.code == 0);
  CHECK(pretty.out.find("[PASS]") != std::string::npos);
  CHECK(pretty.out.find("[FAIL]") == std::string::npos);

  const json d = run_json("verify");
  CHECK(d["passed"] == true);
  CHECK(d["checks"].size() >= 20);
  for (const json& check : d["checks"]) CHECK(check["passed"] == true);
}

TEST_CASE("csv output uses a header row and full precision") {
  const RunResult result = run_cli("jitter --protocol cnot --format csv --no-timestamp");
  REQUIRE(result.code == 0);
  CHECK(result.out.rfind("epsilon,fidelity\n", 0) == 0);
  CHECK(result.out.find("0.99926002316060103") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  const RunResult result = run_cli("--help");
  CHECK(result.code == 0);
  CHECK(result.out.find("jitter") != std::string::npos);
}
