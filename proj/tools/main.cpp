#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "gbs/analysis.hpp"
#include "gbs/errors.hpp"
#include "gbs/report.hpp"
#include "gbs/verify.hpp"

namespace {

using gbs::Complex;

enum class Action { run, tomography, jitter, sample, verify };

std::vector<double> parse_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      const double v = std::stod(item, &pos);
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) {
        ++pos;
      }
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": malformed number '" + item + "'");
    }
  }
  if (out.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty value");
  }
  return out;
}

/// Coefficients are written MAG or MAG,PHASE.
Complex parse_coefficient(const std::string& text, const char* what) {
  const std::vector<double> v = parse_numbers(text, what);
  if (v.size() > 2) {
    throw std::invalid_argument(std::string(what) +
                                ": expected MAG or MAG,PHASE, got '" + text + "'");
  }
  const double mag = v[0];
  const double phase = v.size() == 2 ? v[1] : 0.0;
  return Complex{mag * std::cos(phase), mag * std::sin(phase)};
}

/// Control tokens: "g", "e", "GMAG,EMAG" or "GMAG,GPHASE,EMAG,EPHASE".
std::pair<Complex, Complex> parse_control(const std::string& text) {
  if (text == "g") return {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
  if (text == "e") return {Complex{0.0, 0.0}, Complex{1.0, 0.0}};
  const std::vector<double> v = parse_numbers(text, "--control");
  if (v.size() == 2) return {Complex{v[0], 0.0}, Complex{v[1], 0.0}};
  if (v.size() == 4) {
    return {Complex{v[0] * std::cos(v[1]), v[0] * std::sin(v[1])},
            Complex{v[2] * std::cos(v[3]), v[2] * std::sin(v[3])}};
  }
  throw std::invalid_argument("--control: expected g, e, GMAG,EMAG or "
                              "GMAG,GPHASE,EMAG,EPHASE");
}

/// Renormalizes a two-amplitude register; warns on drift below 1e-6 and
/// rejects anything larger.
void normalize_pair(Complex& x, Complex& y, const char* what) {
  const double n = std::norm(x) + std::norm(y);
  if (std::abs(n - 1.0) >= 1e-6) {
    throw std::invalid_argument(std::string(what) + ": |.|^2 sums to " +
                                std::to_string(n) + ", not normalizable");
  }
  if (std::abs(n - 1.0) > 1e-12) {
    std::cerr << "warning: " << what << " off normalization by "
              << std::abs(n - 1.0) << ", renormalizing\n";
  }
  const double s = std::sqrt(n);
  x /= s;
  y /= s;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("--output: cannot open '" + path + "' for writing");
  }
  out << text;
}

std::vector<double> default_epsilons() {
  std::vector<double> eps;
  for (int i = 0; i <= 4; ++i) eps.push_back(0.0025 * i);
  return eps;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Simulator of conditional cavity-QED protocols on logical qubits "
               "encoded in two-photon generalized binomial states"};
  app.require_subcommand(0, 1);
  app.set_config("--config", "",
                 "Flat key=value file mirroring the flags; command line wins");

  std::string protocol;
  std::string a_text = "1";
  std::string b_text = "0";
  std::string control_text = "g";
  double phi = 0.0;
  double theta = 0.0;
  double varphi = 0.0;
  std::string mode = "enumerate";
  long long shots = 10000;
  std::uint64_t seed = 2026;
  std::vector<double> epsilons;
  std::string format = "json";
  std::string output;
  bool no_timestamp = false;
  bool correct_alternate = false;

  app.add_option("--protocol", protocol,
                 "Protocol name: prepare, cnot, rotate-u, rotate-z, hadamard, qpg");
  app.add_option("--a", a_text, "Logical coefficient a as MAG or MAG,PHASE");
  app.add_option("--b", b_text, "Logical coefficient b as MAG or MAG,PHASE");
  app.add_option("--control", control_text,
                 "Atom control state for cnot: g, e, GMAG,EMAG or "
                 "GMAG,GPHASE,EMAG,EPHASE");
  app.add_option("--phi", phi, "Basis phase of the logical pair");
  app.add_option("--theta", theta, "Rotation angle");
  app.add_option("--varphi", varphi, "Rotation axis phase (rotate-u)");
  app.add_option("--mode", mode, "enumerate or sample")
      ->check(CLI::IsMember({"enumerate", "sample"}));
  app.add_option("--shots", shots, "Number of samples in sample mode");
  app.add_option("--seed", seed, "Sampling seed");
  app.add_option("--epsilon", epsilons,
                 "Relative dispersive-phase error(s): the sweep grid for "
                 "jitter, a single systematic error otherwise");
  CLI::Option* format_opt =
      app.add_option("--format", format, "Report format")
          ->check(CLI::IsMember({"json", "csv", "pretty"}));
  app.add_option("--output", output, "Write the report to this file instead of stdout");
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp field");
  app.add_flag("--correct-alternate", correct_alternate,
               "prepare: chain a pi-QPG on the g leaf to recover the target");

  const std::vector<std::pair<std::string, std::string>> protocol_subs = {
      {"prepare", "Conditional preparation of a|phi> + b|phi+pi>"},
      {"cnot", "Deterministic CNOT, atom control and cavity target"},
      {"rotate-u", "Conditional rotation about the in-plane axis set by varphi"},
      {"rotate-z", "Conditional rotation about the z axis"},
      {"hadamard", "Hadamard as three chained conditional rotations"},
      {"qpg", "pi quantum phase gate"},
  };
  for (const auto& [name, description] : protocol_subs) {
    app.add_subcommand(name, description)->fallthrough();
  }
  app.add_subcommand("tomography",
                     "Extract the logical gate matrix of --protocol by linearity")
      ->fallthrough();
  app.add_subcommand("jitter",
                     "Worst-case fidelity of --protocol under dispersive-phase error")
      ->fallthrough();
  app.add_subcommand("sample", "Monte-Carlo sampling of --protocol outcomes")
      ->fallthrough();
  app.add_subcommand("verify", "Run the full invariant suite")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Action action = Action::run;
  if (app.got_subcommand("tomography")) action = Action::tomography;
  else if (app.got_subcommand("jitter")) action = Action::jitter;
  else if (app.got_subcommand("sample")) action = Action::sample;
  else if (app.got_subcommand("verify")) action = Action::verify;
  for (const auto& [name, description] : protocol_subs) {
    if (!app.got_subcommand(name)) continue;
    if (!protocol.empty() && protocol != name) {
      std::cerr << "error: subcommand '" << name << "' conflicts with --protocol '"
                << protocol << "'\n";
      return 2;
    }
    protocol = name;
  }

  try {
    if (action != Action::verify && protocol.empty()) {
      throw std::invalid_argument(
          "no protocol selected; use a protocol subcommand or --protocol");
    }
    if (action == Action::sample) mode = "sample";

    gbs::RunConfig config;
    config.protocol = protocol;
    config.control = control_text;
    config.phi = phi;
    config.theta = theta;
    config.varphi = varphi;
    config.mode = mode;
    config.shots = shots;
    config.seed = seed;
    config.epsilons = epsilons;
    config.format = format;
    config.timestamp = !no_timestamp;

    if (action == Action::verify) {
      if (format_opt->count() == 0) config.format = "pretty";
      config.protocol = "verify";
      const std::vector<gbs::CheckResult> checks = gbs::run_verification();
      const auto report = gbs::verify_report(config, checks);
      write_output(gbs::render(report, config.format), output);
      for (const gbs::CheckResult& c : checks) {
        if (!c.passed) return 1;
      }
      return 0;
    }

    gbs::ProtocolRequest request;
    request.kind = gbs::parse_protocol_name(protocol);
    request.a = parse_coefficient(a_text, "--a");
    request.b = parse_coefficient(b_text, "--b");
    normalize_pair(request.a, request.b, "--a/--b");
    std::tie(request.control_g, request.control_e) = parse_control(control_text);
    normalize_pair(request.control_g, request.control_e, "--control");
    request.phi = phi;
    request.theta = theta;
    request.varphi = varphi;
    request.options.correct_alternate = correct_alternate;
    if (action != Action::jitter && !epsilons.empty()) {
      if (epsilons.size() > 1) {
        throw std::invalid_argument(
            "--epsilon: only one value is meaningful outside the jitter sweep");
      }
      request.options.di_chi = gbs::kPi * (1.0 + epsilons.front());
    }

    config.a_mag = std::abs(request.a);
    config.a_phase = std::arg(request.a);
    config.b_mag = std::abs(request.b);
    config.b_phase = std::arg(request.b);

    if (mode == "sample" && shots < 1) {
      throw std::invalid_argument("--shots must be >= 1 in sample mode");
    }

    const gbs::BranchTree tree = gbs::run_protocol(request);
    auto report = gbs::branch_report(config, tree);

    switch (action) {
      case Action::run:
      case Action::sample:
        if (config.mode == "sample") {
          gbs::add_sample_section(report, gbs::monte_carlo_run(request, shots, seed));
        }
        break;
      case Action::tomography: {
        const gbs::GateMatrix gate = gbs::extract_logical_gate(request);
        const gbs::GateMatrix ideal =
            gbs::ideal_gate(request.kind, theta, varphi);
        gbs::add_gate_section(report, gate, gbs::gate_fidelity(gate, ideal));
        break;
      }
      case Action::jitter: {
        const std::vector<double> eps =
            epsilons.empty() ? default_epsilons() : epsilons;
        gbs::add_jitter_section(report, gbs::jitter_sweep(request, eps));
        break;
      }
      case Action::verify:
        break;
    }

    write_output(gbs::render(report, config.format), output);
    return 0;
  } catch (const gbs::integrity_error& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
