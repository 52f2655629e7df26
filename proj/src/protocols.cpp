#include "gbs/protocols.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "gbs/errors.hpp"

namespace gbs {

namespace {

constexpr double kHalfPi = kPi / 2.0;

// Axis phase for which U_z(pi/4) U_u(pi/4) U_z(pi/4) equals e^{i pi/2} H.
constexpr double kHadamardAxisPhase = -kHalfPi;

Vector logical_basis_vector(double phi, int n_max, int which) {
  return make_ngbs({kLogicalNmax, 0.5, which == 0 ? phi : phi + kPi}, n_max).amps;
}

void require_unit(double norm2, const char* who) {
  if (std::abs(norm2 - 1.0) > kPipelineTol) {
    throw std::invalid_argument(std::string(who) + ": input is not normalized");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct PipelinePolicy {
  std::vector<RamseyParams> central_pulses;  // step (ii) of the rotation scheme
  bool success_on_excited = true;            // qpg succeeds on "g" instead
  LeafClass non_success = LeafClass::failure;
};

// Steps (i), (ii'), (iii), (iv) of the rotation scheme over two cavities:
// copy C1 into the atom (with the R_{pi,pi/2} fixup on outcome logical_1),
// run the central pulses, write the atom back into C2, detect the atom.
BranchTree conditional_pipeline(const std::string& name, const Vector& input_amps,
                                double phi, const PipelinePolicy& policy,
                                const ProtocolOptions& options) {
  require_unit(input_amps.squaredNorm(), name.c_str());
  const int n_max = static_cast<int>(input_amps.size()) - 1;

  BranchTree tree;
  tree.protocol = name;

  CompositeState state =
      compose(AtomState::ground(),
              {CavityState{input_amps}, make_ngbs({kLogicalNmax, 0.5, phi}, n_max)});
  state = ramsey_apply(state, {kHalfPi, 0.0});
  tree.steps.push_back("ramsey(theta=" + fmt(kHalfPi) + ", varphi=0)");
  state = dispersive_evolve(state, 0, {options.di_chi});
  tree.steps.push_back("di(cavity=0, chi=" + fmt(options.di_chi) + ")");
  tree.steps.push_back("measure-cavity-logical(cavity=0, phi=" + fmt(phi) +
                       "); on logical_1: ramsey(theta=" + fmt(kPi) +
                       ", varphi=" + fmt(kHalfPi) + ")");
  for (const RamseyParams& pulse : policy.central_pulses) {
    tree.steps.push_back("ramsey(theta=" + fmt(pulse.theta) +
                         ", varphi=" + fmt(pulse.varphi) + ")");
  }
  tree.steps.push_back("di(cavity=1, chi=" + fmt(options.di_chi) + ")");
  tree.steps.push_back("ramsey(theta=" + fmt(kHalfPi) + ", varphi=0)");
  tree.steps.push_back("measure-atom");

  const auto cavity_branches =
      measure_cavity_logical(state, 0, phi, options.leak_tolerance);

  for (const MeasurementBranch& cb : cavity_branches) {
    if (cb.outcome_label == "leak") {
      // The protocol aborts here; the atom is never rotated or detected.
      BranchLeaf leaf{cb.outcome_label, cb.probability, LeafClass::failure,
                      cb.post_state, std::nullopt, std::nullopt};
      tree.leaves.push_back(std::move(leaf));
      continue;
    }
    const int logical = cb.outcome_label == "logical_0" ? 0 : 1;
    if (!cb.post_state) {
      for (const char* atom : {"g", "e"}) {
        const bool success = (atom[0] == 'e') == policy.success_on_excited;
        tree.leaves.push_back(BranchLeaf{cb.outcome_label + "/" + atom, 0.0,
                                         success ? LeafClass::success : policy.non_success,
                                         std::nullopt, std::nullopt, std::nullopt});
      }
      continue;
    }

    CompositeState s = *cb.post_state;
    if (logical == 1) {
      // sigma_x fixup, realized as R_{pi,pi/2} = -i sigma_x; the global
      // phase -i is carried, all comparisons are phase-insensitive.
      s = ramsey_apply(s, {kPi, kHalfPi});
    }
    for (const RamseyParams& pulse : policy.central_pulses) {
      s = ramsey_apply(s, pulse);
    }
    s = dispersive_evolve(s, 1, {options.di_chi});
    s = ramsey_apply(s, {kHalfPi, 0.0});

    const Vector c1_bra = logical_basis_vector(phi, n_max, logical);
    for (const MeasurementBranch& ab : measure_atom(s, MeasuredFactor::discard)) {
      const bool success = (ab.outcome_label == "e") == policy.success_on_excited;
      BranchLeaf leaf{cb.outcome_label + "/" + ab.outcome_label,
                      cb.probability * ab.probability,
                      success ? LeafClass::success : policy.non_success,
                      ab.post_state, std::nullopt, std::nullopt};
      if (ab.post_state) {
        Vector out = contract_factor(*ab.post_state, 0, c1_bra).amps;
        out /= out.norm();
        leaf.output_state = CavityState{std::move(out)};
        leaf.logical_output =
            qubit_from_cavity_state(*leaf.output_state, phi, options.leak_tolerance);
      }
      tree.leaves.push_back(std::move(leaf));
    }
  }
  return tree;
}

}  // namespace

LogicalQubit LogicalQubit::from_coefficients(Complex a, Complex b, double phi) {
  require_unit(std::norm(a) + std::norm(b), "LogicalQubit");
  return LogicalQubit{a, b, phi};
}

CavityState LogicalQubit::to_cavity_state(int n_max) const {
  return CavityState{a * logical_basis_vector(phi, n_max, 0) +
                     b * logical_basis_vector(phi, n_max, 1)};
}

LogicalQubit qubit_from_cavity_state(const CavityState& state, double phi,
                                     double leak_tolerance) {
  if (state.n_max() < kLogicalNmax) {
    throw std::invalid_argument("qubit_from_cavity_state: cavity dimension below 3");
  }
  const Complex a = logical_basis_vector(phi, state.n_max(), 0).dot(state.amps);
  const Complex b = logical_basis_vector(phi, state.n_max(), 1).dot(state.amps);
  const double inside = std::norm(a) + std::norm(b);
  const double leak = std::max(0.0, state.amps.squaredNorm() - inside);
  if (leak > leak_tolerance) {
    throw integrity_error("qubit_from_cavity_state: leak probability " +
                          std::to_string(leak) + " exceeds tolerance");
  }
  const double s = std::sqrt(inside);
  return LogicalQubit{a / s, b / s, phi};
}

double logical_leak(const CavityState& state, double phi) {
  const Complex a = logical_basis_vector(phi, state.n_max(), 0).dot(state.amps);
  const Complex b = logical_basis_vector(phi, state.n_max(), 1).dot(state.amps);
  return std::max(0.0, state.amps.squaredNorm() - std::norm(a) - std::norm(b));
}

std::string to_string(LeafClass c) {
  switch (c) {
    case LeafClass::success: return "success";
    case LeafClass::corrected: return "corrected";
    case LeafClass::alternate: return "alternate";
    case LeafClass::failure: return "failure";
  }
  return "unknown";
}

double BranchTree::probability_of(LeafClass c) const {
  double p = 0.0;
  for (const BranchLeaf& leaf : leaves) {
    if (leaf.classification == c) p += leaf.probability;
  }
  return p;
}

const BranchLeaf* BranchTree::first_success() const {
  for (const BranchLeaf& leaf : leaves) {
    if (leaf.classification == LeafClass::success ||
        leaf.classification == LeafClass::corrected) {
      return &leaf;
    }
  }
  return nullptr;
}

const BranchLeaf* BranchTree::find(std::string_view path) const {
  for (const BranchLeaf& leaf : leaves) {
    if (leaf.path == path) return &leaf;
  }
  return nullptr;
}

BranchTree prepare_qubit(Complex a, Complex b, double phi,
                         const ProtocolOptions& options) {
  require_unit(std::norm(a) + std::norm(b), "prepare_qubit");

  // First Ramsey zone from |g>: strip a's phase so it is real positive,
  // then theta0 = 2 atan2(|b|,|a|), varphi0 = -arg(b/a); if a = 0 this
  // degenerates to theta0 = pi, varphi0 = -arg(b).
  const double ph = std::abs(a) > 0.0 ? std::arg(a) : 0.0;
  const Complex ar = a * std::polar(1.0, -ph);
  const Complex br = b * std::polar(1.0, -ph);
  const double theta0 = 2.0 * std::atan2(std::abs(br), ar.real());
  const double varphi0 = std::abs(br) > 0.0 ? -std::arg(br) : 0.0;

  BranchTree tree;
  tree.protocol = "prepare";
  tree.steps.push_back("ramsey(theta=" + fmt(theta0) + ", varphi=" + fmt(varphi0) + ")");
  tree.steps.push_back("di(cavity=0, chi=" + fmt(options.di_chi) + ")");
  tree.steps.push_back("ramsey(theta=" + fmt(kHalfPi) + ", varphi=0)");
  tree.steps.push_back("measure-atom");

  CompositeState state =
      compose(ramsey_apply(AtomState::ground(), {theta0, varphi0}),
              {make_ngbs({kLogicalNmax, 0.5, phi}, kLogicalNmax)});
  state = dispersive_evolve(state, 0, {options.di_chi});
  state = ramsey_apply(state, {kHalfPi, 0.0});

  for (const MeasurementBranch& ab : measure_atom(state, MeasuredFactor::discard)) {
    const bool success = ab.outcome_label == "e";
    BranchLeaf leaf{ab.outcome_label, ab.probability,
                    success ? LeafClass::success : LeafClass::alternate,
                    ab.post_state, std::nullopt, std::nullopt};
    if (ab.post_state) {
      leaf.output_state = CavityState{ab.post_state->amps};
      leaf.logical_output =
          qubit_from_cavity_state(*leaf.output_state, phi, options.leak_tolerance);
    }
    tree.leaves.push_back(std::move(leaf));
  }

  if (options.correct_alternate) {
    std::vector<BranchLeaf> leaves;
    ProtocolOptions sub_options = options;
    sub_options.correct_alternate = false;
    for (BranchLeaf& leaf : tree.leaves) {
      if (leaf.classification != LeafClass::alternate || !leaf.output_state) {
        leaves.push_back(std::move(leaf));
        continue;
      }
      BranchTree sub = conditional_pipeline(
          "qpg", leaf.output_state->amps, phi,
          PipelinePolicy{{}, false, LeafClass::alternate}, sub_options);
      for (BranchLeaf& sl : sub.leaves) {
        sl.path = leaf.path + " > qpg:" + sl.path;
        sl.probability *= leaf.probability;
        if (sl.classification == LeafClass::success) {
          sl.classification = LeafClass::corrected;
        }
        leaves.push_back(std::move(sl));
      }
    }
    tree.steps.push_back("on g: chain qpg");
    tree.leaves = std::move(leaves);
  }
  return tree;
}

CompositeState cnot_gate(const AtomState& control, const LogicalQubit& target,
                         const ProtocolOptions& options) {
  require_unit(control.amps.squaredNorm(), "cnot_gate");
  require_unit(std::norm(target.a) + std::norm(target.b), "cnot_gate");
  CompositeState state = compose(control, {target.to_cavity_state()});
  return dispersive_evolve(state, 0, {options.di_chi});
}

BranchTree cnot_tree(const AtomState& control, const LogicalQubit& target,
                     const ProtocolOptions& options) {
  BranchTree tree;
  tree.protocol = "cnot";
  tree.steps.push_back("di(cavity=0, chi=" + fmt(options.di_chi) + ")");
  BranchLeaf leaf{"deterministic", 1.0, LeafClass::success,
                  cnot_gate(control, target, options), std::nullopt, std::nullopt};
  tree.leaves.push_back(std::move(leaf));
  return tree;
}

BranchTree rotate_u(const LogicalQubit& input, double theta, double varphi,
                    const ProtocolOptions& options) {
  return conditional_pipeline(
      "rotate-u", input.to_cavity_state().amps, input.phi,
      PipelinePolicy{{RamseyParams{theta, varphi}}, true, LeafClass::failure}, options);
}

BranchTree rotate_z(const LogicalQubit& input, double theta,
                    const ProtocolOptions& options) {
  return conditional_pipeline(
      "rotate-z", input.to_cavity_state().amps, input.phi,
      PipelinePolicy{{RamseyParams{kPi, 0.0}, RamseyParams{kPi, theta / 2.0}},
                     true, LeafClass::failure},
      options);
}

BranchTree qpg_pi(const LogicalQubit& input, const ProtocolOptions& options) {
  return conditional_pipeline("qpg", input.to_cavity_state().amps, input.phi,
                              PipelinePolicy{{}, false, LeafClass::alternate}, options);
}

BranchTree hadamard_gate(const LogicalQubit& input, const ProtocolOptions& options) {
  require_unit(std::norm(input.a) + std::norm(input.b), "hadamard_gate");

  struct Stage {
    std::string name;
    PipelinePolicy policy;
  };
  const PipelinePolicy z_quarter{
      {RamseyParams{kPi, 0.0}, RamseyParams{kPi, kPi / 4.0}}, true, LeafClass::failure};
  const PipelinePolicy u_quarter{
      {RamseyParams{kHalfPi, kHadamardAxisPhase}}, true, LeafClass::failure};
  const std::vector<Stage> stages = {
      {"z1", z_quarter}, {"u", u_quarter}, {"z2", z_quarter}};

  BranchTree tree;
  tree.protocol = "hadamard";

  struct Front {
    std::string path;
    double probability;
    CavityState state;
  };
  std::vector<Front> frontier = {{"", 1.0, input.to_cavity_state()}};

  for (size_t si = 0; si < stages.size(); ++si) {
    const Stage& stage = stages[si];
    const bool last = si + 1 == stages.size();
    std::vector<Front> next;
    bool steps_recorded = false;
    for (const Front& front : frontier) {
      BranchTree sub = conditional_pipeline("hadamard/" + stage.name,
                                            front.state.amps, input.phi,
                                            stage.policy, options);
      if (!steps_recorded) {
        for (const std::string& step : sub.steps) {
          tree.steps.push_back(stage.name + ": " + step);
        }
        steps_recorded = true;
      }
      for (BranchLeaf& leaf : sub.leaves) {
        const std::string path =
            (front.path.empty() ? "" : front.path + " > ") + stage.name + ":" + leaf.path;
        const double p = front.probability * leaf.probability;
        if (!last && leaf.classification == LeafClass::success && leaf.output_state) {
          next.push_back(Front{path, p, *leaf.output_state});
        } else {
          leaf.path = path;
          leaf.probability = p;
          tree.leaves.push_back(std::move(leaf));
        }
      }
    }
    frontier = std::move(next);
  }
  return tree;
}

ProtocolKind parse_protocol_name(std::string_view name) {
  if (name == "prepare") return ProtocolKind::prepare;
  if (name == "cnot") return ProtocolKind::cnot;
  if (name == "rotate-u" || name == "rotate_u") return ProtocolKind::rotate_u;
  if (name == "rotate-z" || name == "rotate_z") return ProtocolKind::rotate_z;
  if (name == "hadamard") return ProtocolKind::hadamard;
  if (name == "qpg") return ProtocolKind::qpg;
  throw std::invalid_argument("unknown protocol name: " + std::string(name));
}

std::string protocol_name(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::prepare: return "prepare";
    case ProtocolKind::cnot: return "cnot";
    case ProtocolKind::rotate_u: return "rotate-u";
    case ProtocolKind::rotate_z: return "rotate-z";
    case ProtocolKind::hadamard: return "hadamard";
    case ProtocolKind::qpg: return "qpg";
  }
  return "unknown";
}

BranchTree run_protocol(const ProtocolRequest& request) {
  switch (request.kind) {
    case ProtocolKind::prepare:
      return prepare_qubit(request.a, request.b, request.phi, request.options);
    case ProtocolKind::cnot:
      return cnot_tree(AtomState::from_amplitudes(request.control_g, request.control_e),
                       LogicalQubit::from_coefficients(request.a, request.b, request.phi),
                       request.options);
    case ProtocolKind::rotate_u:
      return rotate_u(LogicalQubit::from_coefficients(request.a, request.b, request.phi),
                      request.theta, request.varphi, request.options);
    case ProtocolKind::rotate_z:
      return rotate_z(LogicalQubit::from_coefficients(request.a, request.b, request.phi),
                      request.theta, request.options);
    case ProtocolKind::hadamard:
      return hadamard_gate(
          LogicalQubit::from_coefficients(request.a, request.b, request.phi),
          request.options);
    case ProtocolKind::qpg:
      return qpg_pi(LogicalQubit::from_coefficients(request.a, request.b, request.phi),
                    request.options);
  }
  throw std::invalid_argument("run_protocol: unknown protocol kind");
}

}  // namespace gbs
