#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gbs/atom_cavity.hpp"

namespace gbs {

/// Coefficients of a|phi> + b|phi+pi> over the logical basis
/// |0_L> = |2,1/2,phi>, |1_L> = |2,1/2,phi+pi>.
struct LogicalQubit {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
  double phi = 0.0;

  /// Validates |a|^2 + |b|^2 = 1.
  static LogicalQubit from_coefficients(Complex a, Complex b, double phi);

  /// Embeds the qubit as a cavity state a|phi> + b|phi+pi>.
  CavityState to_cavity_state(int n_max = kLogicalNmax) const;
};

/// Projects a cavity state onto the logical basis at phase phi and
/// renormalizes.  Throws integrity_error when the out-of-subspace
/// population exceeds leak_tolerance.
LogicalQubit qubit_from_cavity_state(const CavityState& state, double phi,
                                     double leak_tolerance = kLeakTol);

/// Population outside span{|phi>, |phi+pi>}.
double logical_leak(const CavityState& state, double phi);

enum class Axis { u_axis, z_axis };

/// Rotation about u = (-sin varphi, cos varphi, 0) or about z, by theta.
/// varphi is meaningful for the u axis only.
struct RotationSpec {
  Axis axis = Axis::u_axis;
  double theta = 0.0;
  double varphi = 0.0;
};

enum class LeafClass { success, corrected, alternate, failure };

std::string to_string(LeafClass c);

/// Terminal outcome of one protocol execution path.
struct BranchLeaf {
  /// Measurement outcomes along the run, e.g. "logical_0/e"; chained
  /// stages are joined with " > ".
  std::string path;
  double probability = 0.0;
  LeafClass classification = LeafClass::failure;
  /// Final factor record: measured cavities stay collapsed, the atom is
  /// dropped once its final detection fired.  Absent for probability-0
  /// branches.
  std::optional<CompositeState> state;
  /// Raw content of the cavity that carries the protocol result.
  std::optional<CavityState> output_state;
  /// output_state projected on the logical basis.
  std::optional<LogicalQubit> logical_output;
};

/// Execution record of one conditional protocol: the operations applied
/// and every measurement leaf with its exact Born probability.
struct BranchTree {
  std::string protocol;
  std::vector<std::string> steps;
  std::vector<BranchLeaf> leaves;

  /// Sum of probabilities over leaves with the given classification.
  double probability_of(LeafClass c) const;
  /// First leaf classified success or corrected.
  const BranchLeaf* first_success() const;
  const BranchLeaf* find(std::string_view path) const;
};

struct ProtocolOptions {
  /// Phase applied by each scheduled pi-DI; pi(1+eps) models a timing
  /// error in the dispersive crossing.
  double di_chi = kPi;
  double leak_tolerance = kLeakTol;
  /// prepare only: chain a pi-QPG on the "g" leaf to recover the target.
  bool correct_alternate = false;
};

/// Conditional preparation of a|phi> + b|phi+pi> from |g> and |phi>:
/// Ramsey copy-in, pi-DI, R_{pi/2,0}, atom detection.  Outcome "e"
/// (probability 1/2) holds the target; outcome "g" holds a|phi> - b|phi+pi>
/// and is classified alternate since a pi-QPG recovers the target.
BranchTree prepare_qubit(Complex a, Complex b, double phi,
                         const ProtocolOptions& options = {});

/// Deterministic CNOT: atom control (|g> = |0_c>, |e> = |1_c>), cavity
/// 2GBS target; one pi-DI, no measurement.
CompositeState cnot_gate(const AtomState& control, const LogicalQubit& target,
                         const ProtocolOptions& options = {});

/// cnot_gate wrapped as a single-leaf tree for uniform reporting.
BranchTree cnot_tree(const AtomState& control, const LogicalQubit& target,
                     const ProtocolOptions& options = {});

/// Conditional rotation about u = (-sin varphi, cos varphi, 0): copies the
/// qubit onto an atom, rotates the atom, writes it back into a second
/// cavity.  Success leaves (final atom "e", total probability 1/2) hold
/// U_u(theta/2) times the input, up to a global phase.
BranchTree rotate_u(const LogicalQubit& input, double theta, double varphi,
                    const ProtocolOptions& options = {});

/// Same pipeline with the central pulse replaced by R_{pi,0} R_{pi,theta/2},
/// realizing U_z(theta/2).
BranchTree rotate_z(const LogicalQubit& input, double theta,
                    const ProtocolOptions& options = {});

/// Hadamard as U_z(pi/4) U_u(pi/4) U_z(pi/4): three chained conditional
/// rotations; overall success probability 1/8 and output e^{i pi/2} H|psi>.
BranchTree hadamard_gate(const LogicalQubit& input, const ProtocolOptions& options = {});

/// pi quantum phase gate: the rotation pipeline with no central pulse,
/// successful on final atom outcome "g" (probability 1/2) where it leaves
/// a|phi> - b|phi+pi>.  The "e" leaves hold the unchanged input.
BranchTree qpg_pi(const LogicalQubit& input, const ProtocolOptions& options = {});

enum class ProtocolKind { prepare, cnot, rotate_u, rotate_z, hadamard, qpg };

/// Accepts the tokens "prepare", "cnot", "rotate-u", "rotate-z",
/// "hadamard", "qpg".
ProtocolKind parse_protocol_name(std::string_view name);
std::string protocol_name(ProtocolKind kind);

/// Name-addressable protocol invocation, shared by the analysis layer and
/// the command line front end.
struct ProtocolRequest {
  ProtocolKind kind = ProtocolKind::prepare;
  Complex a{1.0, 0.0};        // logical input coefficients
  Complex b{0.0, 0.0};
  Complex control_g{1.0, 0.0};  // atom control coefficients (cnot only)
  Complex control_e{0.0, 0.0};
  double phi = 0.0;
  double theta = 0.0;
  double varphi = 0.0;
  ProtocolOptions options;
};

BranchTree run_protocol(const ProtocolRequest& request);

}  // namespace gbs
