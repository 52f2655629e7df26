#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gbs/fock.hpp"
#include "gbs/types.hpp"

namespace gbs {

/// Effective two-level Rydberg atom.  amps = (amplitude on |g>, amplitude
/// on |e>); the third level used to derive the dispersive coupling is
/// adiabatically eliminated and never represented.
struct AtomState {
  Eigen::Vector2cd amps;

  Complex g() const { return amps[0]; }
  Complex e() const { return amps[1]; }

  static AtomState ground() { return AtomState{{1.0, 0.0}}; }
  static AtomState excited() { return AtomState{{0.0, 1.0}}; }
  /// Validates |amp_g|^2 + |amp_e|^2 = 1.
  static AtomState from_amplitudes(Complex amp_g, Complex amp_e);
};

/// Ramsey zone parameters: pulse angle theta and classical-field phase
/// varphi.  Angles are taken as given, not reduced mod 2pi.
struct RamseyParams {
  double theta = 0.0;
  double varphi = 0.0;
};

/// Dispersive interaction, reduced to the single accumulated phase
/// chi = Omega^2 t / delta.  chi = pi is the pi-DI.
struct DispersiveParams {
  double chi = 0.0;
};

/// Ordered tensor product of registered factors; by convention the atom
/// (dimension 2) comes first and varies slowest.  Operations that address
/// the atom require factor_dims[0] == 2.
struct CompositeState {
  std::vector<Eigen::Index> factor_dims;
  Vector amps;

  Eigen::Index dim() const { return amps.size(); }
  int factor_count() const { return static_cast<int>(factor_dims.size()); }
  /// Product of the dimensions after factor k.
  Eigen::Index stride(int k) const;
  /// Basis level of factor k inside the flat index.
  int digit(Eigen::Index index, int k) const;
};

/// What happens to a factor once it has been measured.
enum class MeasuredFactor {
  collapse,  // keep the factor, projected onto the outcome
  discard,   // remove the factor from the composite
};

/// One outcome of a projective measurement.  Branches with probability
/// below kNullBranchTol carry no post-state but stay in the list so the
/// branch arity is fixed.
struct MeasurementBranch {
  std::string outcome_label;
  double probability = 0.0;
  std::optional<CompositeState> post_state;
};

/// Tensor assembly atom (x) cavities, atom index slowest.
CompositeState compose(const AtomState& atom, const std::vector<CavityState>& cavities);

/// The 2x2 Ramsey rotation in the (g, e) basis:
///   |g> -> cos(theta/2)|g> + e^{-i varphi} sin(theta/2)|e>
///   |e> -> cos(theta/2)|e> - e^{+i varphi} sin(theta/2)|g>
Matrix2 ramsey_matrix(const RamseyParams& params);

AtomState ramsey_apply(const AtomState& atom, const RamseyParams& params);

/// Same rotation on the atom factor of a composite; cavities untouched.
CompositeState ramsey_apply(const CompositeState& state, const RamseyParams& params);

/// Dispersive phase accumulation: amplitudes with the atom in |e> and n
/// photons in the addressed cavity pick up e^{-i n chi}; amplitudes with
/// the atom in |g> are unchanged.  cavity_index counts cavities only
/// (0 = first cavity after the atom).
CompositeState dispersive_evolve(const CompositeState& state, int cavity_index,
                                 const DispersiveParams& params);

/// dispersive_evolve with chi = pi exactly; swaps |N,1/2,phi> and
/// |N,1/2,phi+pi> on the excited-atom component.
CompositeState pi_di(const CompositeState& state, int cavity_index);

/// Projective atom measurement.  Branches in fixed order "g", "e" with
/// Born probabilities; post-states renormalized.
std::vector<MeasurementBranch> measure_atom(const CompositeState& state,
                                            MeasuredFactor disposal = MeasuredFactor::collapse);

/// Measurement of the addressed cavity in the 2GBS logical basis
/// {|2,1/2,phi>, |2,1/2,phi+pi>}.  Branches in fixed order "logical_0",
/// "logical_1", "leak", where leak is the projector complement.  Throws
/// integrity_error if the leak probability exceeds leak_tolerance: every
/// protocol here preserves the logical subspace, so real leakage is a bug.
std::vector<MeasurementBranch> measure_cavity_logical(const CompositeState& state,
                                                      int cavity_index, double phi,
                                                      double leak_tolerance = kLeakTol);

/// |<a|b>|^2 over the full composite space.
double state_fidelity(const CompositeState& a, const CompositeState& b);

/// <bra| applied to factor k; the factor is removed from the composite.
/// The result is not renormalized.
CompositeState contract_factor(const CompositeState& state, int k, const Vector& bra);

/// Inserts |ket> as a new factor at position k (inverse of contraction).
CompositeState insert_factor(const CompositeState& state, int k, const Vector& ket);

}  // namespace gbs
