#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gbs/protocols.hpp"

namespace gbs {

/// Logical-basis matrix of a protocol, dim 2 (|0_L>, |1_L>) or dim 4
/// (|00>, |01>, |10>, |11>, control slot first).  Global phase is fixed
/// by making the first nonzero entry, scanning column-major, real positive.
struct GateMatrix {
  int dim = 2;
  Matrix entries;
};

struct JitterPoint {
  double epsilon = 0.0;
  double fidelity = 1.0;
  std::string protocol;
};

struct SampleStats {
  long long shots = 0;
  /// One entry per leaf, in leaf order; counts sum to shots.
  std::vector<std::pair<std::string, long long>> counts;
  std::uint64_t seed = 0;
  std::string rng = "mt19937_64";

  double frequency(std::string_view label) const;
};

/// Reconstructs the logical matrix by linearity: one run per basis input
/// gives the columns, two superposition runs align the column phases and
/// bound the linearity residual (throws on residual > 1e-9 or on leak).
/// With success_path_only the first success/corrected leaf is read out;
/// otherwise the first leaf holding an output.
GateMatrix extract_logical_gate(const ProtocolRequest& request,
                                bool success_path_only = true);

/// Reference matrices: CNOT, U_u(theta/2), U_z(theta/2), Hadamard,
/// diag(1,-1) for the pi-QPG, identity for preparation.
GateMatrix ideal_gate(ProtocolKind kind, double theta = 0.0, double varphi = 0.0);

/// max |(U^dagger U - I)_{ij}|.
double unitarity_defect(const Matrix& m);

/// |Tr(U^dagger V)| / d; 1 iff U = V up to global phase.
double gate_fidelity(const GateMatrix& u, const GateMatrix& v);

/// Worst-case fidelity between the outputs of the protocol run with every
/// pi-DI at chi = pi(1+epsilon) and the exact run, over the logical basis
/// inputs (optionally plus two fixed superpositions), matched leaf by leaf
/// over success paths.
double perturbed_worst_fidelity(const ProtocolRequest& request, double epsilon,
                                bool include_superpositions = true);

std::vector<JitterPoint> jitter_sweep(const ProtocolRequest& request,
                                      const std::vector<double>& epsilons);

/// Samples leaf outcomes from the exact branch distribution; identical
/// seed and parameters reproduce identical counts.
SampleStats monte_carlo_run(const ProtocolRequest& request, long long shots,
                            std::uint64_t seed);

}  // namespace gbs
