#include "gbs/analysis.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "gbs/errors.hpp"

namespace gbs {

namespace {

constexpr double kLinearityTol = 1e-9;
constexpr Complex kI{0.0, 1.0};

/// One probe input; the control fields are read for cnot only.
struct Probe {
  Complex control_g{1.0, 0.0};
  Complex control_e{0.0, 0.0};
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
};

std::vector<Probe> basis_probes(bool two_qubit) {
  const Complex one{1.0, 0.0};
  const Complex zero{0.0, 0.0};
  if (!two_qubit) {
    return {Probe{one, zero, one, zero}, Probe{one, zero, zero, one}};
  }
  std::vector<Probe> probes;
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      probes.push_back(Probe{c == 0 ? one : zero, c == 0 ? zero : one,
                             t == 0 ? one : zero, t == 0 ? zero : one});
    }
  }
  return probes;
}

std::vector<Probe> superposition_probes(bool two_qubit) {
  const double r = 1.0 / std::sqrt(2.0);
  if (!two_qubit) {
    return {Probe{1.0, 0.0, r, r}, Probe{1.0, 0.0, r, r * kI}};
  }
  return {Probe{r, r, r, r}, Probe{r, r * kI, r, r}};
}

/// Coefficient vector of the probe in the logical basis (control slowest).
Vector probe_coefficients(const Probe& probe, bool two_qubit) {
  if (!two_qubit) {
    Vector v(2);
    v << probe.a, probe.b;
    return v;
  }
  Vector v(4);
  v << probe.control_g * probe.a, probe.control_g * probe.b,
       probe.control_e * probe.a, probe.control_e * probe.b;
  return v;
}

ProtocolRequest with_probe(const ProtocolRequest& request, const Probe& probe) {
  ProtocolRequest r = request;
  r.control_g = probe.control_g;
  r.control_e = probe.control_e;
  r.a = probe.a;
  r.b = probe.b;
  return r;
}

bool is_success(LeafClass c) {
  return c == LeafClass::success || c == LeafClass::corrected;
}

std::string pick_readout_path(const BranchTree& tree, bool success_path_only,
                              bool two_qubit) {
  for (const BranchLeaf& leaf : tree.leaves) {
    const bool readable = two_qubit ? leaf.state.has_value()
                                    : leaf.output_state.has_value();
    if (!readable) continue;
    if (success_path_only && !is_success(leaf.classification)) continue;
    return leaf.path;
  }
  throw std::runtime_error("extract_logical_gate: no readable leaf");
}

/// Logical coefficients of the chosen leaf; throws on out-of-subspace
/// population above kLinearityTol.
Vector leaf_coefficients(const BranchTree& tree, const std::string& path,
                         bool two_qubit, double phi) {
  const BranchLeaf* leaf = tree.find(path);
  if (!leaf) {
    throw std::runtime_error("extract_logical_gate: leaf '" + path +
                             "' missing from a probe run");
  }
  Vector c;
  double norm2 = 0.0;
  if (two_qubit) {
    const Vector& out = leaf->state->amps;
    c.resize(4);
    int k = 0;
    for (int atom = 0; atom < 2; ++atom) {
      for (int t = 0; t < 2; ++t) {
        const Vector basis =
            compose(atom == 0 ? AtomState::ground() : AtomState::excited(),
                    {make_ngbs({kLogicalNmax, 0.5, t == 0 ? phi : phi + kPi},
                               kLogicalNmax)})
                .amps;
        c[k++] = basis.dot(out);
      }
    }
    norm2 = out.squaredNorm();
  } else {
    const Vector& out = leaf->output_state->amps;
    c.resize(2);
    c[0] = make_ngbs({kLogicalNmax, 0.5, phi}, leaf->output_state->n_max()).amps.dot(out);
    c[1] = make_ngbs({kLogicalNmax, 0.5, phi + kPi}, leaf->output_state->n_max()).amps.dot(out);
    norm2 = out.squaredNorm();
  }
  const double leak = std::max(0.0, norm2 - c.squaredNorm());
  if (leak > kLinearityTol) {
    throw integrity_error("extract_logical_gate: readout leak " +
                          std::to_string(leak) + " exceeds tolerance");
  }
  return c;
}

}  // namespace

double SampleStats::frequency(std::string_view label) const {
  for (const auto& [name, count] : counts) {
    if (name == label) return static_cast<double>(count) / static_cast<double>(shots);
  }
  return 0.0;
}

GateMatrix extract_logical_gate(const ProtocolRequest& request,
                                bool success_path_only) {
  const bool two_qubit = request.kind == ProtocolKind::cnot;
  const int d = two_qubit ? 4 : 2;

  const std::vector<Probe> basis = basis_probes(two_qubit);
  const std::vector<Probe> supers = superposition_probes(two_qubit);

  std::string path;
  Matrix m(d, d);
  for (int j = 0; j < d; ++j) {
    const BranchTree tree = run_protocol(with_probe(request, basis[j]));
    if (j == 0) path = pick_readout_path(tree, success_path_only, two_qubit);
    m.col(j) = leaf_coefficients(tree, path, two_qubit, request.phi);
  }

  // Column phases are aligned against the first superposition run: for a
  // linear protocol w = gamma M v with orthogonal columns, so
  // <col_j|w> carries exactly the phase that cancels col_j's own.
  std::vector<Vector> outputs;
  for (const Probe& probe : supers) {
    outputs.push_back(
        leaf_coefficients(run_protocol(with_probe(request, probe)), path,
                          two_qubit, request.phi));
  }
  for (int j = 0; j < d; ++j) {
    const Complex u = m.col(j).dot(outputs[0]);
    if (std::abs(u) < 1e-12) {
      throw std::runtime_error("extract_logical_gate: superposition output is "
                               "orthogonal to a basis column");
    }
    m.col(j) *= u / std::abs(u);
    m.col(j) /= m.col(j).norm();
  }

  for (size_t s = 0; s < supers.size(); ++s) {
    const Vector predicted = m * probe_coefficients(supers[s], two_qubit);
    Complex gamma = predicted.dot(outputs[s]);
    if (std::abs(gamma) > 0.0) gamma /= std::abs(gamma);
    const double residual = (outputs[s] - gamma * predicted).norm();
    if (residual > kLinearityTol) {
      throw std::runtime_error("extract_logical_gate: linearity residual " +
                               std::to_string(residual) + " exceeds tolerance");
    }
  }

  Complex pivot{0.0, 0.0};
  for (int j = 0; j < d && pivot == Complex{0.0, 0.0}; ++j) {
    for (int i = 0; i < d; ++i) {
      if (std::abs(m(i, j)) > 1e-6) {
        pivot = m(i, j);
        break;
      }
    }
  }
  if (pivot != Complex{0.0, 0.0}) m *= std::conj(pivot) / std::abs(pivot);

  return GateMatrix{d, std::move(m)};
}

GateMatrix ideal_gate(ProtocolKind kind, double theta, double varphi) {
  switch (kind) {
    case ProtocolKind::cnot: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return GateMatrix{4, std::move(m)};
    }
    case ProtocolKind::rotate_u:
      return GateMatrix{2, ramsey_matrix({theta, varphi})};
    case ProtocolKind::rotate_z: {
      Matrix m = Matrix::Zero(2, 2);
      m(0, 0) = std::polar(1.0, theta / 2.0);
      m(1, 1) = std::polar(1.0, -theta / 2.0);
      return GateMatrix{2, std::move(m)};
    }
    case ProtocolKind::hadamard: {
      Matrix m(2, 2);
      const double r = 1.0 / std::sqrt(2.0);
      m << r, r, r, -r;
      return GateMatrix{2, std::move(m)};
    }
    case ProtocolKind::qpg: {
      Matrix m = Matrix::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      return GateMatrix{2, std::move(m)};
    }
    case ProtocolKind::prepare:
      return GateMatrix{2, Matrix::Identity(2, 2)};
  }
  throw std::invalid_argument("ideal_gate: unknown protocol kind");
}

double unitarity_defect(const Matrix& m) {
  return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()))
      .cwiseAbs()
      .maxCoeff();
}

double gate_fidelity(const GateMatrix& u, const GateMatrix& v) {
  if (u.dim != v.dim || u.entries.rows() != v.entries.rows() ||
      u.entries.cols() != v.entries.cols()) {
    throw std::invalid_argument("gate_fidelity: dimension mismatch");
  }
  return std::abs((u.entries.adjoint() * v.entries).trace()) /
         static_cast<double>(u.dim);
}

double perturbed_worst_fidelity(const ProtocolRequest& request, double epsilon,
                                bool include_superpositions) {
  const bool two_qubit = request.kind == ProtocolKind::cnot;
  std::vector<Probe> probes = basis_probes(two_qubit);
  if (include_superpositions) {
    for (const Probe& probe : superposition_probes(two_qubit)) {
      probes.push_back(probe);
    }
  }

  double worst = 1.0;
  for (const Probe& probe : probes) {
    ProtocolRequest ideal = with_probe(request, probe);
    ideal.options.di_chi = kPi;
    ProtocolRequest perturbed = ideal;
    perturbed.options.di_chi = kPi * (1.0 + epsilon);
    perturbed.options.leak_tolerance = 1.0;

    const BranchTree exact = run_protocol(ideal);
    const BranchTree jittered = run_protocol(perturbed);

    if (two_qubit) {
      worst = std::min(worst, state_fidelity(*exact.leaves.front().state,
                                             *jittered.leaves.front().state));
      continue;
    }
    for (const BranchLeaf& leaf : exact.leaves) {
      if (!is_success(leaf.classification) || !leaf.output_state ||
          leaf.probability < 1e-12) {
        continue;
      }
      const BranchLeaf* other = jittered.find(leaf.path);
      if (!other || !other->output_state) {
        worst = 0.0;
        continue;
      }
      worst = std::min(worst, state_fidelity(leaf.output_state->amps,
                                             other->output_state->amps));
    }
  }
  return worst;
}

std::vector<JitterPoint> jitter_sweep(const ProtocolRequest& request,
                                      const std::vector<double>& epsilons) {
  std::vector<JitterPoint> points;
  points.reserve(epsilons.size());
  for (double eps : epsilons) {
    points.push_back(JitterPoint{eps, perturbed_worst_fidelity(request, eps, true),
                                 protocol_name(request.kind)});
  }
  return points;
}

SampleStats monte_carlo_run(const ProtocolRequest& request, long long shots,
                            std::uint64_t seed) {
  if (shots < 1) {
    throw std::invalid_argument("monte_carlo_run: shots must be >= 1");
  }
  const BranchTree tree = run_protocol(request);

  std::vector<double> cumulative;
  cumulative.reserve(tree.leaves.size());
  double acc = 0.0;
  for (const BranchLeaf& leaf : tree.leaves) {
    acc += leaf.probability;
    cumulative.push_back(acc);
  }

  std::vector<long long> counts(tree.leaves.size(), 0);
  std::mt19937_64 gen(seed);
  for (long long shot = 0; shot < shots; ++shot) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    size_t k = 0;
    while (k + 1 < cumulative.size() && u >= cumulative[k]) ++k;
    ++counts[k];
  }

  SampleStats stats;
  stats.shots = shots;
  stats.seed = seed;
  for (size_t k = 0; k < counts.size(); ++k) {
    stats.counts.emplace_back(tree.leaves[k].path, counts[k]);
  }
  return stats;
}

}  // namespace gbs
