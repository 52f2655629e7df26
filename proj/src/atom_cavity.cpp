#include "gbs/atom_cavity.hpp"

#include <cmath>
#include <stdexcept>

#include "gbs/errors.hpp"

namespace gbs {

namespace {

void require_atom_first(const CompositeState& state, const char* who) {
  if (state.factor_count() == 0 || state.factor_dims[0] != 2) {
    throw std::invalid_argument(std::string(who) + ": composite has no atom factor in slot 0");
  }
}

int cavity_factor(const CompositeState& state, int cavity_index, const char* who) {
  const int f = cavity_index + 1;
  if (cavity_index < 0 || f >= state.factor_count()) {
    throw std::invalid_argument(std::string(who) + ": cavity index out of range");
  }
  return f;
}

}  // namespace

AtomState AtomState::from_amplitudes(Complex amp_g, Complex amp_e) {
  const double n = std::norm(amp_g) + std::norm(amp_e);
  if (std::abs(n - 1.0) > kPipelineTol) {
    throw std::invalid_argument("AtomState: amplitudes are not normalized");
  }
  return AtomState{{amp_g, amp_e}};
}

Eigen::Index CompositeState::stride(int k) const {
  Eigen::Index s = 1;
  for (int j = k + 1; j < factor_count(); ++j) s *= factor_dims[j];
  return s;
}

int CompositeState::digit(Eigen::Index index, int k) const {
  return static_cast<int>((index / stride(k)) % factor_dims[k]);
}

CompositeState compose(const AtomState& atom, const std::vector<CavityState>& cavities) {
  if (cavities.empty()) {
    throw std::invalid_argument("compose: at least one cavity factor is required");
  }
  std::vector<Eigen::Index> dims{2};
  Vector amps = atom.amps;
  for (const CavityState& c : cavities) {
    dims.push_back(c.dim());
    Vector next(amps.size() * c.dim());
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      next.segment(i * c.dim(), c.dim()) = amps[i] * c.amps;
    }
    amps = std::move(next);
  }
  return CompositeState{std::move(dims), std::move(amps)};
}

Matrix2 ramsey_matrix(const RamseyParams& params) {
  const double c = std::cos(params.theta / 2.0);
  const double s = std::sin(params.theta / 2.0);
  const Complex phase = std::polar(1.0, params.varphi);
  Matrix2 u;
  u << c, -phase * s, std::conj(phase) * s, c;
  return u;
}

AtomState ramsey_apply(const AtomState& atom, const RamseyParams& params) {
  return AtomState{ramsey_matrix(params) * atom.amps};
}

CompositeState ramsey_apply(const CompositeState& state, const RamseyParams& params) {
  require_atom_first(state, "ramsey_apply");
  const Eigen::Index half = state.dim() / 2;
  const Matrix2 u = ramsey_matrix(params);
  Vector amps(state.dim());
  amps.head(half) = u(0, 0) * state.amps.head(half) + u(0, 1) * state.amps.tail(half);
  amps.tail(half) = u(1, 0) * state.amps.head(half) + u(1, 1) * state.amps.tail(half);
  return CompositeState{state.factor_dims, std::move(amps)};
}

CompositeState dispersive_evolve(const CompositeState& state, int cavity_index,
                                 const DispersiveParams& params) {
  require_atom_first(state, "dispersive_evolve");
  const int f = cavity_factor(state, cavity_index, "dispersive_evolve");

  std::vector<Complex> phase(state.factor_dims[f]);
  for (size_t n = 0; n < phase.size(); ++n) {
    phase[n] = std::polar(1.0, -params.chi * static_cast<double>(n));
  }

  Vector amps = state.amps;
  const Eigen::Index half = state.dim() / 2;
  const Eigen::Index s = state.stride(f);
  const Eigen::Index d = state.factor_dims[f];
  for (Eigen::Index i = half; i < state.dim(); ++i) {
    amps[i] *= phase[static_cast<size_t>((i / s) % d)];
  }
  return CompositeState{state.factor_dims, std::move(amps)};
}

CompositeState pi_di(const CompositeState& state, int cavity_index) {
  return dispersive_evolve(state, cavity_index, DispersiveParams{kPi});
}

CompositeState contract_factor(const CompositeState& state, int k, const Vector& bra) {
  if (k < 0 || k >= state.factor_count()) {
    throw std::invalid_argument("contract_factor: factor index out of range");
  }
  if (bra.size() != state.factor_dims[k]) {
    throw std::invalid_argument("contract_factor: bra dimension mismatch");
  }
  std::vector<Eigen::Index> dims = state.factor_dims;
  dims.erase(dims.begin() + k);

  const Eigen::Index s = state.stride(k);
  const Eigen::Index block = s * state.factor_dims[k];
  Vector out = Vector::Zero(state.dim() / state.factor_dims[k]);
  for (Eigen::Index i = 0; i < state.dim(); ++i) {
    const Eigen::Index level = (i / s) % state.factor_dims[k];
    const Eigen::Index j = (i / block) * s + (i % s);
    out[j] += std::conj(bra[level]) * state.amps[i];
  }
  return CompositeState{std::move(dims), std::move(out)};
}

CompositeState insert_factor(const CompositeState& state, int k, const Vector& ket) {
  if (k < 0 || k > state.factor_count()) {
    throw std::invalid_argument("insert_factor: factor index out of range");
  }
  std::vector<Eigen::Index> dims = state.factor_dims;
  dims.insert(dims.begin() + k, ket.size());

  CompositeState out{std::move(dims), Vector(state.dim() * ket.size())};
  const Eigen::Index s = out.stride(k);
  const Eigen::Index block = s * ket.size();
  for (Eigen::Index j = 0; j < out.dim(); ++j) {
    const Eigen::Index level = (j / s) % ket.size();
    const Eigen::Index i = (j / block) * s + (j % s);
    out.amps[j] = ket[level] * state.amps[i];
  }
  return out;
}

std::vector<MeasurementBranch> measure_atom(const CompositeState& state,
                                            MeasuredFactor disposal) {
  require_atom_first(state, "measure_atom");
  std::vector<MeasurementBranch> branches;
  for (int level = 0; level < 2; ++level) {
    Vector bra = Vector::Zero(2);
    bra[level] = 1.0;
    CompositeState reduced = contract_factor(state, 0, bra);
    const double p = reduced.amps.squaredNorm();
    MeasurementBranch branch{level == 0 ? "g" : "e", p, std::nullopt};
    if (p > kNullBranchTol) {
      reduced.amps /= std::sqrt(p);
      branch.post_state = disposal == MeasuredFactor::collapse
                              ? insert_factor(reduced, 0, bra)
                              : std::move(reduced);
    }
    branches.push_back(std::move(branch));
  }
  return branches;
}

std::vector<MeasurementBranch> measure_cavity_logical(const CompositeState& state,
                                                      int cavity_index, double phi,
                                                      double leak_tolerance) {
  require_atom_first(state, "measure_cavity_logical");
  const int f = cavity_factor(state, cavity_index, "measure_cavity_logical");
  const int n_max = static_cast<int>(state.factor_dims[f]) - 1;
  if (n_max < kLogicalNmax) {
    throw std::invalid_argument("measure_cavity_logical: cavity dimension below 3");
  }

  const Vector basis[2] = {
      make_ngbs({kLogicalNmax, 0.5, phi}, n_max).amps,
      make_ngbs({kLogicalNmax, 0.5, phi + kPi}, n_max).amps,
  };

  std::vector<MeasurementBranch> branches;
  Vector residual = state.amps;
  for (int l = 0; l < 2; ++l) {
    CompositeState reduced = contract_factor(state, f, basis[l]);
    const double p = reduced.amps.squaredNorm();
    CompositeState projected = insert_factor(reduced, f, basis[l]);
    residual -= projected.amps;
    MeasurementBranch branch{l == 0 ? "logical_0" : "logical_1", p, std::nullopt};
    if (p > kNullBranchTol) {
      projected.amps /= std::sqrt(p);
      branch.post_state = std::move(projected);
    }
    branches.push_back(std::move(branch));
  }

  const double p_leak = residual.squaredNorm();
  if (p_leak > leak_tolerance) {
    throw integrity_error("measure_cavity_logical: leak probability " +
                          std::to_string(p_leak) + " exceeds tolerance; state left "
                          "the logical subspace");
  }
  MeasurementBranch leak{"leak", p_leak, std::nullopt};
  if (p_leak > kNullBranchTol) {
    leak.post_state = CompositeState{state.factor_dims, residual / std::sqrt(p_leak)};
  }
  branches.push_back(std::move(leak));
  return branches;
}

double state_fidelity(const CompositeState& a, const CompositeState& b) {
  if (a.factor_dims != b.factor_dims) {
    throw std::invalid_argument("state_fidelity: factor layout mismatch");
  }
  return state_fidelity(a.amps, b.amps);
}

}  // namespace gbs
