#include "gbs/verify.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace gbs {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

LogicalQubit random_qubit(std::mt19937_64& gen, double phi) {
  std::normal_distribution<double> n;
  Complex a{n(gen), n(gen)};
  Complex b{n(gen), n(gen)};
  const double s = std::sqrt(std::norm(a) + std::norm(b));
  return LogicalQubit{a / s, b / s, phi};
}

ProtocolRequest request_for(ProtocolKind kind, const LogicalQubit& q,
                            double theta = 0.0, double varphi = 0.0) {
  ProtocolRequest r;
  r.kind = kind;
  r.a = q.a;
  r.b = q.b;
  r.phi = q.phi;
  r.theta = theta;
  r.varphi = varphi;
  return r;
}

struct Suite {
  std::vector<CheckResult> results;

  void check(std::string name, bool passed, std::string detail) {
    results.push_back(CheckResult{std::move(name), passed, std::move(detail)});
  }

  /// Convenience for "value must not exceed bound" checks.
  void below(std::string name, double value, double bound) {
    check(std::move(name), value <= bound, "max " + sci(value) + " bound " + sci(bound));
  }
};

void verify_states(Suite& suite) {
  double worst_orth = 0.0;
  for (int n = 1; n <= 10; ++n) {
    for (int ip = 0; ip <= 10; ++ip) {
      for (int iphi = 0; iphi <= 8; ++iphi) {
        const double p = ip / 10.0;
        const double phi = iphi * kPi / 4.0;
        const CavityState s = make_ngbs({n, p, phi}, n);
        const CavityState t = make_ngbs({n, 1.0 - p, phi + kPi}, n);
        worst_orth = std::max(worst_orth, std::abs(inner_product(s, t)));
      }
    }
  }
  suite.below("states/orthogonal-partner-overlap", worst_orth, 1e-12);

  double worst_limit = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const double phi = 0.3 * n;
    Vector vac = Vector::Zero(n + 1);
    vac[0] = 1.0;
    worst_limit = std::max(worst_limit,
                           (make_ngbs({n, 0.0, phi}, n).amps - vac).norm());
    Vector top = Vector::Zero(n + 1);
    top[n] = std::polar(1.0, n * phi);
    worst_limit = std::max(worst_limit,
                           (make_ngbs({n, 1.0, phi}, n).amps - top).norm());
  }
  suite.check("states/p-limits-exact", worst_limit == 0.0, "residual " + sci(worst_limit));

  double worst_norm = 0.0;
  for (int n : {1, 2, 7, 40, 400}) {
    const CavityState s = make_ngbs({n, 0.37, 1.1}, n);
    worst_norm = std::max(worst_norm, std::abs(s.amps.norm() - 1.0));
  }
  suite.below("states/normalization", worst_norm, 1e-12);

  const double coherent_overlap =
      state_fidelity(coherent_state(1.0, 40), make_ngbs({40, 1.0 / 40.0, 0.0}, 40));
  suite.check("states/coherent-limit", coherent_overlap >= 0.99,
              "F " + sci(coherent_overlap));

  const NgbsParams twice = orthogonal_partner(orthogonal_partner({2, 0.3, 0.4}));
  const bool involution = twice.big_n == 2 && std::abs(twice.p - 0.3) < 1e-15 &&
                          std::abs(twice.phi - 0.4 - 2.0 * kPi) < 1e-12;
  suite.check("states/partner-involution", involution, "");
}

void verify_interactions(Suite& suite) {
  double worst = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double phi = i * kPi / 4.0;
    const CompositeState in = compose(AtomState::excited(),
                                      {make_ngbs({2, 0.5, phi}, 2)});
    const CompositeState out = pi_di(in, 0);
    const CompositeState expect = compose(AtomState::excited(),
                                          {make_ngbs({2, 0.5, phi + kPi}, 2)});
    worst = std::max(worst, 1.0 - state_fidelity(out, expect));
    worst = std::max(worst, 1.0 - state_fidelity(pi_di(out, 0), in));
  }
  suite.below("interactions/pi-di-exact", worst, 1e-12);

  const CompositeState g_in = compose(AtomState::ground(), {make_ngbs({2, 0.5, 0.7}, 2)});
  suite.below("interactions/di-ground-noop",
              (pi_di(g_in, 0).amps - g_in.amps).norm(), 1e-15);

  double worst_unitary = 0.0;
  for (double theta : {0.0, 0.4, kPi / 2.0, kPi, 5.0}) {
    for (double varphi : {0.0, 1.3, kPi}) {
      const Matrix2 u = ramsey_matrix({theta, varphi});
      worst_unitary =
          std::max(worst_unitary,
                   (u.adjoint() * u - Matrix2::Identity()).cwiseAbs().maxCoeff());
    }
  }
  suite.below("interactions/ramsey-unitary", worst_unitary, 1e-15);

  std::mt19937_64 gen(41);
  double worst_meas = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const LogicalQubit q = random_qubit(gen, 0.2);
    CompositeState s = compose(AtomState::ground(), {q.to_cavity_state()});
    s = ramsey_apply(s, {1.1, 0.3});
    s = dispersive_evolve(s, 0, {kPi});
    double total = 0.0;
    for (const MeasurementBranch& b : measure_atom(s)) {
      total += b.probability;
      if (b.post_state) {
        const auto again = measure_atom(*b.post_state);
        const double repeat = b.outcome_label == "g" ? again[0].probability
                                                     : again[1].probability;
        worst_meas = std::max(worst_meas, std::abs(repeat - 1.0));
      }
    }
    worst_meas = std::max(worst_meas, std::abs(total - 1.0));
  }
  suite.below("interactions/measurement-born-rule", worst_meas, 1e-12);
}

void verify_protocols(Suite& suite) {
  std::mt19937_64 gen(42);

  double worst_sum = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const LogicalQubit q = random_qubit(gen, 0.3 * trial);
    for (ProtocolKind kind : {ProtocolKind::prepare, ProtocolKind::cnot,
                              ProtocolKind::rotate_u, ProtocolKind::rotate_z,
                              ProtocolKind::hadamard, ProtocolKind::qpg}) {
      ProtocolRequest r = request_for(kind, q, 1.2, 0.4);
      r.control_g = Complex{0.6, 0.0};
      r.control_e = Complex{0.0, 0.8};
      double sum = 0.0;
      for (const BranchLeaf& leaf : run_protocol(r).leaves) sum += leaf.probability;
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
  }
  suite.below("protocols/leaf-probabilities-sum-to-1", worst_sum, 1e-12);

  double worst_prep = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double phi = 0.17 * trial;
    const LogicalQubit q = random_qubit(gen, phi);
    const BranchTree tree = prepare_qubit(q.a, q.b, phi);
    const Vector plus = q.to_cavity_state().amps;
    const Vector minus = LogicalQubit{q.a, -q.b, phi}.to_cavity_state().amps;
    worst_prep = std::max(worst_prep,
                          1.0 - state_fidelity(tree.find("e")->output_state->amps, plus));
    worst_prep = std::max(worst_prep,
                          1.0 - state_fidelity(tree.find("g")->output_state->amps, minus));
    worst_prep = std::max(worst_prep, std::abs(tree.find("e")->probability - 0.5));
    worst_prep = std::max(worst_prep, std::abs(tree.find("g")->probability - 0.5));
  }
  suite.below("protocols/preparation-branches-exact", worst_prep, 1e-12);

  double worst_rot = 0.0;
  double worst_rot_p = 0.0;
  for (int it = 0; it < 8; ++it) {
    for (int iv = 0; iv < 4; ++iv) {
      const double theta = it * kPi / 4.0;
      const double varphi = iv * kPi / 2.0;
      for (int trial = 0; trial < 3; ++trial) {
        const LogicalQubit q = random_qubit(gen, 0.5);
        for (ProtocolKind kind : {ProtocolKind::rotate_u, ProtocolKind::rotate_z}) {
          const BranchTree tree =
              kind == ProtocolKind::rotate_u ? rotate_u(q, theta, varphi)
                                             : rotate_z(q, theta);
          const Matrix u = ideal_gate(kind, theta, varphi).entries;
          Vector v(2);
          v << q.a, q.b;
          const Vector w = u * v;
          const Vector expect =
              LogicalQubit{w[0], w[1], q.phi}.to_cavity_state().amps;
          double p_success = 0.0;
          for (const BranchLeaf& leaf : tree.leaves) {
            if (leaf.classification != LeafClass::success) continue;
            p_success += leaf.probability;
            worst_rot = std::max(worst_rot,
                                 1.0 - state_fidelity(leaf.output_state->amps, expect));
          }
          worst_rot_p = std::max(worst_rot_p, std::abs(p_success - 0.5));
        }
      }
    }
  }
  suite.below("protocols/rotation-matrix-action", worst_rot, 1e-9);
  suite.below("protocols/rotation-success-probability", worst_rot_p, 1e-12);

  double worst_cnot = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const LogicalQubit q = random_qubit(gen, 0.9);
    const LogicalQubit c = random_qubit(gen, 0.0);
    const CompositeState out =
        cnot_gate(AtomState::from_amplitudes(c.a, c.b), q);
    const Vector target_id = q.to_cavity_state().amps;
    const Vector target_fl = LogicalQubit{q.b, q.a, q.phi}.to_cavity_state().amps;
    Vector expect(6);
    expect.head(3) = c.a * target_id;
    expect.tail(3) = c.b * target_fl;
    worst_cnot = std::max(worst_cnot, (out.amps - expect).norm());
  }
  suite.below("protocols/cnot-superposition-action", worst_cnot, 1e-12);

  const BranchTree cn = cnot_tree(AtomState::excited(),
                                  LogicalQubit::from_coefficients(1.0, 0.0, 0.0));
  suite.check("protocols/cnot-deterministic",
              cn.leaves.size() == 1 && std::abs(cn.leaves[0].probability - 1.0) < 1e-15,
              "");

  double worst_qpg = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const LogicalQubit q = random_qubit(gen, 1.3);
    const BranchTree once = qpg_pi(q);
    const LogicalQubit flipped = *once.first_success()->logical_output;
    const BranchTree twice = qpg_pi(flipped);
    worst_qpg = std::max(
        worst_qpg, 1.0 - state_fidelity(twice.first_success()->output_state->amps,
                                        q.to_cavity_state().amps));
  }
  suite.below("protocols/qpg-involution", worst_qpg, 1e-9);

  double worst_cov = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const LogicalQubit q = random_qubit(gen, 0.0);
    for (double shift : {0.7, 2.1}) {
      const BranchTree base = rotate_u(q, 1.1, 0.6);
      const BranchTree moved = rotate_u(LogicalQubit{q.a, q.b, shift}, 1.1, 0.6);
      for (const BranchLeaf& leaf : base.leaves) {
        if (!leaf.logical_output) continue;
        const BranchLeaf* other = moved.find(leaf.path);
        worst_cov = std::max(worst_cov,
                             std::abs(leaf.logical_output->a - other->logical_output->a));
        worst_cov = std::max(worst_cov,
                             std::abs(leaf.logical_output->b - other->logical_output->b));
      }
    }
  }
  suite.below("protocols/basis-phase-covariance", worst_cov, 1e-12);

  const LogicalQubit plus = random_qubit(gen, 0.4);
  const BranchTree h = hadamard_gate(plus);
  suite.below("protocols/hadamard-success-probability",
              std::abs(h.probability_of(LeafClass::success) - 0.125), 1e-12);
}

void verify_analysis(Suite& suite) {
  double worst_gate = 0.0;
  double worst_unitary = 0.0;
  for (int it = 0; it < 4; ++it) {
    for (int iv = 0; iv < 3; ++iv) {
      const double theta = 0.3 + it * 1.4;
      const double varphi = iv * 2.0;
      const ProtocolRequest r =
          request_for(ProtocolKind::rotate_u, LogicalQubit{}, theta, varphi);
      const GateMatrix g = extract_logical_gate(r);
      worst_unitary = std::max(worst_unitary, unitarity_defect(g.entries));
      worst_gate = std::max(
          worst_gate, 1.0 - gate_fidelity(g, ideal_gate(ProtocolKind::rotate_u,
                                                        theta, varphi)));
    }
  }
  suite.below("analysis/rotation-tomography", worst_gate, 1e-9);
  suite.below("analysis/extracted-gate-unitarity", worst_unitary, 1e-9);

  const GateMatrix had = extract_logical_gate(request_for(ProtocolKind::hadamard,
                                                          LogicalQubit{}));
  suite.below("analysis/hadamard-tomography",
              1.0 - gate_fidelity(had, ideal_gate(ProtocolKind::hadamard)), 1e-9);

  const GateMatrix cn = extract_logical_gate(request_for(ProtocolKind::cnot,
                                                         LogicalQubit{}));
  suite.below("analysis/cnot-tomography",
              1.0 - gate_fidelity(cn, ideal_gate(ProtocolKind::cnot)), 1e-9);

  const GateMatrix qpg = extract_logical_gate(request_for(ProtocolKind::qpg,
                                                          LogicalQubit{}));
  suite.below("analysis/qpg-tomography",
              1.0 - gate_fidelity(qpg, ideal_gate(ProtocolKind::qpg)), 1e-9);

  const GateMatrix id4 = GateMatrix{4, Matrix::Identity(4, 4)};
  const double f_half = gate_fidelity(ideal_gate(ProtocolKind::cnot), id4);
  suite.check("analysis/gate-fidelity-reference",
              std::abs(f_half - 0.5) < 1e-15 &&
                  std::abs(gate_fidelity(cn, cn) - 1.0) < 1e-12,
              "F(CNOT, I) " + sci(f_half));

  const ProtocolRequest cnot_req = request_for(ProtocolKind::cnot, LogicalQubit{});
  suite.below("analysis/jitter-zero-epsilon",
              1.0 - perturbed_worst_fidelity(cnot_req, 0.0), 1e-12);
  const double plus_eps = perturbed_worst_fidelity(cnot_req, 0.01);
  const double minus_eps = perturbed_worst_fidelity(cnot_req, -0.01);
  suite.below("analysis/jitter-symmetry", std::abs(plus_eps - minus_eps), 1e-12);
  suite.check("analysis/jitter-floor", plus_eps >= 0.99, "F " + sci(plus_eps));

  bool monotone = true;
  double prev = 1.0 + 1e-15;
  for (int i = 0; i <= 10; ++i) {
    const double f = perturbed_worst_fidelity(cnot_req, 0.005 * i);
    monotone = monotone && f <= prev + 1e-12;
    prev = f;
  }
  suite.check("analysis/jitter-monotone", monotone, "");

  const ProtocolRequest prep = request_for(ProtocolKind::prepare,
                                           LogicalQubit{Complex{0.6, 0.0},
                                                        Complex{0.8, 0.0}, 0.0});
  const SampleStats a = monte_carlo_run(prep, 20000, 7);
  const SampleStats b = monte_carlo_run(prep, 20000, 7);
  suite.check("analysis/sampling-reproducible", a.counts == b.counts, "");
  long long total = 0;
  for (const auto& [label, count] : a.counts) total += count;
  suite.check("analysis/sampling-counts-total", total == a.shots, "");
  double worst_freq = 0.0;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const SampleStats s = monte_carlo_run(prep, 20000, seed);
    worst_freq = std::max(worst_freq, std::abs(s.frequency("e") - 0.5));
  }
  suite.below("analysis/sampling-frequency", worst_freq, 3.0 * std::sqrt(0.25 / 20000.0));
}

}  // namespace

std::vector<CheckResult> run_verification() {
  Suite suite;
  verify_states(suite);
  verify_interactions(suite);
  verify_protocols(suite);
  verify_analysis(suite);
  return suite.results;
}

}  // namespace gbs
