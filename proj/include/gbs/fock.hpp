#pragma once

#include "gbs/types.hpp"

namespace gbs {

/// One cavity mode truncated at photon number n_max.  amps[n] is the
/// probability amplitude on the Fock state |n>.
struct CavityState {
  Vector amps;

  int n_max() const { return static_cast<int>(amps.size()) - 1; }
  Eigen::Index dim() const { return amps.size(); }
};

/// Parameters of the generalized binomial state |N,p,phi>: N is the
/// maximum photon number, p the probability of single photon occurrence
/// and phi the mean phase.
struct NgbsParams {
  int big_n = 1;
  double p = 0.5;
  double phi = 0.0;
};

/// Builds sum_n sqrt(C(N,n) p^n (1-p)^(N-n)) e^{i n phi} |n> truncated at
/// n_max.  Requires n_max >= N so no probability is lost.  p = 0 gives
/// the vacuum and p = 1 gives e^{iN phi}|N>, both exactly.
CavityState make_ngbs(const NgbsParams& params, int n_max);

/// The orthogonal companion (N, 1-p, phi+pi); the overlap
/// <N,p,phi|N,1-p,phi+pi> vanishes for every valid parameter set.
NgbsParams orthogonal_partner(const NgbsParams& params);

/// Fock state |n> on a space truncated at n_max.
CavityState fock_state(int n, int n_max);

/// Truncated Glauber coherent state |alpha>, renormalized.  Rejects a
/// truncation that keeps less than 1 - 1e-10 of the norm.
CavityState coherent_state(Complex alpha, int n_max);

/// <a|b>, conjugate-linear in the first argument.  Dimensions must match.
Complex inner_product(const CavityState& a, const CavityState& b);

/// |<a|b>|^2 for normalized inputs; 1 iff the states agree up to a
/// global phase.
double state_fidelity(const CavityState& a, const CavityState& b);

/// Fidelity on raw amplitude vectors; shared kernel for the overloads.
double state_fidelity(const Vector& a, const Vector& b);

}  // namespace gbs
