#include "gbs/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace gbs {

namespace {

// Exact integer arithmetic up to N = 62 (largest N whose central
// coefficient fits an unsigned 64-bit intermediate), log-gamma beyond.
double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  if (n <= 62) {
    unsigned long long r = 1;
    for (int j = 1; j <= k; ++j) {
      r = r * static_cast<unsigned long long>(n - k + j) / static_cast<unsigned long long>(j);
    }
    return static_cast<double>(r);
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

CavityState make_ngbs(const NgbsParams& params, int n_max) {
  const int N = params.big_n;
  if (N < 1) {
    throw std::invalid_argument("make_ngbs: N must be a positive integer");
  }
  if (!(params.p >= 0.0 && params.p <= 1.0)) {
    throw std::invalid_argument("make_ngbs: p must lie in [0, 1]");
  }
  if (n_max < N) {
    throw std::invalid_argument("make_ngbs: n_max < N would truncate the state");
  }

  Vector amps = Vector::Zero(n_max + 1);
  if (params.p == 0.0) {
    amps[0] = 1.0;
  } else if (params.p == 1.0) {
    amps[N] = std::polar(1.0, N * params.phi);
  } else if (N <= 62) {
    for (int n = 0; n <= N; ++n) {
      const double w =
          binomial(N, n) * std::pow(params.p, n) * std::pow(1.0 - params.p, N - n);
      amps[n] = std::polar(std::sqrt(w), n * params.phi);
    }
  } else {
    // Large N: assemble the weight in log space so the binomial factor
    // cannot overflow before the p powers bring it back down.
    const double lp = std::log(params.p);
    const double lq = std::log1p(-params.p);
    for (int n = 0; n <= N; ++n) {
      const double lw = std::lgamma(N + 1.0) - std::lgamma(n + 1.0) -
                        std::lgamma(N - n + 1.0) + n * lp + (N - n) * lq;
      amps[n] = std::polar(std::exp(0.5 * lw), n * params.phi);
    }
  }
  return CavityState{std::move(amps)};
}

NgbsParams orthogonal_partner(const NgbsParams& params) {
  return NgbsParams{params.big_n, 1.0 - params.p, params.phi + kPi};
}

CavityState fock_state(int n, int n_max) {
  if (n < 0 || n > n_max) {
    throw std::invalid_argument("fock_state: photon number outside 0..n_max");
  }
  Vector amps = Vector::Zero(n_max + 1);
  amps[n] = 1.0;
  return CavityState{std::move(amps)};
}

CavityState coherent_state(Complex alpha, int n_max) {
  if (n_max < 0) {
    throw std::invalid_argument("coherent_state: n_max must be non-negative");
  }
  Vector amps(n_max + 1);
  amps[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= n_max; ++n) {
    amps[n] = amps[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  }
  const double kept = amps.squaredNorm();
  if (kept < 1.0 - 1e-10) {
    throw std::invalid_argument(
        "coherent_state: truncation at n_max keeps less than 1 - 1e-10 of the norm");
  }
  amps /= std::sqrt(kept);
  return CavityState{std::move(amps)};
}

Complex inner_product(const CavityState& a, const CavityState& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  return a.amps.dot(b.amps);
}

double state_fidelity(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  }
  if (std::abs(a.squaredNorm() - 1.0) > 1e-6 || std::abs(b.squaredNorm() - 1.0) > 1e-6) {
    throw std::invalid_argument("state_fidelity: inputs must be normalized");
  }
  return std::min(1.0, std::norm(a.dot(b)));
}

double state_fidelity(const CavityState& a, const CavityState& b) {
  return state_fidelity(a.amps, b.amps);
}

}  // namespace gbs
