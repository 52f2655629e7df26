#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace gbs {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kPi = std::numbers::pi;

// Single operations are held to kOpTol; states coming out of a full
// protocol pipeline accumulate rounding over ~10 unitaries and are held
// to kPipelineTol.
inline constexpr double kOpTol = 1e-12;
inline constexpr double kPipelineTol = 1e-9;

// Population outside the two-dimensional logical subspace of a cavity.
// Anything above this signals a protocol or implementation bug.
inline constexpr double kLeakTol = 1e-9;

// Measurement branches below this probability carry no post-state.
inline constexpr double kNullBranchTol = 1e-12;

// Protocols fix the logical qubit in a 3-level Fock space (photon
// numbers 0..2).
inline constexpr int kLogicalNmax = 2;

}  // namespace gbs
