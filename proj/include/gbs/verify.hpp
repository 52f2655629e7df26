#pragma once

#include <vector>

#include "gbs/report.hpp"

namespace gbs {

/// Runs the full invariant suite over every module (states, interactions,
/// protocols, analysis) with deterministic seeds.  Each entry reports one
/// named property; all of them passing is the library's self-check.
std::vector<CheckResult> run_verification();

}  // namespace gbs
