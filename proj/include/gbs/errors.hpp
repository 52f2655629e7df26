#pragma once

#include <stdexcept>
#include <string>

namespace gbs {

// Raised when a state escapes the logical subspace beyond tolerance, or
// an extraction self-check (linearity, unitarity) fails.  Distinct from
// std::invalid_argument so the CLI can map it to its own exit code.
class integrity_error : public std::runtime_error {
 public:
  explicit integrity_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gbs
