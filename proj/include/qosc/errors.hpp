// errors.hpp — exception taxonomy shared by all qosc modules
#pragma once

#include <stdexcept>
#include <string>

namespace qosc {

// Input outside a schedule's tabulated range, bad index, etc.
class RangeError : public std::out_of_range {
 public:
  explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

// Operation asked for a configuration the analytic layer does not cover
// (e.g. coherent transfer off resonance). Route such cases to the oracle.
class UnsupportedConfigError : public std::invalid_argument {
 public:
  explicit UnsupportedConfigError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Quadrature or integrator failed to reach the requested tolerance.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Requested basis or workspace exceeds the configured capacity.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Truncated propagation leaked more probability into the boundary layer
// than the declared budget; rerun with a larger cutoff.
class TruncationError : public std::runtime_error {
 public:
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Closed-form decomposition undefined (e.g. both couplings vanish at t while
// the formulas divide by G(t)).
class DegenerateCouplingError : public std::domain_error {
 public:
  explicit DegenerateCouplingError(const std::string& what)
      : std::domain_error(what) {}
};

}  // namespace qosc
