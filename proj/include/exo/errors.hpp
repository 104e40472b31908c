#pragma once

#include <stdexcept>
#include <string>

namespace exo {

/// Input outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Impossible or degenerate planar geometry (endpoint inside the wrist
/// circle, mounting points coincide, wrap construction invalid, ...).
struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// A fit or numerical search failed (singular normal equations, no zero
/// crossing, optimizer breakdown).
struct FitError : std::runtime_error {
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

/// A feasibility search found no admissible solution.
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what)
      : std::runtime_error(what) {}
};

/// File, CSV, or JSON input problems.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace exo
