#pragma once

#include <stdexcept>
#include <string>

namespace repgraph {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operation applied to a dataset of the wrong family.
class family_error : public error {
 public:
  explicit family_error(const std::string& msg) : error(msg) {}
};

/// Inconsistent or invalid dimensions.
class dimension_error : public error {
 public:
  explicit dimension_error(const std::string& msg) : error(msg) {}
};

/// Malformed input values (CSV parsing, invariant violations).
class value_error : public error {
 public:
  explicit value_error(const std::string& msg) : error(msg) {}
};

/// Iterates left the admissible region (e.g. Poisson linear predictor cap).
class divergence_error : public error {
 public:
  explicit divergence_error(const std::string& msg) : error(msg) {}
};

/// Unbounded or ill-posed subproblem.
class degenerate_error : public error {
 public:
  explicit degenerate_error(const std::string& msg) : error(msg) {}
};

}  // namespace repgraph
