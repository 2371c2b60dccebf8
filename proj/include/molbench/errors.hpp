#pragma once

#include <stdexcept>
#include <string>

namespace molbench {

/// Invalid or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input data (CLI exit code 3).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// MCMC convergence diagnostics failed (CLI exit code 4).
class DiagnosticError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace molbench
