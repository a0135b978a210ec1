#pragma once

#include <stdexcept>
#include <string>

namespace raysim {

// Bad user-supplied values (malformed codes, non-positive dims, ...). CLI exit 2.
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// Field evaluation requested within one wire radius of a coil filament.
class singularity_error : public std::domain_error {
 public:
  explicit singularity_error(const std::string& what) : std::domain_error(what) {}
};

// Calibration could not satisfy its constraints. CLI exit 3.
class calibration_error : public std::runtime_error {
 public:
  explicit calibration_error(const std::string& what) : std::runtime_error(what) {}
};

// Signal analysis precondition failed (aperiodic traces, degenerate input).
class analysis_error : public std::runtime_error {
 public:
  explicit analysis_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace raysim
