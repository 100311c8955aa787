#pragma once

#include <stdexcept>
#include <string>

namespace uwd {

// Bad files, mismatched dimensions, out-of-range parameters. CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerically undefined results (zero variance, empty reductions). CLI exit code 3.
class DegeneracyError : public std::runtime_error {
 public:
  explicit DegeneracyError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace uwd
