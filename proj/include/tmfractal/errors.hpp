#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tmfractal {

// Bad arguments, malformed tables, out-of-range ids. CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failures. CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Datasets that are malformed, incomplete or inconsistent. CLI exit code 4.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Not enough eligible data points to estimate a dimension.
class InsufficientData : public std::runtime_error {
 public:
  InsufficientData(const std::string& what, std::size_t available)
      : std::runtime_error(what), available_(available) {}
  std::size_t available() const { return available_; }

 private:
  std::size_t available_;
};

}  // namespace tmfractal
