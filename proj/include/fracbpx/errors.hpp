#pragma once

#include <stdexcept>
#include <string>

namespace fracbpx {

// Raised when a mesh violates conformity, orientation or labeling rules.
class InvalidMeshError : public std::runtime_error {
 public:
  explicit InvalidMeshError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a request exceeds the configured memory/DOF budget.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an operator expected to be SPD is not.
class InvalidMatrixError : public std::runtime_error {
 public:
  explicit InvalidMatrixError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracbpx
