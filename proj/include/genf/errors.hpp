#pragma once

#include <stdexcept>
#include <string>

namespace genf {

// Invalid argument or out-of-domain input (bad weights, negative dof, ...).
class DomainError : public std::invalid_argument {
public:
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A series or iteration hit its term/iteration cap before meeting tolerance.
class ConvergenceError : public std::runtime_error {
public:
  explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace genf
