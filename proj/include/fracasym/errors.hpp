#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracasym {

/// Parameter outside the mathematical domain of an operation (Γ at a pole,
/// fractional order out of range, violated preconditions on exponents).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A sampled membership test for a function class (Φ, M) failed.
class class_violation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A theorem-level hypothesis (integrability, divergence, order condition)
/// could not be established, so the corresponding bound does not apply.
class hypothesis_violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Marching solver could not complete a step.
class step_failure : public std::runtime_error {
 public:
  step_failure(std::size_t node, const std::string& what)
      : std::runtime_error("step failure at node " + std::to_string(node) + ": " + what),
        node_(node) {}

  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

}  // namespace fracasym
