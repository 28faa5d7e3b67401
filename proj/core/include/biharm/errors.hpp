#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace biharm {

/// Grid parameters outside the supported range (m < 4, n outside [1, kMaxDim]).
class SizingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A stencil or lookup touched a point that is not part of the lattice set it
/// was evaluated on, or an operation was called outside its precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller-supplied data failed validation (shape mismatch, bad option, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A quadrature integrand produced a non-finite value.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Post-hoc checks of a discrete construction (inverse trace, Ê) failed.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conjugate gradients did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}

  /// Relative residual after every iteration, starting with the initial one.
  const std::vector<double>& residual_history() const noexcept { return history_; }

  /// True when the last residual exceeds the best one seen by more than a
  /// factor 10, which points at loss of definiteness rather than slow decay.
  bool diverged() const noexcept;

 private:
  std::vector<double> history_;
};

inline bool ConvergenceError::diverged() const noexcept {
  if (history_.empty()) return false;
  double best = history_.front();
  for (double r : history_) best = r < best ? r : best;
  return history_.back() > 10.0 * best;
}

}  // namespace biharm
