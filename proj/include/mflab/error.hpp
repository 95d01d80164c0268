#pragma once

#include <stdexcept>
#include <string>

namespace mflab {

/// Raised when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a search or scan would exceed its configured work budget.
/// Carries the best candidate seen so far so callers can still report it.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double best_value = 0.0,
                 double best_score = 0.0)
      : std::runtime_error(what), best_value_(best_value), best_score_(best_score) {}

  double best_value() const noexcept { return best_value_; }
  double best_score() const noexcept { return best_score_; }

 private:
  double best_value_;
  double best_score_;
};

/// Raised for I/O and format problems (sieve cache, manifests).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

}  // namespace mflab
