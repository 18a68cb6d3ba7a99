#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccq {

/// Shape or length mismatch between operands.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A message addressed to or from a node outside the active subset.
class routing_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Node-local code reached state it does not own, or a phase ran outside
/// the node subset it was granted.
class isolation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class singular_matrix_error : public std::runtime_error {
 public:
  singular_matrix_error(const std::string& what, std::size_t index)
      : std::runtime_error(what), index_(index) {}
  /// Offending pivot or diagonal index, or npos when not applicable.
  [[nodiscard]] std::size_t index() const noexcept { return index_; }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t index_;
};

/// The field does not satisfy an algorithm's requirement (e.g. char <= n).
class unsupported_field_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Planner query outside the regime where a formula applies.
class regime_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A Monte Carlo procedure exhausted its retries without a verified answer.
class monte_carlo_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A graph operation needs a perfect matching the input does not have.
class no_perfect_matching_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ccq
