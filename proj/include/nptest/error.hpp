#pragma once

#include <stdexcept>
#include <string>

namespace nptest {

/// Input outside the mathematical domain of an operation (non-finite values,
/// probabilities outside their admissible range, invalid test setups).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// theta1 == theta0. Kept separate so callers can tell the degenerate
/// hypothesis pair apart from ordinary bad input.
class degenerate_setup_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// Caller broke a structural precondition (sample/setup size mismatch,
/// zero replications, empty threshold list).
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace nptest
