#pragma once

#include <stdexcept>
#include <string>

namespace omega_sieve {

/// Argument outside an operation's domain (n = 0, non-squarefree d, delta outside (0,1), ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Query beyond a table limit, or an analytic bound used outside its stated range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A hypothesis of an invoked bound does not hold (s < 2k + 3, m * 1476 > 2^(K-2), ...).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A checked numeric claim failed. The message names the witness.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace omega_sieve
