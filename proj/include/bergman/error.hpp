#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Bad input: violated precondition, malformed config, too few fit points.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that ran but produced an untrustworthy result
/// (Cholesky breakdown, ill-conditioned Gram, differentiation residual).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated operator matrix leaks too much mass beyond L_max.
class InvalidRunError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace bergman
