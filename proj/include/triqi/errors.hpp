#pragma once

#include <stdexcept>
#include <string>

namespace triqi {

// Bad arguments: invalid mode index, zero cutoff, malformed config, ...
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The numbers did not work out: PSD violation, truncation leakage above
// tolerance, secular solve that failed to bracket, dense limit exceeded.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace triqi
