#pragma once

#include <stdexcept>
#include <string>

namespace sprt {

// A caller supplied parameters that violate a documented invariant.
// The message names the violated invariant.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An increment source ran dry before the SPRT reached a verdict or its horizon.
class ExhaustedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sprt
