#pragma once

#include <stdexcept>
#include <string>

namespace trajeval {

/// Raised for contract violations and malformed inputs across the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trajeval
