#pragma once

#include <stdexcept>

namespace obsim {

// Bad configuration (files, flags, incompatible options). CLI maps this to
// a distinct exit code from runtime failures.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace obsim
