#pragma once

#include <stdexcept>
#include <string>

namespace tocs {

// Invalid scenario or component configuration. The CLI maps this to exit 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric blow-up during a run. The CLI maps this to exit 3.
struct DivergenceError : std::runtime_error {
  long step;
  DivergenceError(const std::string& what, long step_at)
      : std::runtime_error(what), step(step_at) {}
};

}  // namespace tocs
