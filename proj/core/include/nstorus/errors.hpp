#pragma once

#include <stdexcept>
#include <string>

namespace nstorus {

// Bad user input: malformed configs, ids outside a truncation, inconsistent
// dimensions. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure: NaN/Inf state or the blow-up guard tripping during time
// integration. The CLI maps this to exit code 3.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(const std::string& what, long step, double time)
      : std::runtime_error(what), step(step), time(time) {}
  long step;
  double time;
};

}  // namespace nstorus
