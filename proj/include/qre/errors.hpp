#pragma once

#include <stdexcept>
#include <string>

namespace qre {

// Malformed or incomplete scenario description. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested environment cannot be synthesized (negative jet discriminant,
// vanishing bath magnitude, ...). Maps to CLI exit code 3.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical guard tripped during propagation. Maps to CLI exit code 4.
class GuardTrip : public std::runtime_error {
 public:
  GuardTrip(const std::string& what, long step, double time)
      : std::runtime_error(what), step_(step), time_(time) {}

  long step() const { return step_; }
  double time() const { return time_; }

 private:
  long step_;
  double time_;
};

}  // namespace qre
