#pragma once

#include <stdexcept>

namespace mabbias {

// Bad argument to an operation: index out of range, parameter outside its domain.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Experiment or instance configuration that cannot be executed as written.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A run reached a state the model assumes impossible (e.g. argmax over an unsampled arm).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Statistic requested on too few samples (sample variance of one value).
class UndefinedStatistic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exhaustive enumeration would exceed the configured table budget.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace mabbias
