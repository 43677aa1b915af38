#pragma once

#include <stdexcept>
#include <string>

namespace typcell {

/// Invalid model or experiment parameters (alpha <= d, negative density, ...).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not meet its tolerance contract.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A simulation run had to be abandoned (too many discarded realizations,
/// not enough conditioning samples).
class SimulationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace typcell
