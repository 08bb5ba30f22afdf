#pragma once

#include <stdexcept>
#include <string>

namespace dse {

// Non-finite value produced by a model evaluation or integration step.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Factorization or inversion of a matrix that is not (numerically) invertible.
class SingularityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration: bad parameter values, missing keys, inconsistent specs.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace dse
