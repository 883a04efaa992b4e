#pragma once

#include <stdexcept>
#include <string>

namespace popergm {

/// Invalid run configuration (CLI exit status 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input data (CLI exit status 3).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown such as a covariance that is not positive definite
/// (CLI exit status 4).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace popergm
