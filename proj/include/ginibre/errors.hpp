#pragma once

#include <stdexcept>
#include <string>

namespace ginibre {

// Invalid input: out-of-range arguments, poles, bad profiles.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Matrix shapes that do not chain or factor.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Inconsistent configuration, e.g. intersecting contours.
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Iteration or quadrature failed to converge.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ginibre
