#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ccpareto {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a point, direction or child expression has the wrong length.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an operation that requires a feasible anchor receives one outside X.
class InfeasiblePointError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline void require_dimension(Eigen::Index actual, int expected, const char *what)
{
    if (actual != expected) {
        throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) + ", got "
                             + std::to_string(actual));
    }
}

} // namespace ccpareto
