#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace sglab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Bad user input: unknown names, inconsistent dimensions, out-of-range
// parameters.  The CLI maps this to exit status 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Runtime numerical failure: divergence, overflow, loss of positivity.
// The CLI maps this to exit status 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

inline void require_dim(int expected, Eigen::Index got, const char* where) {
    if (got != expected)
        throw ConfigError(std::string(where) + ": expected dimension " +
                          std::to_string(expected) + ", got " + std::to_string(got));
}

} // namespace sglab
