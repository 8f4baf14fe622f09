#pragma once

#include "sglab/scalar_field.hpp"
#include "sglab/types.hpp"

#include <functional>
#include <memory>

namespace sglab {

// Cubic-spline table of a smooth function on a uniform 1-D grid.
// Evaluations outside [lo, hi] raise ConfigError; widen the table instead
// of relying on extrapolation.
class Tabulated1D {
public:
    Tabulated1D(const std::function<double(double)>& f, double lo, double hi,
                int count);

    double operator()(double x) const;
    double prime(double x) const;
    double double_prime(double x) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    double lo_ = 0.0, hi_ = 0.0;
};

// 1-D field backed by a spline table of f; derivatives come from the
// spline.  count >= 8 sample points.
ScalarField tabulate_field_1d(const ScalarField& f, double lo, double hi,
                              int count);

} // namespace sglab
