#pragma once

#include "sglab/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sglab {

// Central finite differences with per-coordinate steps h * (1 + |x_i|).
// h <= 0 selects the default base step: cbrt(machine eps) for gradients,
// eps^{1/4} for Hessians (value-based second differences lose half the
// digits, so the wider step is needed).  Non-finite samples raise
// NumericError.
Vec fd_gradient(const std::function<double(const Vec&)>& g, const Vec& x,
                double h = 0.0);
Mat fd_hessian(const std::function<double(const Vec&)>& g, const Vec& x,
               double h = 0.0);

enum class Positivity { unrestricted, strictly_positive };

// Test function f : R^d -> R.  Closed-form gradient/Hessian are optional;
// grad()/hess() silently fall back to finite differences when absent.
// Fields declared strictly positive are checked at every evaluation and
// raise NumericError on violation.
struct ScalarField {
    int dimension = 0;
    std::string name;
    std::vector<double> params;
    Positivity positivity = Positivity::unrestricted;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    std::function<Mat(const Vec&)> hessian;

    double operator()(const Vec& x) const;
    Vec grad(const Vec& x) const;
    Mat hess(const Vec& x) const;
    bool strictly_positive() const {
        return positivity == Positivity::strictly_positive;
    }
    bool has_closed_gradient() const { return static_cast<bool>(gradient); }
    bool has_closed_hessian() const { return static_cast<bool>(hessian); }
};

// Catalog: "linear" (params = c, one value per axis or a single value
// broadcast), "quadratic", "exponential" (params = c as for linear),
// "gauss-bump" (params = {a}, a > 0), "shifted-density" (params = m as for
// linear), "constant" (params = {k}).  Unknown names raise ConfigError.
ScalarField make_builtin_field(const std::string& name, int dim,
                               const std::vector<double>& params = {});

// a*f + b*g, dimensions must agree.  Positivity is derived when the signs
// make it automatic (a, b >= 0, both operands strictly positive, a+b > 0).
ScalarField affine_combination(double a, const ScalarField& f, double b,
                               const ScalarField& g);
ScalarField scale_field(double a, const ScalarField& f);
ScalarField shift_field(const ScalarField& f, double c); // f + c

// f^2 with closed derivatives assembled from f's.
ScalarField squared_field(const ScalarField& f);

// log f with derivatives deliberately left to finite differences; used as
// an independent route when testing chain-rule identities.
ScalarField log_field_fd(const ScalarField& f);

// x -> d_i f(x) as a field of its own (closed gradient when f has a closed
// Hessian, finite differences beyond that).
ScalarField partial_derivative_field(const ScalarField& f, int i);

} // namespace sglab
