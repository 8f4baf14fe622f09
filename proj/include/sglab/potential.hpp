#pragma once

#include "sglab/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sglab {

// Confining potential V on R^d.  The associated probability measure has
// density proportional to exp(-V); V == 0 is allowed as the flat case
// (plain Laplacian, no invariant probability measure) and is flagged by
// normalizable == false so measure-dependent operations can reject it.
struct Potential {
    int dimension = 0;
    std::string name;
    std::vector<double> params;
    bool normalizable = true;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    std::function<Mat(const Vec&)> hessian;

    double operator()(const Vec& x) const { return value(x); }
    Vec grad(const Vec& x) const { return gradient(x); }
    Mat hess(const Vec& x) const { return hessian(x); }
};

// Catalog: "gaussian", "scaled-gaussian" (params = {rho}, rho > 0),
// "gaussian-plus-quartic" (params = {eps}, eps >= 0), "double-well"
// (1-D only), "zero".  Unknown names or bad parameters raise ConfigError.
Potential make_builtin_potential(const std::string& name, int dim,
                                 const std::vector<double>& params = {});

// Smallest eigenvalue of Hess V over a tensor grid on the box [lo, hi],
// points_per_axis nodes per axis (>= 1).  argmin, if given, receives the
// grid point attaining the minimum.
double min_curvature(const Potential& p, const Vec& lo, const Vec& hi,
                     int points_per_axis, Vec* argmin = nullptr);

// Convenience overload for the cube [lo, hi]^d.
double min_curvature(const Potential& p, double lo, double hi,
                     int points_per_axis, Vec* argmin = nullptr);

} // namespace sglab
