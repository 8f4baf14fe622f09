#include "sglab/potential.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace sglab {

namespace {

Potential gaussian_potential(int dim) {
    Potential p;
    p.dimension = dim;
    p.name = "gaussian";
    p.value = [dim](const Vec& x) {
        require_dim(dim, x.size(), "gaussian potential");
        return 0.5 * x.squaredNorm();
    };
    p.gradient = [dim](const Vec& x) {
        require_dim(dim, x.size(), "gaussian potential");
        return Vec(x);
    };
    p.hessian = [dim](const Vec& x) {
        require_dim(dim, x.size(), "gaussian potential");
        return Mat(Mat::Identity(dim, dim));
    };
    return p;
}

Potential scaled_gaussian_potential(int dim, double rho) {
    if (!(rho > 0.0))
        throw ConfigError("scaled-gaussian: rho must be positive");
    Potential p;
    p.dimension = dim;
    p.name = "scaled-gaussian";
    p.params = {rho};
    p.value = [dim, rho](const Vec& x) {
        require_dim(dim, x.size(), "scaled-gaussian potential");
        return 0.5 * rho * x.squaredNorm();
    };
    p.gradient = [dim, rho](const Vec& x) {
        require_dim(dim, x.size(), "scaled-gaussian potential");
        return Vec(rho * x);
    };
    p.hessian = [dim, rho](const Vec& x) {
        require_dim(dim, x.size(), "scaled-gaussian potential");
        return Mat(rho * Mat::Identity(dim, dim));
    };
    return p;
}

Potential quartic_potential(int dim, double eps) {
    if (eps < 0.0)
        throw ConfigError("gaussian-plus-quartic: eps must be nonnegative");
    Potential p;
    p.dimension = dim;
    p.name = "gaussian-plus-quartic";
    p.params = {eps};
    p.value = [dim, eps](const Vec& x) {
        require_dim(dim, x.size(), "gaussian-plus-quartic potential");
        double r2 = x.squaredNorm();
        return 0.5 * r2 + eps * r2 * r2;
    };
    p.gradient = [dim, eps](const Vec& x) {
        require_dim(dim, x.size(), "gaussian-plus-quartic potential");
        return Vec((1.0 + 4.0 * eps * x.squaredNorm()) * x);
    };
    p.hessian = [dim, eps](const Vec& x) {
        require_dim(dim, x.size(), "gaussian-plus-quartic potential");
        Mat h = (1.0 + 4.0 * eps * x.squaredNorm()) * Mat::Identity(dim, dim);
        h += 8.0 * eps * x * x.transpose();
        return h;
    };
    return p;
}

Potential double_well_potential(int dim) {
    if (dim != 1)
        throw ConfigError("double-well: only defined in dimension 1");
    Potential p;
    p.dimension = 1;
    p.name = "double-well";
    p.value = [](const Vec& x) {
        require_dim(1, x.size(), "double-well potential");
        double s = x[0] * x[0] - 1.0;
        return 0.25 * s * s;
    };
    p.gradient = [](const Vec& x) {
        require_dim(1, x.size(), "double-well potential");
        Vec g(1);
        g[0] = x[0] * x[0] * x[0] - x[0];
        return g;
    };
    p.hessian = [](const Vec& x) {
        require_dim(1, x.size(), "double-well potential");
        Mat h(1, 1);
        h(0, 0) = 3.0 * x[0] * x[0] - 1.0;
        return h;
    };
    return p;
}

Potential zero_potential(int dim) {
    Potential p;
    p.dimension = dim;
    p.name = "zero";
    p.normalizable = false;
    p.value = [dim](const Vec& x) {
        require_dim(dim, x.size(), "zero potential");
        return 0.0;
    };
    p.gradient = [dim](const Vec& x) {
        require_dim(dim, x.size(), "zero potential");
        return Vec(Vec::Zero(dim));
    };
    p.hessian = [dim](const Vec& x) {
        require_dim(dim, x.size(), "zero potential");
        return Mat(Mat::Zero(dim, dim));
    };
    return p;
}

} // namespace

Potential make_builtin_potential(const std::string& name, int dim,
                                 const std::vector<double>& params) {
    if (dim < 1)
        throw ConfigError("potential dimension must be >= 1");
    auto want = [&](std::size_t n) {
        if (params.size() != n)
            throw ConfigError("potential '" + name + "': expected " +
                              std::to_string(n) + " parameter(s), got " +
                              std::to_string(params.size()));
    };
    if (name == "gaussian") {
        want(0);
        return gaussian_potential(dim);
    }
    if (name == "scaled-gaussian") {
        want(1);
        return scaled_gaussian_potential(dim, params[0]);
    }
    if (name == "gaussian-plus-quartic") {
        want(1);
        return quartic_potential(dim, params[0]);
    }
    if (name == "double-well") {
        want(0);
        return double_well_potential(dim);
    }
    if (name == "zero") {
        want(0);
        return zero_potential(dim);
    }
    throw ConfigError("unknown potential '" + name + "'");
}

double min_curvature(const Potential& p, const Vec& lo, const Vec& hi,
                     int points_per_axis, Vec* argmin) {
    const int d = p.dimension;
    require_dim(d, lo.size(), "min_curvature box");
    require_dim(d, hi.size(), "min_curvature box");
    if (points_per_axis < 2)
        throw ConfigError("min_curvature: points_per_axis must be >= 2");
    for (int i = 0; i < d; ++i)
        if (!(lo[i] <= hi[i]))
            throw ConfigError("min_curvature: box has lo > hi");

    double total = std::pow(static_cast<double>(points_per_axis), d);
    if (total > 2e7)
        throw ConfigError("min_curvature: grid too large");

    std::vector<int> idx(d, 0);
    Vec x(d);
    double best = std::numeric_limits<double>::infinity();
    Vec best_x = lo;
    Eigen::SelfAdjointEigenSolver<Mat> solver;
    for (;;) {
        for (int i = 0; i < d; ++i)
            x[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / (points_per_axis - 1);
        double lam;
        if (d == 1) {
            lam = p.hessian(x)(0, 0);
        } else {
            solver.compute(p.hessian(x), Eigen::EigenvaluesOnly);
            lam = solver.eigenvalues().minCoeff();
        }
        if (lam < best) {
            best = lam;
            best_x = x;
        }
        int i = 0;
        while (i < d && ++idx[i] == points_per_axis) idx[i++] = 0;
        if (i == d) break;
    }
    if (argmin) *argmin = best_x;
    return best;
}

double min_curvature(const Potential& p, double lo, double hi,
                     int points_per_axis, Vec* argmin) {
    return min_curvature(p, Vec(Vec::Constant(p.dimension, lo)),
                         Vec(Vec::Constant(p.dimension, hi)), points_per_axis,
                         argmin);
}

} // namespace sglab
