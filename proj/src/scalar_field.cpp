#include "sglab/scalar_field.hpp"

#include <cmath>
#include <limits>

namespace sglab {

namespace {

const double kGradBase = std::cbrt(std::numeric_limits<double>::epsilon());
const double kHessBase = std::pow(std::numeric_limits<double>::epsilon(), 0.25);

double checked(double v, const char* where) {
    if (!std::isfinite(v))
        throw NumericError(std::string(where) + ": non-finite sample");
    return v;
}

Vec broadcast_params(const std::string& name, int dim,
                     const std::vector<double>& params) {
    if (params.size() == 1)
        return Vec::Constant(dim, params[0]);
    if (static_cast<int>(params.size()) == dim)
        return Eigen::Map<const Vec>(params.data(), dim);
    throw ConfigError("field '" + name + "': expected 1 or " +
                      std::to_string(dim) + " parameter(s), got " +
                      std::to_string(params.size()));
}

} // namespace

Vec fd_gradient(const std::function<double(const Vec&)>& g, const Vec& x,
                double h) {
    const double base = h > 0.0 ? h : kGradBase;
    const int d = static_cast<int>(x.size());
    Vec out(d);
    Vec xp = x, xm = x;
    for (int i = 0; i < d; ++i) {
        const double step = base * (1.0 + std::abs(x[i]));
        xp[i] = x[i] + step;
        xm[i] = x[i] - step;
        const double fp = checked(g(xp), "fd_gradient");
        const double fm = checked(g(xm), "fd_gradient");
        out[i] = (fp - fm) / (2.0 * step);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return out;
}

Mat fd_hessian(const std::function<double(const Vec&)>& g, const Vec& x,
               double h) {
    const double base = h > 0.0 ? h : kHessBase;
    const int d = static_cast<int>(x.size());
    Mat out(d, d);
    const double f0 = checked(g(x), "fd_hessian");
    Vec xt = x;
    for (int i = 0; i < d; ++i) {
        const double hi = base * (1.0 + std::abs(x[i]));
        xt[i] = x[i] + hi;
        const double fp = checked(g(xt), "fd_hessian");
        xt[i] = x[i] - hi;
        const double fm = checked(g(xt), "fd_hessian");
        xt[i] = x[i];
        out(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
        for (int j = i + 1; j < d; ++j) {
            const double hj = base * (1.0 + std::abs(x[j]));
            xt[i] = x[i] + hi;
            xt[j] = x[j] + hj;
            const double fpp = checked(g(xt), "fd_hessian");
            xt[j] = x[j] - hj;
            const double fpm = checked(g(xt), "fd_hessian");
            xt[i] = x[i] - hi;
            const double fmm = checked(g(xt), "fd_hessian");
            xt[j] = x[j] + hj;
            const double fmp = checked(g(xt), "fd_hessian");
            xt[i] = x[i];
            xt[j] = x[j];
            out(i, j) = out(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
        }
    }
    return out;
}

double ScalarField::operator()(const Vec& x) const {
    require_dim(dimension, x.size(), name.c_str());
    const double v = value(x);
    if (!std::isfinite(v))
        throw NumericError("field '" + name + "': non-finite value");
    if (positivity == Positivity::strictly_positive && v <= 0.0)
        throw NumericError("field '" + name +
                           "': positivity violated (value " +
                           std::to_string(v) + ")");
    return v;
}

Vec ScalarField::grad(const Vec& x) const {
    require_dim(dimension, x.size(), name.c_str());
    if (gradient) return gradient(x);
    return fd_gradient([this](const Vec& y) { return (*this)(y); }, x);
}

Mat ScalarField::hess(const Vec& x) const {
    require_dim(dimension, x.size(), name.c_str());
    if (hessian) return hessian(x);
    return fd_hessian([this](const Vec& y) { return (*this)(y); }, x);
}

ScalarField make_builtin_field(const std::string& name, int dim,
                               const std::vector<double>& params) {
    if (dim < 1)
        throw ConfigError("field dimension must be >= 1");
    ScalarField f;
    f.dimension = dim;
    f.name = name;
    f.params = params;
    if (name == "linear") {
        const Vec c = broadcast_params(name, dim, params);
        f.value = [c](const Vec& x) { return c.dot(x); };
        f.gradient = [c](const Vec&) { return c; };
        f.hessian = [dim](const Vec&) { return Mat(Mat::Zero(dim, dim)); };
        return f;
    }
    if (name == "quadratic") {
        if (!params.empty())
            throw ConfigError("field 'quadratic' takes no parameters");
        f.value = [](const Vec& x) { return x.squaredNorm(); };
        f.gradient = [](const Vec& x) { return Vec(2.0 * x); };
        f.hessian = [dim](const Vec&) {
            return Mat(2.0 * Mat::Identity(dim, dim));
        };
        return f;
    }
    if (name == "exponential") {
        const Vec c = broadcast_params(name, dim, params);
        f.positivity = Positivity::strictly_positive;
        f.value = [c](const Vec& x) { return std::exp(c.dot(x)); };
        f.gradient = [c](const Vec& x) { return Vec(std::exp(c.dot(x)) * c); };
        f.hessian = [c](const Vec& x) {
            return Mat(std::exp(c.dot(x)) * c * c.transpose());
        };
        return f;
    }
    if (name == "gauss-bump") {
        if (params.size() != 1 || !(params[0] > 0.0))
            throw ConfigError("field 'gauss-bump': expects one positive parameter");
        const double a = params[0];
        const int d = dim;
        f.positivity = Positivity::strictly_positive;
        f.value = [a](const Vec& x) { return std::exp(-a * x.squaredNorm()); };
        f.gradient = [a](const Vec& x) {
            return Vec(-2.0 * a * std::exp(-a * x.squaredNorm()) * x);
        };
        f.hessian = [a, d](const Vec& x) {
            const double v = std::exp(-a * x.squaredNorm());
            Mat h = -2.0 * a * v * Mat::Identity(d, d);
            h += 4.0 * a * a * v * x * x.transpose();
            return h;
        };
        return f;
    }
    if (name == "shifted-density") {
        const Vec m = broadcast_params(name, dim, params);
        const double half_m2 = 0.5 * m.squaredNorm();
        f.positivity = Positivity::strictly_positive;
        f.value = [m, half_m2](const Vec& x) {
            return std::exp(m.dot(x) - half_m2);
        };
        f.gradient = [m, half_m2](const Vec& x) {
            return Vec(std::exp(m.dot(x) - half_m2) * m);
        };
        f.hessian = [m, half_m2](const Vec& x) {
            return Mat(std::exp(m.dot(x) - half_m2) * m * m.transpose());
        };
        return f;
    }
    if (name == "constant") {
        if (params.size() != 1)
            throw ConfigError("field 'constant': expects one parameter");
        const double k = params[0];
        if (k > 0.0) f.positivity = Positivity::strictly_positive;
        f.value = [k](const Vec&) { return k; };
        f.gradient = [dim](const Vec&) { return Vec(Vec::Zero(dim)); };
        f.hessian = [dim](const Vec&) { return Mat(Mat::Zero(dim, dim)); };
        return f;
    }
    throw ConfigError("unknown field '" + name + "'");
}

ScalarField affine_combination(double a, const ScalarField& f, double b,
                               const ScalarField& g) {
    if (f.dimension != g.dimension)
        throw ConfigError("affine_combination: dimension mismatch");
    ScalarField out;
    out.dimension = f.dimension;
    out.name = std::to_string(a) + "*" + f.name + " + " + std::to_string(b) +
               "*" + g.name;
    if (a >= 0.0 && b >= 0.0 && a + b > 0.0 && f.strictly_positive() &&
        g.strictly_positive())
        out.positivity = Positivity::strictly_positive;
    out.value = [a, f, b, g](const Vec& x) { return a * f(x) + b * g(x); };
    out.gradient = [a, f, b, g](const Vec& x) {
        return Vec(a * f.grad(x) + b * g.grad(x));
    };
    out.hessian = [a, f, b, g](const Vec& x) {
        return Mat(a * f.hess(x) + b * g.hess(x));
    };
    return out;
}

ScalarField scale_field(double a, const ScalarField& f) {
    ScalarField out;
    out.dimension = f.dimension;
    out.name = std::to_string(a) + "*" + f.name;
    if (a > 0.0 && f.strictly_positive())
        out.positivity = Positivity::strictly_positive;
    out.value = [a, f](const Vec& x) { return a * f(x); };
    out.gradient = [a, f](const Vec& x) { return Vec(a * f.grad(x)); };
    out.hessian = [a, f](const Vec& x) { return Mat(a * f.hess(x)); };
    return out;
}

ScalarField shift_field(const ScalarField& f, double c) {
    ScalarField out;
    out.dimension = f.dimension;
    out.name = f.name + " + " + std::to_string(c);
    if (c >= 0.0 && f.strictly_positive())
        out.positivity = Positivity::strictly_positive;
    out.value = [f, c](const Vec& x) { return f(x) + c; };
    out.gradient = [f](const Vec& x) { return f.grad(x); };
    out.hessian = [f](const Vec& x) { return f.hess(x); };
    return out;
}

ScalarField squared_field(const ScalarField& f) {
    ScalarField out;
    out.dimension = f.dimension;
    out.name = "(" + f.name + ")^2";
    if (f.strictly_positive()) out.positivity = Positivity::strictly_positive;
    out.value = [f](const Vec& x) {
        const double v = f(x);
        return v * v;
    };
    out.gradient = [f](const Vec& x) { return Vec(2.0 * f(x) * f.grad(x)); };
    out.hessian = [f](const Vec& x) {
        const Vec g = f.grad(x);
        return Mat(2.0 * (g * g.transpose() + f(x) * f.hess(x)));
    };
    return out;
}

ScalarField log_field_fd(const ScalarField& f) {
    ScalarField out;
    out.dimension = f.dimension;
    out.name = "log(" + f.name + ")";
    out.value = [f](const Vec& x) {
        const double v = f(x);
        if (!(v > 0.0))
            throw NumericError("log_field_fd: nonpositive argument");
        return std::log(v);
    };
    // No closed derivatives on purpose.
    return out;
}

ScalarField partial_derivative_field(const ScalarField& f, int i) {
    if (i < 0 || i >= f.dimension)
        throw ConfigError("partial_derivative_field: axis out of range");
    ScalarField out;
    out.dimension = f.dimension;
    out.name = "d" + std::to_string(i) + "(" + f.name + ")";
    out.value = [f, i](const Vec& x) { return f.grad(x)[i]; };
    if (f.has_closed_hessian())
        out.gradient = [f, i](const Vec& x) { return Vec(f.hess(x).row(i)); };
    return out;
}

} // namespace sglab
