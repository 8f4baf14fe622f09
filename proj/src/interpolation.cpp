#include "sglab/interpolation.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <cmath>
#include <vector>

namespace sglab {

struct Tabulated1D::Impl {
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};

Tabulated1D::Tabulated1D(const std::function<double(double)>& f, double lo,
                         double hi, int count) {
    if (!(lo < hi)) throw ConfigError("Tabulated1D: need lo < hi");
    if (count < 8) throw ConfigError("Tabulated1D: need at least 8 points");
    std::vector<double> vals(count);
    const double h = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) {
        vals[i] = f(lo + h * i);
        if (!std::isfinite(vals[i]))
            throw NumericError("Tabulated1D: non-finite sample");
    }
    lo_ = lo;
    hi_ = hi;
    impl_ = std::make_shared<const Impl>(Impl{
        boost::math::interpolators::cardinal_cubic_b_spline<double>(
            vals.data(), vals.size(), lo, h)});
}

namespace {
void check_range(double x, double lo, double hi) {
    if (x < lo || x > hi)
        throw ConfigError("Tabulated1D: evaluation at " + std::to_string(x) +
                          " outside table range [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
}
} // namespace

double Tabulated1D::operator()(double x) const {
    check_range(x, lo_, hi_);
    return impl_->spline(x);
}

double Tabulated1D::prime(double x) const {
    check_range(x, lo_, hi_);
    return impl_->spline.prime(x);
}

double Tabulated1D::double_prime(double x) const {
    check_range(x, lo_, hi_);
    return impl_->spline.double_prime(x);
}

ScalarField tabulate_field_1d(const ScalarField& f, double lo, double hi,
                              int count) {
    if (f.dimension != 1)
        throw ConfigError("tabulate_field_1d: field must be 1-D");
    Vec arg(1);
    ScalarField src = f;
    Tabulated1D tab(
        [src, &arg](double x) mutable {
            arg[0] = x;
            return src(arg);
        },
        lo, hi, count);

    ScalarField out;
    out.dimension = 1;
    out.name = "tab(" + f.name + ")";
    out.value = [tab](const Vec& x) { return tab(x[0]); };
    out.gradient = [tab](const Vec& x) {
        Vec g(1);
        g[0] = tab.prime(x[0]);
        return g;
    };
    out.hessian = [tab](const Vec& x) {
        Mat h(1, 1);
        h(0, 0) = tab.double_prime(x[0]);
        return h;
    };
    return out;
}

} // namespace sglab
