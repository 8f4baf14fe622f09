#include "sglab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sglab {

Measure Measure::gamma(const QuadratureGrid& grid) {
    Measure m;
    m.dimension_ = grid.dimension;
    m.points_ = grid.nodes;
    m.weights_ = grid.weights;
    m.description_ = "quadrature[gamma, dim=" + std::to_string(grid.dimension) +
                     ", order=" + std::to_string(grid.order) + "]";
    return m;
}

Measure Measure::mu(const Potential& p, const QuadratureGrid& grid) {
    if (!p.normalizable)
        throw ConfigError("potential '" + p.name +
                          "' has no invariant probability measure");
    if (p.dimension != grid.dimension)
        throw ConfigError("Measure::mu: dimension mismatch");
    if (p.name == "gaussian") {
        Measure m = gamma(grid);
        m.description_ = "quadrature[mu(gaussian), dim=" +
                         std::to_string(grid.dimension) +
                         ", order=" + std::to_string(grid.order) + "]";
        return m;
    }
    const std::size_t n = grid.nodes.size();
    std::vector<double> logf(n);
    double lmax = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec& x = grid.nodes[k];
        logf[k] = 0.5 * x.squaredNorm() - p.value(x);
        if (!std::isfinite(logf[k]))
            throw NumericError("Measure::mu: non-finite potential value");
        lmax = std::max(lmax, logf[k]);
    }
    Measure m;
    m.dimension_ = grid.dimension;
    m.points_ = grid.nodes;
    m.weights_.resize(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        m.weights_[k] = grid.weights[k] * std::exp(logf[k] - lmax);
        total += m.weights_[k];
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw NumericError("Measure::mu: reweighting lost all mass");
    for (double& w : m.weights_) w /= total;
    m.description_ = "quadrature[mu(" + p.name + "), dim=" +
                     std::to_string(grid.dimension) +
                     ", order=" + std::to_string(grid.order) + "]";
    return m;
}

Measure Measure::samples(const EmpiricalMeasure& pts) {
    if (pts.points.empty()) throw ConfigError("Measure::samples: no points");
    Measure m;
    m.dimension_ = pts.dimension;
    m.sample_based_ = true;
    m.points_ = pts.points;
    m.weights_.assign(pts.points.size(), 1.0 / pts.points.size());
    m.description_ = "samples[" + pts.source +
                     ", n=" + std::to_string(pts.points.size()) +
                     ", seed=" + std::to_string(pts.seed) + "]";
    return m;
}

double Measure::expect(const std::function<double(const Vec&)>& g) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < points_.size(); ++k) {
        const double v = g(points_[k]);
        if (!std::isfinite(v))
            throw NumericError("expectation: non-finite integrand at point " +
                               std::to_string(k));
        acc += weights_[k] * v;
    }
    return acc;
}

Measure::MeanSe Measure::expect_se(
    const std::function<double(const Vec&)>& g) const {
    if (!sample_based_) return {expect(g), 0.0};
    const std::size_t n = points_.size();
    double mean = 0.0;
    std::vector<double> vals(n);
    for (std::size_t k = 0; k < n; ++k) {
        vals[k] = g(points_[k]);
        mean += vals[k];
    }
    mean /= n;
    if (n < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

} // namespace sglab
