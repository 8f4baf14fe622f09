#pragma once

#include "sglab/empirical.hpp"
#include "sglab/potential.hpp"
#include "sglab/quadrature.hpp"
#include "sglab/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sglab {

// Uniform interface for expectations: Gauss-Hermite quadrature against the
// standard Gaussian, importance-reweighted quadrature against exp(-V)/Z,
// or a plain average over samples.  Reweighting multiplies each Gaussian
// node weight by exp(|x|^2/2 - V(x)) and renormalizes (computed with a
// max-shift so the exponentials cannot overflow).
class Measure {
public:
    static Measure gamma(const QuadratureGrid& grid);
    static Measure mu(const Potential& p, const QuadratureGrid& grid);
    static Measure samples(const EmpiricalMeasure& pts);

    double expect(const std::function<double(const Vec&)>& g) const;

    struct MeanSe {
        double mean = 0.0;
        double se = 0.0;
    };
    // Standard error is the sample one for sample backends, 0 for quadrature.
    MeanSe expect_se(const std::function<double(const Vec&)>& g) const;

    int dimension() const { return dimension_; }
    bool sample_based() const { return sample_based_; }
    int size() const { return static_cast<int>(points_.size()); }
    const std::vector<Vec>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::string& description() const { return description_; }

private:
    int dimension_ = 0;
    bool sample_based_ = false;
    std::vector<Vec> points_;
    std::vector<double> weights_;
    std::string description_;
};

} // namespace sglab
