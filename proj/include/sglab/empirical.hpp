#pragma once

#include "sglab/potential.hpp"
#include "sglab/rng.hpp"
#include "sglab/scalar_field.hpp"
#include "sglab/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sglab {

// Unadjusted Langevin sampler controls.  The defaults put one unit of
// diffusion time between kept samples (correlation e^{-2 rho} for a
// rho-convex potential), so kept samples are close to independent.
struct LangevinOptions {
    double step = 1.0e-3;
    int burn_in = 10000;
    int thinning = 1000;
};

struct EmpiricalMeasure {
    int dimension = 0;
    std::vector<Vec> points;
    std::uint64_t seed = 0;
    std::string source;

    int count() const { return static_cast<int>(points.size()); }
};

// Direct sampling of N(0, I_d) (resp. N(mean, I_d)).
EmpiricalMeasure sample_gaussian(int dim, int count, std::uint64_t seed);
EmpiricalMeasure sample_shifted_gaussian(const Vec& mean, int count,
                                         std::uint64_t seed);

// Unadjusted Langevin chain targeting exp(-V): one Euler step of the drift
// -grad V plus sqrt(2h) noise, started at the origin.  Burn-in steps are
// discarded, then every thinning-th state is kept.  Divergence raises
// NumericError.
EmpiricalMeasure sample_langevin(const Potential& p, int count,
                                 std::uint64_t seed,
                                 const LangevinOptions& opt = {});

// Invariant measure of the given potential: exact sampling for the Gaussian
// family, Langevin otherwise.  Rejects non-normalizable potentials.
EmpiricalMeasure sample_invariant(const Potential& p, int count,
                                  std::uint64_t seed,
                                  const LangevinOptions& opt = {});

// Potential of the reweighted measure f * exp(-V), i.e. V - log f.
// The density must be declared strictly positive.
Potential tilt_potential(const Potential& p, const ScalarField& density);

// Sampling from the normalized density f dmu.  Exact when mu is Gaussian
// and f is a "shifted-density" field; Langevin on the tilted potential
// otherwise.
EmpiricalMeasure sample_density(const Potential& p, const ScalarField& f,
                                int count, std::uint64_t seed,
                                const LangevinOptions& opt = {});

// CSV with header x1,...,xd and one point per row.
void write_points_csv(const EmpiricalMeasure& m, const std::string& path);
EmpiricalMeasure read_points_csv(const std::string& path);

} // namespace sglab
