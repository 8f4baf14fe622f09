#pragma once

#include "sglab/potential.hpp"
#include "sglab/quadrature.hpp"
#include "sglab/scalar_field.hpp"
#include "sglab/trace.hpp"
#include "sglab/types.hpp"

#include <cstdint>
#include <vector>

namespace sglab {

// Exact Gaussian-semigroup value at (t, x): the average of
// f(e^{-t} x + sqrt(1 - e^{-2t}) y) over y ~ N(0, I), by quadrature.
// t = 0 short-circuits to f(x).
double mehler_apply(const ScalarField& f, double t, const Vec& x,
                    const QuadratureGrid& grid);

// The evolved function as a field of its own.  Derivatives use the
// commutation rules (gradient picks up e^{-t}, Hessian e^{-2t}, both as
// averages of f's derivatives over the same grid), so they are as accurate
// as the quadrature itself.  Positivity of f is inherited.
ScalarField mehler_field(const ScalarField& f, double t, int order = 0);

// L f(x) = trace Hess f(x) - grad V(x) . grad f(x).
double generator_apply(const Potential& p, const ScalarField& f, const Vec& x);

// x -> L f(x) as a field (value closed-form, derivatives by fallback).
ScalarField generator_field(const Potential& p, const ScalarField& f);

enum class SdeScheme {
    euler,    // Euler-Maruyama on dX = -grad V dt + sqrt(2) dW
    exact_ou, // exact transition; gaussian / scaled-gaussian only
};

struct SdeOptions {
    int paths = 10000;
    double step = 1.0e-3;
    std::uint64_t seed = 1;
    SdeScheme scheme = SdeScheme::euler;
};

struct SdeEstimate {
    double mean = 0.0;
    double se = 0.0;
    int paths = 0;
    double t = 0.0;
};

// Monte-Carlo E[f(X_t) | X_0 = x0]; deterministic in (seed, path index).
SdeEstimate sde_evolve(const Potential& p, const ScalarField& f, double t,
                       const Vec& x0, const SdeOptions& opt);

enum class EvolveMethod { mehler, sde };
enum class EntropyMode { auto_detect, required, off };

struct EvolveOptions {
    EvolveMethod method = EvolveMethod::mehler;
    int order = 0;   // quadrature order (mehler and functional track)
    SdeOptions sde{};
    EntropyMode entropy = EntropyMode::auto_detect;
    bool functional_track = true;
};

// Evaluates the evolution over a strictly increasing time list starting at
// 0, recording values on the evaluation set and the variance / entropy /
// Fisher track of the evolved field under gamma.  The mehler method
// requires the gaussian potential.  With the sde method the track is
// estimated from path bundles started at the quadrature nodes (variance
// first-order debiased); values carry standard errors.
EvolutionTrace evolve_trace(const Potential& p, const ScalarField& f,
                            const std::vector<double>& times,
                            const std::vector<Vec>& evaluation_points,
                            const EvolveOptions& opt = {});

} // namespace sglab
