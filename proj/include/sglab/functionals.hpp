#pragma once

#include "sglab/empirical.hpp"
#include "sglab/measure.hpp"
#include "sglab/potential.hpp"
#include "sglab/scalar_field.hpp"
#include "sglab/trace.hpp"
#include "sglab/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sglab {

// Var(f) = E f^2 - (E f)^2.
double variance(const Measure& m, const ScalarField& f);
// Ent(f) = E f log f - E f log E f; self-normalized, so f need not
// integrate to 1.  Requires f > 0 at every evaluated point.
double entropy(const Measure& m, const ScalarField& f);
// E |grad f|^2.
double dirichlet(const Measure& m, const ScalarField& f);
// E |grad f|^2 / f, for strictly positive f.
double fisher(const Measure& m, const ScalarField& f);

// Integration backend selector for the verify_* operations.
struct Backend {
    enum class Kind { quadrature, samples };
    Kind kind = Kind::quadrature;
    int order = 0; // 0 -> per-dimension default
    int count = 10000;
    std::uint64_t seed = 1;
    LangevinOptions langevin{};
};

// Measure of the potential's invariant law under the chosen backend.
Measure make_measure(const Potential& p, const Backend& b);

struct InequalityReport {
    std::string kind;
    double lhs = 0.0;
    double rhs = 0.0;
    double constant_used = 0.0;
    double slack = 0.0; // rhs - lhs
    double tolerance = 0.0;
    bool holds = false;
    nlohmann::json inputs;

    nlohmann::json to_json() const;
    // Header line plus one data row: kind,lhs,rhs,constant,slack,verdict.
    std::string to_csv() const;
};

// Var(f) <= (1/rho) E|grad f|^2 under the invariant measure of p.
// tolerance < 0 selects the default: 1e-8 for quadrature backends, 3
// combined standard errors for sampling backends.
InequalityReport verify_poincare(const Potential& p, double rho,
                                 const ScalarField& f, const Backend& b = {},
                                 double tolerance = -1.0);

// Ent(f) <= (1/(2 rho)) E|grad f|^2/f under the invariant measure of p.
InequalityReport verify_lsi(const Potential& p, double rho,
                            const ScalarField& f, const Backend& b = {},
                            double tolerance = -1.0);

enum class TrackedFunctional { variance, entropy };

struct DecayFit {
    double rate = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Least-squares slope of log(functional) against t over the whole trace.
// Needs >= 3 times; a zero/negative/NaN functional value is an error that
// names the offending time.
DecayFit fit_decay_rate(const EvolutionTrace& tr, TrackedFunctional which);

struct DerivativeCheck {
    double lhs = 0.0; // centered d/dt of the entropy of the evolved field
    double rhs = 0.0; // minus the Fisher information of the evolved field
    double residual = 0.0;
    double t = 0.0;
    double h = 0.0;
};

// Checks d/dt Ent(P_t f) = -Fisher(P_t f) by central difference at t.
// Gaussian potential only (the evolution is evaluated in closed form).
DerivativeCheck entropy_derivative_check(const Potential& p,
                                         const ScalarField& f, double t,
                                         double h = 1.0e-3, int order = 0);

} // namespace sglab
