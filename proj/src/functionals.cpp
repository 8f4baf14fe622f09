#include "sglab/functionals.hpp"

#include "sglab/semigroup.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace sglab {

namespace {

void check_positive_field(const ScalarField& f, const char* op) {
    if (!f.strictly_positive())
        throw ConfigError(std::string(op) +
                          ": field '" + f.name +
                          "' must be declared strictly positive");
}

nlohmann::json field_json(const ScalarField& f) {
    return {{"name", f.name}, {"params", f.params}};
}

nlohmann::json potential_json(const Potential& p) {
    return {{"name", p.name},
            {"params", p.params},
            {"dimension", p.dimension}};
}

// Standard error of the plug-in variance estimator via its influence
// function (f - Ef)^2 - Var.
double variance_se(const Measure& m, const ScalarField& f, double mean,
                   double var) {
    if (!m.sample_based()) return 0.0;
    ScalarField g = f;
    auto infl = [g, mean, var](const Vec& x) {
        const double d = g(x) - mean;
        return d * d;
    };
    const std::size_t n = m.points().size();
    double ss = 0.0;
    for (const Vec& x : m.points()) {
        const double v = infl(x) - var;
        ss += v * v;
    }
    return std::sqrt(ss / (n - 1.0) / n);
}

// Influence function of Ent = E f log f - Ef log Ef:
// (f log f - A) - (1 + log B)(f - B) with A = E f log f, B = E f.
double entropy_se(const Measure& m, const ScalarField& f, double a, double b) {
    if (!m.sample_based()) return 0.0;
    const std::size_t n = m.points().size();
    const double c = 1.0 + std::log(b);
    double ss = 0.0;
    for (const Vec& x : m.points()) {
        const double v = f(x);
        const double infl = (v * std::log(v) - a) - c * (v - b);
        ss += infl * infl;
    }
    return std::sqrt(ss / (n - 1.0) / n);
}

} // namespace

double variance(const Measure& m, const ScalarField& f) {
    if (m.dimension() != f.dimension)
        throw ConfigError("variance: dimension mismatch");
    ScalarField g = f;
    const double mean = m.expect([&g](const Vec& x) { return g(x); });
    return m.expect([&g, mean](const Vec& x) {
        const double d = g(x) - mean;
        return d * d;
    });
}

double entropy(const Measure& m, const ScalarField& f) {
    if (m.dimension() != f.dimension)
        throw ConfigError("entropy: dimension mismatch");
    ScalarField g = f;
    const double mean = m.expect([&g](const Vec& x) {
        const double v = g(x);
        if (!(v > 0.0))
            throw NumericError("entropy: field '" + g.name +
                               "' is not positive at an integration point");
        return v;
    });
    if (!(mean > 0.0)) throw NumericError("entropy: mean is not positive");
    const double flogf = m.expect([&g](const Vec& x) {
        const double v = g(x);
        if (!(v > 0.0))
            throw NumericError("entropy: field '" + g.name +
                               "' is not positive at an integration point");
        return v * std::log(v);
    });
    return flogf - mean * std::log(mean);
}

double dirichlet(const Measure& m, const ScalarField& f) {
    if (m.dimension() != f.dimension)
        throw ConfigError("dirichlet: dimension mismatch");
    ScalarField g = f;
    return m.expect([&g](const Vec& x) { return g.grad(x).squaredNorm(); });
}

double fisher(const Measure& m, const ScalarField& f) {
    if (m.dimension() != f.dimension)
        throw ConfigError("fisher: dimension mismatch");
    ScalarField g = f;
    return m.expect([&g](const Vec& x) {
        const double v = g(x);
        if (!(v > 0.0))
            throw NumericError("fisher: field '" + g.name +
                               "' is not positive at an integration point");
        return g.grad(x).squaredNorm() / v;
    });
}

Measure make_measure(const Potential& p, const Backend& b) {
    if (b.kind == Backend::Kind::quadrature)
        return Measure::mu(p, gauss_hermite_grid(p.dimension, b.order));
    return Measure::samples(sample_invariant(p, b.count, b.seed, b.langevin));
}

nlohmann::json InequalityReport::to_json() const {
    return {{"kind", kind},
            {"lhs", lhs},
            {"rhs", rhs},
            {"constant_used", constant_used},
            {"slack", slack},
            {"tolerance", tolerance},
            {"verdict", holds ? "holds" : "violated"},
            {"inputs", inputs}};
}

std::string InequalityReport::to_csv() const {
    char row[256];
    std::snprintf(row, sizeof row, "%s,%.17g,%.17g,%.17g,%.17g,%s\n",
                  kind.c_str(), lhs, rhs, constant_used, slack,
                  holds ? "holds" : "violated");
    return std::string("kind,lhs,rhs,constant,slack,verdict\n") + row;
}

InequalityReport verify_poincare(const Potential& p, double rho,
                                 const ScalarField& f, const Backend& b,
                                 double tolerance) {
    if (!(rho > 0.0)) throw ConfigError("verify_poincare: rho must be > 0");
    const Measure m = make_measure(p, b);
    InequalityReport rep;
    rep.kind = "poincare";
    rep.constant_used = 1.0 / rho;
    ScalarField g = f;
    const double mean = m.expect([&g](const Vec& x) { return g(x); });
    rep.lhs = m.expect([&g, mean](const Vec& x) {
        const double d = g(x) - mean;
        return d * d;
    });
    rep.rhs = rep.constant_used * dirichlet(m, f);
    rep.slack = rep.rhs - rep.lhs;
    if (tolerance >= 0.0) {
        rep.tolerance = tolerance;
    } else if (!m.sample_based()) {
        rep.tolerance = 1.0e-8;
    } else {
        const double se_lhs = variance_se(m, f, mean, rep.lhs);
        ScalarField h = f;
        const auto dir = m.expect_se(
            [&h](const Vec& x) { return h.grad(x).squaredNorm(); });
        const double se_rhs = rep.constant_used * dir.se;
        rep.tolerance = 3.0 * std::hypot(se_lhs, se_rhs);
    }
    rep.holds = rep.slack >= -rep.tolerance;
    rep.inputs = {{"potential", potential_json(p)},
                  {"field", field_json(f)},
                  {"rho", rho},
                  {"measure", m.description()}};
    return rep;
}

InequalityReport verify_lsi(const Potential& p, double rho,
                            const ScalarField& f, const Backend& b,
                            double tolerance) {
    if (!(rho > 0.0)) throw ConfigError("verify_lsi: rho must be > 0");
    check_positive_field(f, "verify_lsi");
    const Measure m = make_measure(p, b);
    InequalityReport rep;
    rep.kind = "lsi";
    rep.constant_used = 1.0 / (2.0 * rho);
    ScalarField g = f;
    const double mean = m.expect([&g](const Vec& x) { return g(x); });
    const double flogf = m.expect([&g](const Vec& x) {
        const double v = g(x);
        return v * std::log(v);
    });
    rep.lhs = flogf - mean * std::log(mean);
    rep.rhs = rep.constant_used * fisher(m, f);
    rep.slack = rep.rhs - rep.lhs;
    if (tolerance >= 0.0) {
        rep.tolerance = tolerance;
    } else if (!m.sample_based()) {
        rep.tolerance = 1.0e-8;
    } else {
        const double se_lhs = entropy_se(m, f, flogf, mean);
        ScalarField h = f;
        const auto fis = m.expect_se([&h](const Vec& x) {
            return h.grad(x).squaredNorm() / h(x);
        });
        const double se_rhs = rep.constant_used * fis.se;
        rep.tolerance = 3.0 * std::hypot(se_lhs, se_rhs);
    }
    rep.holds = rep.slack >= -rep.tolerance;
    rep.inputs = {{"potential", potential_json(p)},
                  {"field", field_json(f)},
                  {"rho", rho},
                  {"measure", m.description()}};
    return rep;
}

DecayFit fit_decay_rate(const EvolutionTrace& tr, TrackedFunctional which) {
    const std::vector<double>& vals =
        which == TrackedFunctional::variance ? tr.variance : tr.entropy;
    const char* label =
        which == TrackedFunctional::variance ? "variance" : "entropy";
    if (tr.times.size() < 3)
        throw ConfigError("fit_decay_rate: need at least 3 times");
    if (vals.size() != tr.times.size())
        throw ConfigError("fit_decay_rate: trace has no functional track");

    std::vector<double> logs(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!(vals[i] > 0.0) || !std::isfinite(vals[i]))
            throw NumericError(std::string("fit_decay_rate: ") + label +
                               " is not positive at t = " +
                               std::to_string(tr.times[i]));
        logs[i] = std::log(vals[i]);
    }
    const std::size_t n = logs.size();
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        st += tr.times[i];
        sy += logs[i];
    }
    const double tbar = st / n, ybar = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = tr.times[i] - tbar;
        const double dy = logs[i] - ybar;
        sxx += dt * dt;
        sxy += dt * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw ConfigError("fit_decay_rate: degenerate times");
    DecayFit fit;
    fit.rate = sxy / sxx;
    fit.intercept = ybar - fit.rate * tbar;
    if (syy <= 0.0) {
        fit.r_squared = 1.0;
    } else {
        double ssres = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = logs[i] - (fit.intercept + fit.rate * tr.times[i]);
            ssres += r * r;
        }
        fit.r_squared = 1.0 - ssres / syy;
    }
    return fit;
}

DerivativeCheck entropy_derivative_check(const Potential& p,
                                         const ScalarField& f, double t,
                                         double h, int order) {
    if (p.name != "gaussian")
        throw ConfigError(
            "entropy_derivative_check: closed-form evolution is available "
            "for the gaussian potential only");
    if (!(h > 0.0) || !(t >= h))
        throw ConfigError("entropy_derivative_check: need t >= h > 0");
    check_positive_field(f, "entropy_derivative_check");
    const Measure m =
        Measure::gamma(gauss_hermite_grid(f.dimension, order));
    const double ent_plus = entropy(m, mehler_field(f, t + h, order));
    const double ent_minus = entropy(m, mehler_field(f, t - h, order));
    DerivativeCheck out;
    out.t = t;
    out.h = h;
    out.lhs = (ent_plus - ent_minus) / (2.0 * h);
    out.rhs = -fisher(m, mehler_field(f, t, order));
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

} // namespace sglab
