#include "sglab/functionals.hpp"
#include "sglab/measure.hpp"
#include "sglab/potential.hpp"
#include "sglab/quadrature.hpp"
#include "sglab/scalar_field.hpp"
#include "sglab/semigroup.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace sglab;

namespace {
Vec pt(double x) {
    Vec v(1);
    v[0] = x;
    return v;
}

// (1 + eps*g)^2 with closed derivatives and declared positivity; used for
// the small-perturbation link between the entropy and variance forms.
ScalarField perturbation_squared(const ScalarField& g, double eps) {
    ScalarField out;
    out.dimension = g.dimension;
    out.name = "(1+eps*" + g.name + ")^2";
    out.positivity = Positivity::strictly_positive;
    out.value = [g, eps](const Vec& x) {
        const double u = 1.0 + eps * g(x);
        return u * u;
    };
    out.gradient = [g, eps](const Vec& x) {
        return Vec(2.0 * (1.0 + eps * g(x)) * eps * g.grad(x));
    };
    out.hessian = [g, eps](const Vec& x) {
        const Vec gr = g.grad(x);
        return Mat(2.0 * eps * eps * gr * gr.transpose() +
                   2.0 * (1.0 + eps * g(x)) * eps * g.hess(x));
    };
    return out;
}
} // namespace

TEST_CASE("functional values") {
    const Measure m = Measure::gamma(gauss_hermite_grid(1, 40));
    const ScalarField lin = make_builtin_field("linear", 1, {1.0});
    CHECK(variance(m, lin) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dirichlet(m, lin) == doctest::Approx(1.0).epsilon(1e-12));

    const ScalarField c = make_builtin_field("constant", 1, {3.0});
    CHECK(entropy(m, c) == doctest::Approx(0.0));

    const ScalarField ex = make_builtin_field("exponential", 1, {0.5});
    CHECK(entropy(m, ex) ==
          doctest::Approx(0.141643556633353).epsilon(1e-12));
    CHECK(fisher(m, ex) ==
          doctest::Approx(2.0 * 0.141643556633353).epsilon(1e-12));

    // Entropy is homogeneous of degree one in the field.
    CHECK(entropy(m, scale_field(2.5, ex)) ==
          doctest::Approx(2.5 * entropy(m, ex)).epsilon(1e-12));

    const ScalarField lin2 = make_builtin_field("linear", 1, {1.0});
    CHECK_THROWS_AS(entropy(m, lin2), NumericError);
    CHECK_THROWS_AS(fisher(m, lin2), NumericError);
}

TEST_CASE("poincare verdicts") {
    const Potential g = make_builtin_potential("gaussian", 1, {});
    const ScalarField lin = make_builtin_field("linear", 1, {1.0});
    Backend quad;
    quad.order = 40;

    const InequalityReport eq = verify_poincare(g, 1.0, lin, quad);
    CHECK(eq.holds);
    CHECK(eq.lhs == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(eq.rhs == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(eq.slack) <= 1e-10);
    CHECK(eq.kind == "poincare");

    const ScalarField c = make_builtin_field("constant", 1, {2.0});
    const InequalityReport triv = verify_poincare(g, 1.0, c, quad);
    CHECK(triv.holds);
    CHECK(triv.lhs == doctest::Approx(0.0));

    const Potential sg = make_builtin_potential("scaled-gaussian", 1, {2.0});
    Backend q60;
    q60.order = 60;
    const InequalityReport half = verify_poincare(sg, 2.0, lin, q60);
    CHECK(half.lhs == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(half.rhs == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(half.holds);

    CHECK_THROWS_AS(verify_poincare(g, 0.0, lin, quad), ConfigError);

    // Sampling backend: the extremal case holds within its noise band.
    Backend samp;
    samp.kind = Backend::Kind::samples;
    samp.count = 20000;
    samp.seed = 21;
    const InequalityReport noisy = verify_poincare(g, 1.0, lin, samp);
    CHECK(noisy.holds);
    CHECK(noisy.tolerance > 0.0);
}

TEST_CASE("poincare slack scales quadratically under field scaling") {
    const Potential g = make_builtin_potential("gaussian", 1, {});
    const ScalarField gb = make_builtin_field("gauss-bump", 1, {0.5});
    Backend quad;
    quad.order = 60;
    const InequalityReport base = verify_poincare(g, 1.0, gb, quad);
    const InequalityReport scaled =
        verify_poincare(g, 1.0, scale_field(3.0, gb), quad);
    CHECK(scaled.lhs == doctest::Approx(9.0 * base.lhs).epsilon(1e-9));
    CHECK(scaled.rhs == doctest::Approx(9.0 * base.rhs).epsilon(1e-9));
    CHECK(scaled.slack == doctest::Approx(9.0 * base.slack).epsilon(1e-7));
    CHECK(scaled.holds == base.holds);
}

TEST_CASE("log-sobolev verdicts") {
    const Potential g = make_builtin_potential("gaussian", 1, {});
    Backend quad;
    quad.order = 40;

    const ScalarField ex = make_builtin_field("exponential", 1, {0.5});
    const InequalityReport eq = verify_lsi(g, 1.0, ex, quad);
    CHECK(eq.holds);
    CHECK(std::abs(eq.slack) <= 1e-8);
    CHECK(eq.kind == "lsi");

    const ScalarField sd = make_builtin_field("shifted-density", 1, {1.0});
    const InequalityReport kl = verify_lsi(g, 1.0, sd, quad);
    CHECK(kl.lhs == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(kl.rhs == doctest::Approx(0.5).epsilon(1e-9));

    const ScalarField lin = make_builtin_field("linear", 1, {1.0});
    CHECK_THROWS_AS(verify_lsi(g, 1.0, lin, quad), ConfigError);
}

TEST_CASE("entropy of a squared perturbation approaches twice the variance") {
    const Measure m = Measure::gamma(gauss_hermite_grid(1, 60));
    const double eps = 1e-3;
    const std::vector<ScalarField> gs = {
        make_builtin_field("linear", 1, {1.0}),
        make_builtin_field("quadratic", 1, {}),
        make_builtin_field("exponential", 1, {0.5}),
        make_builtin_field("gauss-bump", 1, {0.5}),
        make_builtin_field("shifted-density", 1, {0.5}),
    };
    for (const ScalarField& g : gs) {
        const double var = variance(m, g);
        const double ent = entropy(m, perturbation_squared(g, eps));
        CHECK(std::abs(ent / (eps * eps) - 2.0 * var) <= 0.01 * var);
    }
}

TEST_CASE("decay fits") {
    const Potential g = make_builtin_potential("gaussian", 1, {});
    std::vector<double> times;
    for (int i = 0; i <= 4; ++i) times.push_back(0.25 * i);

    EvolveOptions vopt;
    vopt.order = 40;
    vopt.entropy = EntropyMode::off;
    const EvolutionTrace tv = evolve_trace(
        g, make_builtin_field("linear", 1, {1.0}), times, {}, vopt);
    const DecayFit fv = fit_decay_rate(tv, TrackedFunctional::variance);
    CHECK(std::abs(fv.rate + 2.0) <= 0.01);
    CHECK(fv.r_squared >= 0.9999);

    EvolveOptions eopt;
    eopt.order = 60;
    eopt.entropy = EntropyMode::required;
    const EvolutionTrace te = evolve_trace(
        g, make_builtin_field("shifted-density", 1, {1.0}), times, {}, eopt);
    const DecayFit fe = fit_decay_rate(te, TrackedFunctional::entropy);
    CHECK(fe.rate <= -2.0 + 0.05);
    CHECK(fe.rate >= -2.1);

    // Entropy was not tracked above, so its entries are NaN.
    CHECK_THROWS_AS(fit_decay_rate(tv, TrackedFunctional::entropy),
                    NumericError);
    EvolutionTrace flat = tv;
    flat.variance.assign(tv.times.size(), 0.0);
    CHECK_THROWS_WITH_AS(fit_decay_rate(flat, TrackedFunctional::variance),
                         doctest::Contains("not positive"), NumericError);

    EvolutionTrace short_tr = tv;
    short_tr.times = {0.0, 0.5};
    short_tr.variance = {1.0, 0.4};
    CHECK_THROWS_AS(fit_decay_rate(short_tr, TrackedFunctional::variance),
                    ConfigError);
}

TEST_CASE("decay fit verdict agrees with the static poincare verdict") {
    const Potential g = make_builtin_potential("gaussian", 1, {});
    std::vector<double> times;
    for (int i = 0; i <= 5; ++i) times.push_back(0.2 * i);
    Backend quad;
    quad.order = 60;
    EvolveOptions opt;
    opt.order = 60;
    opt.entropy = EntropyMode::off;
    for (const char* name : {"linear", "quadratic", "gauss-bump"}) {
        const ScalarField f = make_builtin_field(
            name, 1,
            std::string(name) == "gauss-bump" ? std::vector<double>{0.5}
            : std::string(name) == "linear"   ? std::vector<double>{1.0}
                                              : std::vector<double>{});
        const EvolutionTrace tr = evolve_trace(g, f, times, {}, opt);
        const DecayFit fit = fit_decay_rate(tr, TrackedFunctional::variance);
        const bool decay_ok = fit.rate <= -2.0 + 0.05;
        const bool static_ok = verify_poincare(g, 1.0, f, quad).holds;
        CHECK(decay_ok == static_ok);
        CHECK(decay_ok);
    }
}

TEST_CASE("entropy derivative identity") {
    const Potential g = make_builtin_potential("gaussian", 1, {});
    const ScalarField sd = make_builtin_field("shifted-density", 1, {1.0});
    const DerivativeCheck dc = entropy_derivative_check(g, sd, 0.5, 1e-3, 60);
    CHECK(dc.residual <= 1e-4);
    CHECK(dc.lhs < 0.0); // entropy decreases

    const ScalarField ex = make_builtin_field("exponential", 1, {0.5});
    CHECK(entropy_derivative_check(g, ex, 0.25, 1e-3, 60).residual <= 1e-4);

    const ScalarField c = make_builtin_field("constant", 1, {1.0});
    const DerivativeCheck zc = entropy_derivative_check(g, c, 0.5, 1e-3, 40);
    CHECK(std::abs(zc.lhs) <= 1e-12);
    CHECK(std::abs(zc.rhs) <= 1e-12);

    const Potential dw = make_builtin_potential("double-well", 1, {});
    CHECK_THROWS_AS(entropy_derivative_check(dw, sd, 0.5), ConfigError);
    CHECK_THROWS_AS(entropy_derivative_check(g, sd, 0.0005, 1e-3), ConfigError);
}

TEST_CASE("report serialization shape") {
    const Potential g = make_builtin_potential("gaussian", 1, {});
    Backend quad;
    quad.order = 40;
    const InequalityReport rep =
        verify_poincare(g, 1.0, make_builtin_field("linear", 1, {1.0}), quad);
    const nlohmann::json j = rep.to_json();
    CHECK(j.at("kind") == "poincare");
    CHECK(j.contains("lhs"));
    CHECK(j.contains("rhs"));
    CHECK(j.contains("constant_used"));
    CHECK(j.contains("slack"));
    CHECK(j.contains("tolerance"));
    CHECK(j.at("verdict") == "holds");
    CHECK(j.contains("inputs"));

    const std::string csv = rep.to_csv();
    const std::size_t nl = csv.find('\n');
    CHECK(csv.substr(0, nl) == "kind,lhs,rhs,constant,slack,verdict");
    const std::string row = csv.substr(nl + 1);
    CHECK(row.substr(0, 9) == "poincare,");
    CHECK(row.back() == '\n');
    CHECK(std::count(row.begin(), row.end(), ',') == 5);
    CHECK(row.find("holds") != std::string::npos);
}
