#include "sglab/interpolation.hpp"
#include "sglab/measure.hpp"
#include "sglab/potential.hpp"
#include "sglab/quadrature.hpp"
#include "sglab/rng.hpp"
#include "sglab/scalar_field.hpp"
#include "sglab/semigroup.hpp"

#include <doctest.h>

#include <cmath>

using namespace sglab;

namespace {
Vec pt(double x) {
    Vec v(1);
    v[0] = x;
    return v;
}
} // namespace

TEST_CASE("mehler identities") {
    const QuadratureGrid q = gauss_hermite_grid(1, 40);
    const ScalarField lin = make_builtin_field("linear", 1, {1.0});
    CHECK(mehler_apply(lin, 0.0, pt(0.7), q) == doctest::Approx(0.7));
    CHECK(mehler_apply(lin, std::log(2.0), pt(1.0), q) ==
          doctest::Approx(0.5).epsilon(1e-12));

    const ScalarField qu = make_builtin_field("quadratic", 1, {});
    for (double t : {0.1, 0.5, 1.3}) {
        for (double x : {-1.5, 0.0, 2.0}) {
            const double want =
                std::exp(-2.0 * t) * x * x + (1.0 - std::exp(-2.0 * t));
            CHECK(std::abs(mehler_apply(qu, t, pt(x), q) - want) <= 1e-9);
        }
    }
}

TEST_CASE("semigroup law through a tabulated intermediate") {
    const ScalarField ex = make_builtin_field("exponential", 1, {0.5});
    const double t = 0.4, s = 0.3;
    const ScalarField pt_f = mehler_field(ex, t, 40);
    const ScalarField tab = tabulate_field_1d(pt_f, -20.0, 20.0, 4001);
    const QuadratureGrid q = gauss_hermite_grid(1, 40);
    for (double x : {-1.0, 0.0, 0.8}) {
        const double two_step = mehler_apply(tab, s, pt(x), q);
        const double one_step = mehler_apply(ex, s + t, pt(x), q);
        CHECK(std::abs(two_step - one_step) <= 1e-8);
    }
}

TEST_CASE("contraction and positivity preservation") {
    const ScalarField gb = make_builtin_field("gauss-bump", 1, {0.5});
    const QuadratureGrid q = gauss_hermite_grid(1, 40);
    for (double t : {0.2, 1.0, 3.0}) {
        for (double x : {-2.0, 0.0, 1.5}) {
            const double v = mehler_apply(gb, t, pt(x), q);
            CHECK(v <= 1.0 + 1e-12); // sup of the bump is 1
            CHECK(v >= -1e-12);
        }
    }
}

TEST_CASE("time derivative matches the generator") {
    const Potential g = make_builtin_potential("gaussian", 1, {});
    const ScalarField ex = make_builtin_field("exponential", 1, {0.5});
    const QuadratureGrid q = gauss_hermite_grid(1, 60);
    const double t = 0.5, h = 1e-3;
    for (double x : {-0.8, 0.0, 1.1}) {
        const double lhs = (mehler_apply(ex, t + h, pt(x), q) -
                            mehler_apply(ex, t - h, pt(x), q)) /
                           (2.0 * h);
        // L applied to the evolved field, via its closed derivatives.
        const ScalarField pt_f = mehler_field(ex, t, 60);
        const double rhs = generator_apply(g, pt_f, pt(x));
        CHECK(std::abs(lhs - rhs) <= 1e-5);
        // And P_t applied to L f.
        const double rhs2 =
            mehler_apply(generator_field(g, ex), t, pt(x), q);
        CHECK(std::abs(lhs - rhs2) <= 1e-5);
    }
}

TEST_CASE("gradient commutation") {
    const ScalarField ex = make_builtin_field("exponential", 1, {0.5});
    const ScalarField dx = partial_derivative_field(ex, 0);
    const QuadratureGrid q = gauss_hermite_grid(1, 40);
    const double t = 0.3;
    for (double x : {-1.0, 0.2, 1.4}) {
        const Vec fd = fd_gradient(
            [&](const Vec& z) { return mehler_apply(ex, t, z, q); }, pt(x));
        const double want = std::exp(-t) * mehler_apply(dx, t, pt(x), q);
        CHECK(std::abs(fd[0] - want) <= 1e-6);
    }
}

TEST_CASE("mehler_field carries closed derivatives and positivity") {
    const ScalarField ex = make_builtin_field("exponential", 1, {0.5});
    const ScalarField evolved = mehler_field(ex, 0.7, 40);
    CHECK(evolved.strictly_positive());
    const Vec x = pt(0.4);
    const Vec fg =
        fd_gradient([&evolved](const Vec& z) { return evolved(z); }, x);
    CHECK(std::abs(evolved.grad(x)[0] - fg[0]) <= 1e-7);
    const Mat fh =
        fd_hessian([&evolved](const Vec& z) { return evolved(z); }, x);
    CHECK(std::abs(evolved.hess(x)(0, 0) - fh(0, 0)) <= 1e-5);

    const ScalarField same = mehler_field(ex, 0.0, 40);
    CHECK(same(x) == doctest::Approx(ex(x)));
}

TEST_CASE("generator values and invariance") {
    const Potential g = make_builtin_potential("gaussian", 1, {});
    const ScalarField c = make_builtin_field("constant", 1, {3.0});
    CHECK(generator_apply(g, c, pt(0.9)) == doctest::Approx(0.0));

    const ScalarField qu = make_builtin_field("quadratic", 1, {});
    for (double x : {-1.0, 0.0, 2.0})
        CHECK(generator_apply(g, qu, pt(x)) ==
              doctest::Approx(2.0 - 2.0 * x * x).epsilon(1e-12));

    const Measure m = Measure::gamma(gauss_hermite_grid(1, 40));
    for (const char* name : {"linear", "quadratic", "exponential",
                             "gauss-bump", "shifted-density"}) {
        const ScalarField f = make_builtin_field(
            name, 1,
            std::string(name) == "quadratic" ? std::vector<double>{}
                                             : std::vector<double>{0.5});
        const double mean =
            m.expect([&](const Vec& x) { return generator_apply(g, f, x); });
        CHECK(std::abs(mean) <= 1e-10);
    }
}

TEST_CASE("integration by parts under gamma and mu") {
    const QuadratureGrid q40 = gauss_hermite_grid(1, 40);
    const Potential g = make_builtin_potential("gaussian", 1, {});
    const ScalarField f = make_builtin_field("gauss-bump", 1, {0.5});
    const ScalarField h = make_builtin_field("exponential", 1, {0.5});

    const Measure mg = Measure::gamma(q40);
    const double gLf =
        mg.expect([&](const Vec& x) { return h(x) * generator_apply(g, f, x); });
    const double fLg =
        mg.expect([&](const Vec& x) { return f(x) * generator_apply(g, h, x); });
    const double grads =
        mg.expect([&](const Vec& x) { return f.grad(x).dot(h.grad(x)); });
    CHECK(std::abs(gLf + grads) <= 1e-8);
    CHECK(std::abs(fLg + grads) <= 1e-8);

    // Same identity under the non-gaussian invariant measures; the
    // double-well needs a high order for the importance reweighting.
    const Potential dw = make_builtin_potential("double-well", 1, {});
    const Measure md = Measure::mu(dw, gauss_hermite_grid(1, 200));
    const double dLf = md.expect(
        [&](const Vec& x) { return h(x) * generator_apply(dw, f, x); });
    const double dgr =
        md.expect([&](const Vec& x) { return f.grad(x).dot(h.grad(x)); });
    CHECK(std::abs(dLf + dgr) <= 1e-8);

    const Potential sg = make_builtin_potential("scaled-gaussian", 1, {2.0});
    const Measure msg = Measure::mu(sg, gauss_hermite_grid(1, 120));
    const double sLf = msg.expect(
        [&](const Vec& x) { return h(x) * generator_apply(sg, f, x); });
    const double sgr =
        msg.expect([&](const Vec& x) { return f.grad(x).dot(h.grad(x)); });
    CHECK(std::abs(sLf + sgr) <= 1e-8);
}

TEST_CASE("sde evolution") {
    const Potential g = make_builtin_potential("gaussian", 1, {});
    const ScalarField qu = make_builtin_field("quadratic", 1, {});

    SdeOptions opt;
    opt.paths = 32;
    opt.seed = 4;
    const SdeEstimate at0 = sde_evolve(g, qu, 0.0, pt(1.0), opt);
    CHECK(at0.mean == doctest::Approx(1.0));
    CHECK(at0.se == doctest::Approx(0.0));

    opt.paths = 20000;
    opt.scheme = SdeScheme::exact_ou;
    const SdeEstimate est = sde_evolve(g, qu, 1.0, pt(1.0), opt);
    const double exact =
        mehler_apply(qu, 1.0, pt(1.0), gauss_hermite_grid(1, 40));
    CHECK(std::abs(est.mean - exact) <= 3.0 * est.se);
    CHECK(est.se > 0.0);

    const SdeEstimate est2 = sde_evolve(g, qu, 1.0, pt(1.0), opt);
    CHECK(est.mean == doctest::Approx(est2.mean).epsilon(1e-15));

    // Long-time limit is the invariant expectation.
    const ScalarField gb = make_builtin_field("gauss-bump", 1, {0.5});
    opt.paths = 20000;
    const SdeEstimate erg = sde_evolve(g, gb, 20.0, pt(1.5), opt);
    CHECK(std::abs(erg.mean - 1.0 / std::sqrt(2.0)) <= 3.0 * erg.se);

    // Exact transitions exist only for the linear-drift family.
    const Potential dw = make_builtin_potential("double-well", 1, {});
    CHECK_THROWS_AS(sde_evolve(dw, qu, 0.5, pt(0.0), opt), ConfigError);

    // A step too large for the drift stiffness diverges.
    const Potential stiff =
        make_builtin_potential("scaled-gaussian", 1, {5000.0});
    SdeOptions bad;
    bad.paths = 2;
    bad.step = 1e-3;
    CHECK_THROWS_AS(sde_evolve(stiff, qu, 0.5, pt(1.0), bad), NumericError);
}

TEST_CASE("evolve_trace contracts") {
    const Potential g = make_builtin_potential("gaussian", 1, {});
    const ScalarField lin = make_builtin_field("linear", 1, {1.0});

    EvolveOptions opt;
    opt.order = 40;
    opt.entropy = EntropyMode::off;

    const EvolutionTrace one = evolve_trace(g, lin, {0.0}, {pt(0.5)}, opt);
    CHECK(one.variance[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(one.values[0][0] == doctest::Approx(0.5));

    const EvolutionTrace tr =
        evolve_trace(g, lin, {0.0, 0.5, 1.0}, {pt(1.0)}, opt);
    CHECK(tr.variance[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(tr.variance[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(tr.variance[2] == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
    CHECK(tr.values[0][0] == doctest::Approx(1.0));

    // Contract violations.
    CHECK_THROWS_AS(evolve_trace(g, lin, {0.5, 1.0}, {}, opt), ConfigError);
    CHECK_THROWS_AS(evolve_trace(g, lin, {0.0, 1.0, 1.0}, {}, opt),
                    ConfigError);
    EvolveOptions want_entropy;
    want_entropy.entropy = EntropyMode::required;
    CHECK_THROWS_AS(evolve_trace(g, lin, {0.0, 0.5}, {}, want_entropy),
                    ConfigError);
    const Potential dw = make_builtin_potential("double-well", 1, {});
    CHECK_THROWS_AS(evolve_trace(dw, lin, {0.0, 0.5}, {}, opt), ConfigError);

    // Entropy track of a positive density under the closed evolution.
    const ScalarField sd = make_builtin_field("shifted-density", 1, {1.0});
    EvolveOptions eopt;
    eopt.order = 60;
    eopt.entropy = EntropyMode::required;
    const EvolutionTrace etr =
        evolve_trace(g, sd, {0.0, 0.5, 1.0}, {}, eopt);
    CHECK(etr.entropy[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(etr.entropy[1] ==
          doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-9));
    CHECK(etr.fisher[0] == doctest::Approx(1.0).epsilon(1e-9));

    // Monte-Carlo trace reports standard errors and stays near the truth.
    EvolveOptions sopt;
    sopt.method = EvolveMethod::sde;
    sopt.entropy = EntropyMode::off;
    sopt.order = 20;
    sopt.sde.paths = 4000;
    sopt.sde.seed = 12;
    sopt.sde.scheme = SdeScheme::exact_ou;
    const EvolutionTrace str =
        evolve_trace(g, lin, {0.0, 0.5}, {pt(1.0)}, sopt);
    REQUIRE(!str.value_se.empty());
    CHECK(str.values[0][0] == doctest::Approx(1.0));
    CHECK(std::abs(str.values[1][0] - std::exp(-0.5)) <=
          4.0 * str.value_se[1][0] + 1e-12);
    CHECK(std::abs(str.variance[1] - std::exp(-1.0)) <= 0.12);
}
