#include "sglab/empirical.hpp"
#include "sglab/measure.hpp"
#include "sglab/potential.hpp"
#include "sglab/quadrature.hpp"
#include "sglab/rng.hpp"
#include "sglab/scalar_field.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace sglab;

TEST_CASE("builtin potential values and derivatives") {
    const Potential g2 = make_builtin_potential("gaussian", 2, {});
    Vec x(2);
    x << 1.0, 1.0;
    CHECK(g2(x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g2.grad(x)[0] == doctest::Approx(1.0));
    CHECK(g2.grad(x)[1] == doctest::Approx(1.0));
    CHECK((g2.hess(x) - Mat::Identity(2, 2)).norm() == doctest::Approx(0.0));

    const Potential dw = make_builtin_potential("double-well", 1, {});
    Vec y(1);
    y << 1.0;
    CHECK(dw(y) == doctest::Approx(0.0).epsilon(1e-15));

    const Potential gq =
        make_builtin_potential("gaussian-plus-quartic", 1, {0.1});
    CHECK(gq(y) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(gq.hess(y)(0, 0) == doctest::Approx(2.2).epsilon(1e-14));

    const Potential sg = make_builtin_potential("scaled-gaussian", 1, {2.0});
    CHECK(sg(y) == doctest::Approx(1.0));
    CHECK(sg.hess(y)(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("builtin potential argument validation") {
    CHECK_THROWS_AS(make_builtin_potential("nope", 1, {}), ConfigError);
    CHECK_THROWS_AS(make_builtin_potential("gaussian", 1, {1.0}), ConfigError);
    CHECK_THROWS_AS(make_builtin_potential("scaled-gaussian", 1, {}),
                    ConfigError);
    CHECK_THROWS_AS(make_builtin_potential("scaled-gaussian", 1, {-1.0}),
                    ConfigError);
    CHECK_THROWS_AS(make_builtin_potential("gaussian-plus-quartic", 1, {-0.1}),
                    ConfigError);
    CHECK_THROWS_AS(make_builtin_potential("double-well", 2, {}), ConfigError);
    CHECK_THROWS_AS(make_builtin_potential("gaussian", 0, {}), ConfigError);
}

TEST_CASE("potential derivatives agree with finite differences") {
    const std::vector<Potential> pots = {
        make_builtin_potential("gaussian", 2, {}),
        make_builtin_potential("scaled-gaussian", 2, {2.0}),
        make_builtin_potential("gaussian-plus-quartic", 2, {0.1}),
        make_builtin_potential("double-well", 1, {}),
    };
    for (const Potential& p : pots) {
        Rng rng = Rng::substream(42, 7);
        for (int k = 0; k < 100; ++k) {
            const Vec x = rng.normal_vec(p.dimension);
            const Vec ag = p.grad(x);
            const Vec fg = fd_gradient([&p](const Vec& z) { return p(z); }, x);
            const double gscale = std::max(1.0, ag.norm());
            CHECK((ag - fg).norm() / gscale < 1e-6);
            const Mat ah = p.hess(x);
            CHECK((ah - ah.transpose()).norm() < 1e-14);
            Mat fh(p.dimension, p.dimension);
            for (int i = 0; i < p.dimension; ++i)
                fh.row(i) = fd_gradient(
                    [&p, i](const Vec& z) { return p.grad(z)[i]; }, x);
            fh = 0.5 * (fh + fh.transpose());
            CHECK((ah - fh).norm() / std::max(1.0, ah.norm()) < 1e-5);
        }
    }
}

TEST_CASE("min_curvature catalog values") {
    const Potential g = make_builtin_potential("gaussian", 2, {});
    CHECK(min_curvature(g, -3.0, 3.0, 11) == doctest::Approx(1.0).epsilon(1e-12));

    const Potential sg = make_builtin_potential("scaled-gaussian", 1, {2.0});
    CHECK(min_curvature(sg, -5.0, 5.0, 21) == doctest::Approx(2.0).epsilon(1e-12));

    const Potential dw = make_builtin_potential("double-well", 1, {});
    Vec argmin;
    const double rho = min_curvature(dw, -2.0, 2.0, 401, &argmin);
    CHECK(std::abs(rho + 1.0) <= 1e-3);
    CHECK(std::abs(argmin[0]) <= 0.01);

    CHECK_THROWS_AS(min_curvature(g, -1.0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(min_curvature(g, 1.0, -1.0, 10), ConfigError);
}

TEST_CASE("gauss-hermite grid basics") {
    const QuadratureGrid q = gauss_hermite_grid(1, 40);
    double wsum = 0.0;
    for (double w : q.weights) {
        CHECK(w > 0.0);
        wsum += w;
    }
    CHECK(std::abs(wsum - 1.0) <= 1e-12);
    CHECK(q.expect([](const Vec&) { return 1.0; }) == doctest::Approx(1.0));
    CHECK(q.expect([](const Vec& x) { return x[0] * x[0]; }) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(q.expect([](const Vec& x) { return x[0]; })) < 1e-14);

    // Fourth moment against a frozen direct Monte-Carlo estimate.
    const double x4 = q.expect([](const Vec& x) { return std::pow(x[0], 4); });
    CHECK(x4 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(x4 - 2.9996) <= 3.0 * 0.0031);

    CHECK_THROWS_AS(gauss_hermite_grid(1, 1), ConfigError);
    CHECK_THROWS_AS(gauss_hermite_grid(0, 10), ConfigError);
    CHECK_THROWS_AS(gauss_hermite_grid(5, 10), ConfigError);
}

TEST_CASE("quadrature integrates monomials exactly up to degree 2m-1") {
    for (int order : {2, 5, 8, 13}) {
        const QuadratureGrid q = gauss_hermite_grid(1, order);
        for (int deg = 0; deg <= 2 * order - 1; ++deg) {
            const double got =
                q.expect([deg](const Vec& x) { return std::pow(x[0], deg); });
            // Gaussian moments: 0 for odd degree, (deg-1)!! for even.
            double want = 0.0;
            if (deg % 2 == 0) {
                want = 1.0;
                for (int k = deg - 1; k > 1; k -= 2) want *= k;
            }
            // Odd degrees vanish only through cancellation of large
            // terms, so the error scale is the absolute-moment sum.
            const double scale = q.expect(
                [deg](const Vec& x) { return std::pow(std::abs(x[0]), deg); });
            CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("quadrature moment generating function value") {
    const QuadratureGrid q = gauss_hermite_grid(1, 40);
    const double got =
        q.expect([](const Vec& x) { return std::exp(0.5 * x[0]); });
    CHECK(got == doctest::Approx(1.133148453066826).epsilon(1e-13));
}

TEST_CASE("non-finite integrand reports the node") {
    const QuadratureGrid q = gauss_hermite_grid(1, 10);
    CHECK_THROWS_AS(
        q.expect([](const Vec& x) { return 1.0 / (x[0] - x[0]); }),
        NumericError);
}

TEST_CASE("measure expectations under mu") {
    const QuadratureGrid q = gauss_hermite_grid(1, 60);
    const Potential g = make_builtin_potential("gaussian", 1, {});
    const Measure mg = Measure::mu(g, q);
    CHECK(mg.expect([](const Vec& x) { return x[0] * x[0]; }) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mg.expect([](const Vec&) { return 1.0; }) ==
          doctest::Approx(1.0).epsilon(1e-13));

    const Potential sg = make_builtin_potential("scaled-gaussian", 1, {2.0});
    const Measure ms = Measure::mu(sg, q);
    CHECK(ms.expect([](const Vec& x) { return x[0] * x[0]; }) ==
          doctest::Approx(0.5).epsilon(1e-8));
    CHECK(ms.expect([](const Vec&) { return 1.0; }) ==
          doctest::Approx(1.0).epsilon(1e-13));

    const Potential zero = make_builtin_potential("zero", 1, {});
    CHECK_THROWS_AS(Measure::mu(zero, q), ConfigError);
}

TEST_CASE("rng determinism and substreams") {
    Rng a = Rng::substream(9, 3);
    Rng b = Rng::substream(9, 3);
    Rng c = Rng::substream(9, 4);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const double av = a.normal();
        all_equal = all_equal && av == b.normal();
        any_diff = any_diff || av != c.normal();
    }
    CHECK(all_equal);
    CHECK(any_diff);
    Rng u = Rng::substream(1, 1);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("direct samplers hit their moments") {
    const EmpiricalMeasure m = sample_gaussian(2, 10000, 5);
    Vec mean = Vec::Zero(2);
    for (const Vec& x : m.points) mean += x;
    mean /= 10000.0;
    CHECK(std::abs(mean[0]) <= 4.0 / 100.0);
    CHECK(std::abs(mean[1]) <= 4.0 / 100.0);

    const EmpiricalMeasure m2 = sample_gaussian(2, 10000, 5);
    bool identical = true;
    for (int i = 0; i < 10000; ++i)
        identical = identical && m.points[i] == m2.points[i];
    CHECK(identical);

    const Potential sg = make_builtin_potential("scaled-gaussian", 1, {2.0});
    const EmpiricalMeasure s = sample_invariant(sg, 100000, 11);
    double var = 0.0;
    for (const Vec& x : s.points) var += x[0] * x[0];
    var /= 100000.0;
    // Var of the squared coordinate is 2 sigma^4 = 0.5; se = sqrt(.5/1e5).
    CHECK(std::abs(var - 0.5) <= 3.0 * std::sqrt(0.5 / 100000.0));
}

TEST_CASE("langevin sampler targets the quartic tightening") {
    const Potential gq =
        make_builtin_potential("gaussian-plus-quartic", 1, {0.5});
    const EmpiricalMeasure s = sample_invariant(gq, 4000, 3);
    CHECK(s.points.size() == 4000);
    CHECK(s.source.find("langevin") != std::string::npos);
    double var = 0.0;
    for (const Vec& x : s.points) var += x[0] * x[0];
    var /= 4000.0;
    CHECK(var < 0.9); // quartic term tightens the gaussian
    CHECK(var > 0.3);

    const EmpiricalMeasure s2 = sample_invariant(gq, 4000, 3);
    CHECK(s.points[100][0] == s2.points[100][0]);

    const Potential zero = make_builtin_potential("zero", 1, {});
    CHECK_THROWS_AS(sample_invariant(zero, 10, 1), ConfigError);
}

TEST_CASE("points csv round trip and validation") {
    const EmpiricalMeasure m = sample_gaussian(3, 50, 2);
    const std::string path =
        (std::filesystem::temp_directory_path() / "pts_roundtrip.csv")
            .string();
    write_points_csv(m, path);
    const EmpiricalMeasure back = read_points_csv(path);
    REQUIRE(back.dimension == 3);
    REQUIRE(back.points.size() == 50);
    bool same = true;
    for (int i = 0; i < 50; ++i) same = same && back.points[i] == m.points[i];
    CHECK(same);

    const std::string bad =
        (std::filesystem::temp_directory_path() / "pts_bad.csv").string();
    {
        std::FILE* fp = std::fopen(bad.c_str(), "w");
        std::fputs("x1,x2\n1.0,2.0\n3.0\n", fp);
        std::fclose(fp);
    }
    CHECK_THROWS_AS(read_points_csv(bad), ConfigError);
    {
        std::FILE* fp = std::fopen(bad.c_str(), "w");
        std::fputs("x1\nnot-a-number\n", fp);
        std::fclose(fp);
    }
    CHECK_THROWS_AS(read_points_csv(bad), ConfigError);
    std::filesystem::remove(path);
    std::filesystem::remove(bad);
}
