#include "sglab/acceptance.hpp"

#include "sglab/functionals.hpp"
#include "sglab/gamma.hpp"
#include "sglab/measure.hpp"
#include "sglab/potential.hpp"
#include "sglab/quadrature.hpp"
#include "sglab/report_io.hpp"
#include "sglab/rng.hpp"
#include "sglab/scalar_field.hpp"
#include "sglab/semigroup.hpp"
#include "sglab/transport.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

namespace sglab {

namespace {

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
    nlohmann::json data;
};

CriterionResult run_one(int index, const std::string& name, double limit,
                        const std::function<Outcome()>& body) {
    CriterionResult r;
    r.index = index;
    r.name = name;
    r.limit_seconds = limit;
    const auto start = std::chrono::steady_clock::now();
    try {
        Outcome out = body();
        r.pass = out.pass;
        r.detail = std::move(out.detail);
        r.data = std::move(out.data);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return r;
}

Outcome poincare_equality() {
    const Potential p = make_builtin_potential("gaussian", 1, {});
    const ScalarField f = make_builtin_field("linear", 1, {1.0});
    const Measure m = Measure::gamma(gauss_hermite_grid(1, 40));
    const double var = variance(m, f);
    const double dir = dirichlet(m, f);
    const double res = std::abs(var - dir);
    Outcome o;
    o.pass = res <= 1.0e-10;
    o.detail = "variance-dirichlet residual " + fmt("%.3e", res);
    o.data = {{"variance", var}, {"dirichlet", dir}, {"residual", res}};
    (void)p;
    return o;
}

Outcome lsi_equality() {
    const ScalarField f = make_builtin_field("exponential", 1, {0.5});
    const Measure m = Measure::gamma(gauss_hermite_grid(1, 40));
    const double ent = entropy(m, f);
    const double fis = fisher(m, f);
    const double expected = 0.141643556633353; // 0.125 * exp(0.125)
    const double r_eq = std::abs(ent - 0.5 * fis);
    const double r_val = std::abs(ent - expected);
    Outcome o;
    o.pass = r_eq <= 1.0e-8 && r_val <= 1.0e-8;
    o.detail = "entropy-half-Fisher residual " + fmt("%.3e", r_eq) +
               ", closed-form residual " + fmt("%.3e", r_val);
    o.data = {{"entropy", ent},
              {"fisher", fis},
              {"equality_residual", r_eq},
              {"value_residual", r_val}};
    return o;
}

Outcome mehler_closed_form() {
    const ScalarField f = make_builtin_field("quadratic", 1, {});
    const QuadratureGrid grid = gauss_hermite_grid(1, 40);
    double worst = 0.0;
    Vec x(1);
    for (int i = 0; i < 10; ++i) {
        const double t = 0.05 + 0.1 * i;
        const double decay2 = std::exp(-2.0 * t);
        for (int j = 0; j < 5; ++j) {
            x[0] = -2.0 + j;
            const double got = mehler_apply(f, t, x, grid);
            const double want = decay2 * x[0] * x[0] + (1.0 - decay2);
            worst = std::max(worst, std::abs(got - want));
        }
    }
    Outcome o;
    o.pass = worst <= 1.0e-9;
    o.detail = "max error over 50 (t,x) pairs " + fmt("%.3e", worst);
    o.data = {{"max_error", worst}, {"pairs", 50}};
    return o;
}

Outcome sde_vs_mehler(std::uint64_t seed) {
    const Potential p = make_builtin_potential("gaussian", 1, {});
    const ScalarField f = make_builtin_field("quadratic", 1, {});
    Vec x0(1);
    x0[0] = 1.0;
    SdeOptions opt;
    opt.paths = 100000;
    opt.step = 1.0e-3;
    opt.seed = seed;
    opt.scheme = SdeScheme::euler;
    const SdeEstimate est = sde_evolve(p, f, 1.0, x0, opt);
    const double exact = mehler_apply(f, 1.0, x0, gauss_hermite_grid(1, 40));
    const double diff = std::abs(est.mean - exact);
    Outcome o;
    o.pass = diff <= 3.0 * est.se;
    o.detail = "difference " + fmt("%.3e", diff) + " vs 3se " +
               fmt("%.3e", 3.0 * est.se);
    o.data = {{"monte_carlo", est.mean},
              {"exact", exact},
              {"difference", diff},
              {"standard_error", est.se},
              {"paths", est.paths}};
    return o;
}

Outcome decay_rates() {
    const Potential p = make_builtin_potential("gaussian", 1, {});
    std::vector<double> times;
    for (int i = 0; i <= 10; ++i) times.push_back(0.1 * i);

    EvolveOptions vo;
    vo.method = EvolveMethod::mehler;
    vo.order = 40;
    vo.entropy = EntropyMode::off;
    const EvolutionTrace tv = evolve_trace(
        p, make_builtin_field("linear", 1, {1.0}), times, {}, vo);
    const DecayFit fv = fit_decay_rate(tv, TrackedFunctional::variance);

    EvolveOptions eo;
    eo.method = EvolveMethod::mehler;
    eo.order = 60;
    eo.entropy = EntropyMode::required;
    const EvolutionTrace te = evolve_trace(
        p, make_builtin_field("shifted-density", 1, {1.0}), times, {}, eo);
    const DecayFit fe = fit_decay_rate(te, TrackedFunctional::entropy);

    Outcome o;
    o.pass = std::abs(fv.rate + 2.0) <= 0.01 && fv.r_squared >= 0.9999 &&
             std::abs(fe.rate + 2.0) <= 0.05;
    o.detail = "variance rate " + fmt("%.6f", fv.rate) + " (r2 " +
               fmt("%.8f", fv.r_squared) + "), entropy rate " +
               fmt("%.6f", fe.rate);
    o.data = {{"variance_rate", fv.rate},
              {"variance_r_squared", fv.r_squared},
              {"entropy_rate", fe.rate},
              {"entropy_r_squared", fe.r_squared}};
    return o;
}

Outcome curvature_estimates(std::uint64_t seed) {
    const Potential g = make_builtin_potential("gaussian", 1, {});
    const Potential dw = make_builtin_potential("double-well", 1, {});
    const double rho_g = min_curvature(g, -2.0, 2.0, 401);
    const double rho_dw = min_curvature(dw, -2.0, 2.0, 401);
    const CurvatureReport rep =
        check_cd(dw, 0.5, std::numeric_limits<double>::infinity(),
                 cd_field_catalog(1),
                 gaussian_point_cloud(1, 200, seed ^ 0xc6c6c6, 2.0));
    const double witness =
        rep.witness_point.size() > 0 ? rep.witness_point[0] : 1.0e9;
    Outcome o;
    o.pass = std::abs(rho_g - 1.0) <= 1.0e-9 &&
             std::abs(rho_dw + 1.0) <= 1.0e-3 && !rep.holds &&
             std::abs(witness) <= 0.3;
    o.detail = "gaussian curvature " + fmt("%.12f", rho_g) +
               ", double-well curvature " + fmt("%.6f", rho_dw) +
               ", cd witness at x = " + fmt("%.4f", witness);
    o.data = {{"gaussian_min_curvature", rho_g},
              {"double_well_min_curvature", rho_dw},
              {"cd_holds", rep.holds},
              {"cd_min_gap", rep.min_gap},
              {"cd_witness_x", witness},
              {"cd_witness_field", rep.witness_field}};
    return o;
}

Outcome gamma_identities(std::uint64_t seed) {
    const std::vector<Potential> pots = {
        make_builtin_potential("gaussian", 1, {}),
        make_builtin_potential("scaled-gaussian", 1, {2.0}),
        make_builtin_potential("gaussian-plus-quartic", 1, {0.1}),
        make_builtin_potential("double-well", 1, {}),
    };
    const std::vector<ScalarField> fields = cd_field_catalog(1);
    double worst_def = 0.0, worst_iter = 0.0, worst_chain = 0.0;
    for (std::size_t pi = 0; pi < pots.size(); ++pi) {
        const Potential& p = pots[pi];
        const std::vector<Vec> cloud =
            gaussian_point_cloud(1, 100, seed ^ (0x77a000 + pi), 2.0);
        for (int k = 0; k < 100; ++k) {
            const ScalarField& f = fields[k % fields.size()];
            const Vec& x = cloud[k];
            worst_def = std::max(
                worst_def,
                std::abs(gamma1_definitional(p, f, x) - gamma1(p, f, x)));
            worst_iter = std::max(
                worst_iter,
                std::abs(gamma2_iterated(p, f, x) - gamma2(p, f, x)));
            if (f.strictly_positive()) {
                const ChainRuleResiduals cr = chain_rule_residuals(p, f, x);
                worst_chain = std::max(
                    {worst_chain, cr.generator_log, cr.gamma_log,
                     cr.gamma2_log});
            }
        }
    }
    Outcome o;
    o.pass = worst_def <= 1.0e-7 && worst_iter <= 1.0e-7 &&
             worst_chain <= 1.0e-7;
    o.detail = "max residuals: definitional " + fmt("%.3e", worst_def) +
               ", iterated " + fmt("%.3e", worst_iter) + ", chain rule " +
               fmt("%.3e", worst_chain);
    o.data = {{"definitional_residual", worst_def},
              {"iterated_residual", worst_iter},
              {"chain_rule_residual", worst_chain}};
    return o;
}

Outcome integration_by_parts() {
    const std::vector<Potential> pots = {
        make_builtin_potential("gaussian", 1, {}),
        make_builtin_potential("scaled-gaussian", 1, {2.0}),
    };
    std::vector<ScalarField> fields = {
        make_builtin_field("linear", 1, {1.0}),
        make_builtin_field("quadratic", 1, {}),
        make_builtin_field("exponential", 1, {0.5}),
        make_builtin_field("gauss-bump", 1, {0.5}),
        make_builtin_field("shifted-density", 1, {0.5}),
    };
    double worst = 0.0;
    for (const Potential& p : pots) {
        const Measure m = Measure::mu(p, gauss_hermite_grid(1, 120));
        int pairs = 0;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            for (std::size_t j = i + 1; j < fields.size(); ++j) {
                const ScalarField &f = fields[i], &g = fields[j];
                const double lhs = m.expect([&](const Vec& x) {
                    return g(x) * generator_apply(p, f, x);
                });
                const double cross = m.expect([&](const Vec& x) {
                    return f.grad(x).dot(g.grad(x));
                });
                worst = std::max(worst, std::abs(lhs + cross));
                ++pairs;
            }
        }
        if (pairs != 10) throw NumericError("pair count mismatch");
    }
    Outcome o;
    o.pass = worst <= 1.0e-8;
    o.detail = "max |E[g Lf] + E[grad f . grad g]| = " + fmt("%.3e", worst);
    o.data = {{"max_residual", worst}, {"pairs_per_potential", 10}};
    return o;
}

Outcome entropy_derivative() {
    const Potential p = make_builtin_potential("gaussian", 1, {});
    const std::vector<ScalarField> fields = {
        make_builtin_field("shifted-density", 1, {1.0}),
        make_builtin_field("exponential", 1, {0.5}),
    };
    double worst = 0.0;
    for (const ScalarField& f : fields)
        for (double t : {0.25, 0.5, 1.0})
            worst = std::max(
                worst, entropy_derivative_check(p, f, t, 1.0e-3, 60).residual);
    Outcome o;
    o.pass = worst <= 1.0e-4;
    o.detail = "max |d/dt Ent + Fisher| = " + fmt("%.3e", worst);
    o.data = {{"max_residual", worst}};
    return o;
}

Outcome w2_oracle_equivalence(std::uint64_t seed) {
    double worst = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        Rng rng = Rng::substream(seed, 0xc10 + inst);
        const int n = 200;
        std::vector<double> a(n), b(n);
        std::vector<Vec> av(n, Vec(1)), bv(n, Vec(1));
        for (int i = 0; i < n; ++i) {
            a[i] = rng.normal();
            b[i] = 1.3 * rng.normal() + 0.4;
            av[i][0] = a[i];
            bv[i][0] = b[i];
        }
        const double w_sorted = w2_sorted_1d(a, b).w2;
        const double w_assign = w2_assignment(av, bv).w2;
        worst = std::max(worst, std::abs(w_sorted - w_assign));
    }
    Outcome o;
    o.pass = worst <= 1.0e-10;
    o.detail = "max |sorted - assignment| = " + fmt("%.3e", worst) +
               " over 20 instances, n=200";
    o.data = {{"max_difference", worst}, {"instances", 20}, {"n", 200}};
    return o;
}

Outcome talagrand_equality(std::uint64_t seed) {
    const Potential p = make_builtin_potential("gaussian", 1, {});
    const ScalarField f = make_builtin_field("shifted-density", 1, {1.0});
    const InequalityReport rep =
        verify_talagrand(p, 1.0, f, 10000, seed ^ 0x7a1a, 60);
    const double lhs_err = std::abs(rep.lhs - 1.0);
    const double rhs_err = std::abs(rep.rhs - 1.0);
    Outcome o;
    o.pass = lhs_err <= 0.02 && rhs_err <= 1.0e-8 && rep.holds;
    o.detail = "W2 = " + fmt("%.5f", rep.lhs) + " (target 1 +- 0.02), rhs = " +
               fmt("%.12f", rep.rhs) + ", verdict " +
               (rep.holds ? "holds" : "violated");
    o.data = {{"w2", rep.lhs},
              {"rhs", rep.rhs},
              {"lhs_error", lhs_err},
              {"rhs_error", rhs_err},
              {"holds", rep.holds}};
    return o;
}

Outcome monge_ampere_residual() {
    const ScalarField f = make_builtin_field("shifted-density", 1, {1.0});
    std::vector<double> grid(4001);
    for (int i = 0; i < 4001; ++i) grid[i] = -3.0 + 6.0 * i / 4000.0;
    const BrenierMap1D map =
        brenier_map_1d(f, grid, MapDirection::from_fgamma_to_gamma);
    const MongeAmpereResult res = monge_ampere_residual_1d(f, map, grid);
    Outcome o;
    o.pass = res.max_relative_residual <= 1.0e-6;
    o.detail = "max relative residual " +
               fmt("%.3e", res.max_relative_residual) + " at x = " +
               fmt("%.4f", res.argmax_x);
    o.data = {{"max_relative_residual", res.max_relative_residual},
              {"argmax_x", res.argmax_x},
              {"grid_points", 4001}};
    return o;
}

std::vector<CriterionResult> run_core(std::uint64_t seed) {
    std::vector<CriterionResult> items;
    items.push_back(run_one(1, "poincare-equality", 1.0, poincare_equality));
    items.push_back(run_one(2, "lsi-equality", 1.0, lsi_equality));
    items.push_back(run_one(3, "mehler-closed-form", 1.0, mehler_closed_form));
    items.push_back(run_one(4, "sde-vs-mehler", 60.0,
                            [seed] { return sde_vs_mehler(seed); }));
    items.push_back(run_one(5, "decay-rates", 5.0, decay_rates));
    items.push_back(run_one(6, "curvature-estimates", 5.0,
                            [seed] { return curvature_estimates(seed); }));
    items.push_back(run_one(7, "gamma-identities", 5.0,
                            [seed] { return gamma_identities(seed); }));
    items.push_back(
        run_one(8, "integration-by-parts", 2.0, integration_by_parts));
    items.push_back(run_one(9, "entropy-derivative", 5.0, entropy_derivative));
    items.push_back(run_one(10, "w2-oracle-equivalence", 10.0,
                            [seed] { return w2_oracle_equivalence(seed); }));
    items.push_back(run_one(11, "talagrand-equality", 10.0,
                            [seed] { return talagrand_equality(seed); }));
    items.push_back(
        run_one(12, "monge-ampere-residual", 2.0, monge_ampere_residual));
    return items;
}

nlohmann::json items_json(const std::vector<CriterionResult>& items) {
    nlohmann::json arr = nlohmann::json::array();
    for (const CriterionResult& c : items)
        arr.push_back({{"index", c.index},
                       {"name", c.name},
                       {"pass", c.pass},
                       {"detail", c.detail},
                       {"data", c.data}});
    return arr;
}

} // namespace

bool AcceptanceSuite::all_pass() const {
    for (const CriterionResult& c : items)
        if (!c.pass) return false;
    return true;
}

bool AcceptanceSuite::runtime_ok() const {
    for (const CriterionResult& c : items)
        if (c.limit_seconds > 0.0 && c.seconds >= c.limit_seconds)
            return false;
    return true;
}

nlohmann::json AcceptanceSuite::report_json() const {
    return {{"kind", "acceptance-battery"},
            {"seed", seed},
            {"criteria", items_json(items)},
            {"all_pass", all_pass()}};
}

nlohmann::json AcceptanceSuite::meta_json() const {
    nlohmann::json durations = nlohmann::json::array();
    for (const CriterionResult& c : items)
        durations.push_back({{"index", c.index},
                             {"name", c.name},
                             {"seconds", c.seconds},
                             {"limit_seconds", c.limit_seconds},
                             {"within_budget", c.limit_seconds <= 0.0 ||
                                                   c.seconds <
                                                       c.limit_seconds}});
    return {{"timestamp_utc", iso_timestamp_utc()},
            {"durations", durations},
            {"runtime_ok", runtime_ok()}};
}

AcceptanceSuite run_acceptance_suite(std::uint64_t seed) {
    AcceptanceSuite suite;
    suite.seed = seed;
    suite.items = run_core(seed);

    // Reproducibility: a fresh pass over the deterministic battery must
    // serialize to the same bytes.
    CriterionResult rep = run_one(13, "reproducibility", 120.0, [&] {
        const std::string first = items_json(suite.items).dump(2);
        const std::string second = items_json(run_core(seed)).dump(2);
        Outcome o;
        o.pass = first == second;
        o.detail = o.pass ? "two runs serialized byte-identically"
                          : "serialized reports differ";
        o.data = {{"bytes", first.size()}, {"identical", o.pass}};
        return o;
    });
    // Budget covers the whole battery, not just the re-run.
    for (const CriterionResult& c : suite.items) rep.seconds += c.seconds;
    suite.items.push_back(std::move(rep));
    return suite;
}

} // namespace sglab
