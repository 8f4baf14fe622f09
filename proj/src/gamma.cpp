#include "sglab/gamma.hpp"

#include "sglab/rng.hpp"
#include "sglab/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sglab {

namespace {

void check_dims(const Potential& p, const ScalarField& f, const Vec& x,
                const char* where) {
    if (p.dimension != f.dimension)
        throw ConfigError(std::string(where) + ": dimension mismatch");
    require_dim(p.dimension, x.size(), where);
}

// grad(Gamma f) in closed form; valid whenever f's Hessian is available.
Vec grad_gamma_closed(const ScalarField& f, const Vec& x) {
    return 2.0 * f.hess(x) * f.grad(x);
}

} // namespace

double gamma1(const Potential& p, const ScalarField& f, const Vec& x) {
    check_dims(p, f, x, "gamma1");
    return f.grad(x).squaredNorm();
}

double gamma_bilinear(const Potential& p, const ScalarField& f,
                      const ScalarField& g, const Vec& x) {
    check_dims(p, f, x, "gamma_bilinear");
    if (g.dimension != f.dimension)
        throw ConfigError("gamma_bilinear: dimension mismatch");
    return f.grad(x).dot(g.grad(x));
}

double gamma1_definitional(const Potential& p, const ScalarField& f,
                           const Vec& x) {
    check_dims(p, f, x, "gamma1_definitional");
    const double lf2 = generator_apply(p, squared_field(f), x);
    const double lf = generator_apply(p, f, x);
    return 0.5 * (lf2 - 2.0 * f(x) * lf);
}

double gamma2(const Potential& p, const ScalarField& f, const Vec& x) {
    check_dims(p, f, x, "gamma2");
    const Mat h = f.hess(x);
    const Vec g = f.grad(x);
    return h.squaredNorm() + g.dot(p.hessian(x) * g);
}

double gamma2_iterated(const Potential& p, const ScalarField& f,
                       const Vec& x) {
    check_dims(p, f, x, "gamma2_iterated");
    const int d = p.dimension;
    const double base =
        std::cbrt(std::numeric_limits<double>::epsilon());

    // Laplacian of Gamma f as the divergence of its closed-form gradient.
    double lap = 0.0;
    Vec xp = x, xm = x;
    for (int i = 0; i < d; ++i) {
        const double step = base * (1.0 + std::abs(x[i]));
        xp[i] = x[i] + step;
        xm[i] = x[i] - step;
        lap += (grad_gamma_closed(f, xp)[i] - grad_gamma_closed(f, xm)[i]) /
               (2.0 * step);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    const double l_gamma = lap - p.gradient(x).dot(grad_gamma_closed(f, x));

    ScalarField lf = generator_field(p, f);
    const Vec grad_lf = fd_gradient(
        [&lf](const Vec& y) { return lf.value(y); }, x);
    const double gamma_f_lf = f.grad(x).dot(grad_lf);
    return 0.5 * (l_gamma - 2.0 * gamma_f_lf);
}

ChainRuleResiduals chain_rule_residuals(const Potential& p,
                                        const ScalarField& f, const Vec& x) {
    check_dims(p, f, x, "chain_rule_residuals");
    const double v = f(x);
    if (!(v > 0.0))
        throw NumericError("chain_rule_residuals: f must be positive at x");

    const ScalarField lf = log_field_fd(f); // derivatives by FD only
    const double g1 = gamma1(p, f, x);
    const double lf_val = generator_apply(p, f, x);

    ChainRuleResiduals r;
    // L(log f) = Lf/f - Gamma(f)/f^2.
    const double lhs1 = generator_apply(p, lf, x);
    r.generator_log = std::abs(lhs1 - (lf_val / v - g1 / (v * v)));

    // Gamma(log f) = Gamma(f)/f^2.
    const double lhs2 = gamma1(p, lf, x);
    r.gamma_log = std::abs(lhs2 - g1 / (v * v));

    // Gamma_2(log f) = Gamma_2(f)/f^2 - Gamma(f, Gamma f)/f^3 + Gamma(f)^2/f^4.
    const double lhs3 = gamma2(p, lf, x);
    ScalarField src = f;
    Potential pot = p;
    const Vec grad_gamma_fd = fd_gradient(
        [&pot, &src](const Vec& y) { return gamma1(pot, src, y); }, x);
    const double gamma_f_gammaf = f.grad(x).dot(grad_gamma_fd);
    const double rhs3 = gamma2(p, f, x) / (v * v) -
                        gamma_f_gammaf / (v * v * v) +
                        g1 * g1 / (v * v * v * v);
    r.gamma2_log = std::abs(lhs3 - rhs3);
    return r;
}

nlohmann::json CurvatureReport::to_json() const {
    nlohmann::json j = {{"potential", potential},
                        {"rho", rho},
                        {"verdict", holds ? "holds" : "fails"},
                        {"min_gap", min_gap},
                        {"tolerance", tolerance},
                        {"samples", sample_description}};
    if (std::isinf(n_param))
        j["n"] = "inf";
    else
        j["n"] = n_param;
    if (!holds) {
        nlohmann::json pt = nlohmann::json::array();
        for (int i = 0; i < witness_point.size(); ++i)
            pt.push_back(witness_point[i]);
        j["witness"] = {{"point", pt}, {"field", witness_field},
                        {"gap", min_gap}};
    }
    return j;
}

CurvatureReport check_cd(const Potential& p, double rho, double n_param,
                         const std::vector<ScalarField>& fields,
                         const std::vector<Vec>& points, double tol) {
    if (fields.empty()) throw ConfigError("check_cd: fields must be nonempty");
    if (points.empty()) throw ConfigError("check_cd: points must be nonempty");
    if (!(n_param > 0.0))
        throw ConfigError("check_cd: dimension parameter must be positive");

    const bool finite_n = !std::isinf(n_param);
    CurvatureReport rep;
    rep.potential = p.name;
    rep.rho = rho;
    rep.n_param = n_param;
    rep.tolerance = tol;
    rep.min_gap = std::numeric_limits<double>::infinity();
    for (const ScalarField& f : fields) {
        for (const Vec& x : points) {
            double gap = gamma2(p, f, x) - rho * gamma1(p, f, x);
            if (finite_n) {
                const double lf = generator_apply(p, f, x);
                gap -= lf * lf / n_param;
            }
            if (gap < rep.min_gap) {
                rep.min_gap = gap;
                rep.witness_point = x;
                rep.witness_field = f.name;
            }
        }
    }
    rep.holds = rep.min_gap >= -tol;
    rep.sample_description = std::to_string(fields.size()) + " fields x " +
                             std::to_string(points.size()) + " points";
    return rep;
}

std::vector<ScalarField> cd_field_catalog(int dim) {
    std::vector<ScalarField> out;
    out.push_back(make_builtin_field("linear", dim, {1.0}));
    if (dim > 1) {
        std::vector<double> alt(dim);
        for (int i = 0; i < dim; ++i) alt[i] = (i % 2 == 0) ? 1.0 : -0.5;
        out.push_back(make_builtin_field("linear", dim, alt));
    }
    out.push_back(make_builtin_field("quadratic", dim));
    out.push_back(make_builtin_field("exponential", dim, {0.5}));
    out.push_back(make_builtin_field("gauss-bump", dim, {0.5}));
    out.push_back(make_builtin_field("shifted-density", dim, {0.5}));
    return out;
}

std::vector<Vec> gaussian_point_cloud(int dim, int count, std::uint64_t seed,
                                      double clip) {
    if (count < 1) throw ConfigError("gaussian_point_cloud: count must be >= 1");
    Rng rng = Rng::substream(seed, 0x9c10ad);
    std::vector<Vec> pts;
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
        Vec x = rng.normal_vec(dim);
        for (int i = 0; i < dim; ++i)
            x[i] = std::clamp(x[i], -clip, clip);
        pts.push_back(x);
    }
    return pts;
}

} // namespace sglab
