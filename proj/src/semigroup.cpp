#include "sglab/semigroup.hpp"

#include "sglab/functionals.hpp"
#include "sglab/measure.hpp"
#include "sglab/rng.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace sglab {

namespace {

constexpr std::uint64_t kSdeIndexBase = 0x53de000000000000ULL;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_time(double t) {
    if (!(t >= 0.0)) throw ConfigError("evolution time must be >= 0");
}

// Drift coefficient for the linear fast path; negative when the potential
// is not of the Gaussian family.
double linear_drift_rho(const Potential& p) {
    if (p.name == "gaussian") return 1.0;
    if (p.name == "scaled-gaussian") return p.params.at(0);
    return -1.0;
}

struct Welford {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v) {
        ++n;
        const double d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
    }
    double se() const {
        if (n < 2) return 0.0;
        return std::sqrt(m2 / (n - 1.0) / n);
    }
};

void check_path_state(const Vec& x, double t_now) {
    for (int i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]))
            throw NumericError("sde path diverged near t = " +
                               std::to_string(t_now));
}

// Advances one path from t_prev to t_next in place.
void advance_path(const Potential& p, Vec& x, double t_prev, double t_next,
                  const SdeOptions& opt, double rho_linear, Rng& rng) {
    const double dt = t_next - t_prev;
    if (dt <= 0.0) return;
    const int d = static_cast<int>(x.size());
    if (opt.scheme == SdeScheme::exact_ou) {
        // Exact transition of the linear-drift diffusion.
        const double rho = rho_linear;
        const double decay = std::exp(-rho * dt);
        const double sd = std::sqrt((1.0 - decay * decay) / rho);
        for (int i = 0; i < d; ++i) x[i] = decay * x[i] + sd * rng.normal();
        return;
    }
    const double h = opt.step;
    long full = static_cast<long>(std::floor(dt / h + 1.0e-12));
    double rem = dt - full * h;
    if (rem < 1.0e-12 * std::max(1.0, t_next)) rem = 0.0;
    auto one_step = [&](double hh) {
        const double noise = std::sqrt(2.0 * hh);
        if (rho_linear > 0.0) {
            const double shrink = 1.0 - hh * rho_linear;
            for (int i = 0; i < d; ++i)
                x[i] = shrink * x[i] + noise * rng.normal();
        } else {
            const Vec g = p.gradient(x);
            for (int i = 0; i < d; ++i)
                x[i] += -hh * g[i] + noise * rng.normal();
        }
    };
    for (long k = 0; k < full; ++k) one_step(h);
    if (rem > 0.0) one_step(rem);
    check_path_state(x, t_next);
}

} // namespace

double mehler_apply(const ScalarField& f, double t, const Vec& x,
                    const QuadratureGrid& grid) {
    check_time(t);
    if (f.dimension != grid.dimension)
        throw ConfigError("mehler_apply: field/grid dimension mismatch");
    require_dim(f.dimension, x.size(), "mehler_apply");
    if (t == 0.0) return f(x);
    const double decay = std::exp(-t);
    const double spread = std::sqrt(1.0 - decay * decay);
    Vec z(x.size());
    return grid.expect([&](const Vec& y) {
        z = decay * x + spread * y;
        return f(z);
    });
}

ScalarField mehler_field(const ScalarField& f, double t, int order) {
    check_time(t);
    if (t == 0.0) return f;
    auto grid = std::make_shared<const QuadratureGrid>(
        gauss_hermite_grid(f.dimension, order));
    const double decay = std::exp(-t);
    const double spread = std::sqrt(1.0 - decay * decay);
    const int d = f.dimension;

    ScalarField out;
    out.dimension = d;
    out.name = "P_t[" + f.name + ", t=" + std::to_string(t) + "]";
    out.positivity = f.positivity;
    ScalarField base = f;
    out.value = [base, grid, decay, spread](const Vec& x) {
        Vec z(x.size());
        double acc = 0.0;
        for (std::size_t k = 0; k < grid->nodes.size(); ++k) {
            z = decay * x + spread * grid->nodes[k];
            acc += grid->weights[k] * base.value(z);
        }
        return acc;
    };
    // Commutation: grad P_t f = e^{-t} P_t grad f, and twice for the Hessian.
    out.gradient = [base, grid, decay, spread, d](const Vec& x) {
        Vec z(x.size());
        Vec acc = Vec::Zero(d);
        for (std::size_t k = 0; k < grid->nodes.size(); ++k) {
            z = decay * x + spread * grid->nodes[k];
            acc += grid->weights[k] * base.grad(z);
        }
        return Vec(decay * acc);
    };
    out.hessian = [base, grid, decay, spread, d](const Vec& x) {
        Vec z(x.size());
        Mat acc = Mat::Zero(d, d);
        for (std::size_t k = 0; k < grid->nodes.size(); ++k) {
            z = decay * x + spread * grid->nodes[k];
            acc += grid->weights[k] * base.hess(z);
        }
        return Mat(decay * decay * acc);
    };
    return out;
}

double generator_apply(const Potential& p, const ScalarField& f,
                       const Vec& x) {
    if (p.dimension != f.dimension)
        throw ConfigError("generator_apply: dimension mismatch");
    return f.hess(x).trace() - p.gradient(x).dot(f.grad(x));
}

ScalarField generator_field(const Potential& p, const ScalarField& f) {
    if (p.dimension != f.dimension)
        throw ConfigError("generator_field: dimension mismatch");
    ScalarField out;
    out.dimension = f.dimension;
    out.name = "L[" + f.name + "]";
    ScalarField base = f;
    Potential pot = p;
    out.value = [pot, base](const Vec& x) {
        return generator_apply(pot, base, x);
    };
    return out;
}

SdeEstimate sde_evolve(const Potential& p, const ScalarField& f, double t,
                       const Vec& x0, const SdeOptions& opt) {
    check_time(t);
    if (opt.paths < 1) throw ConfigError("sde_evolve: paths must be >= 1");
    if (!(opt.step > 0.0)) throw ConfigError("sde_evolve: step must be > 0");
    if (p.dimension != f.dimension)
        throw ConfigError("sde_evolve: dimension mismatch");
    require_dim(p.dimension, x0.size(), "sde_evolve");
    const double rho_linear = linear_drift_rho(p);
    if (opt.scheme == SdeScheme::exact_ou && rho_linear <= 0.0)
        throw ConfigError(
            "sde_evolve: exact transition requires a Gaussian-family potential");

    Welford acc;
    Vec x(p.dimension);
    for (int j = 0; j < opt.paths; ++j) {
        Rng rng = Rng::substream(opt.seed, kSdeIndexBase + j);
        x = x0;
        advance_path(p, x, 0.0, t, opt, rho_linear, rng);
        acc.add(f(x));
    }
    return {acc.mean, acc.se(), opt.paths, t};
}

EvolutionTrace evolve_trace(const Potential& p, const ScalarField& f,
                            const std::vector<double>& times,
                            const std::vector<Vec>& evaluation_points,
                            const EvolveOptions& opt) {
    if (times.empty() || times.front() != 0.0)
        throw ConfigError("evolve_trace: times must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ConfigError("evolve_trace: times must increase strictly");
    if (p.dimension != f.dimension)
        throw ConfigError("evolve_trace: dimension mismatch");

    bool track_entropy = f.strictly_positive();
    if (opt.entropy == EntropyMode::required && !track_entropy)
        throw ConfigError(
            "evolve_trace: entropy requested for a field without declared "
            "positivity");
    if (opt.entropy == EntropyMode::off) track_entropy = false;

    const std::size_t nt = times.size();
    const std::size_t np = evaluation_points.size();
    EvolutionTrace tr;
    tr.times = times;
    tr.evaluation_points = evaluation_points;
    tr.values.assign(nt, std::vector<double>(np, 0.0));
    tr.variance.assign(nt, kNaN);
    tr.entropy.assign(nt, kNaN);
    tr.fisher.assign(nt, kNaN);
    tr.field = f.name;
    tr.potential = p.name;

    if (opt.method == EvolveMethod::mehler) {
        if (p.name != "gaussian")
            throw ConfigError(
                "evolve_trace: the mehler method requires the gaussian "
                "potential");
        tr.method = "mehler";
        tr.meta = {{"order", opt.order == 0
                                 ? default_quadrature_order(f.dimension)
                                 : opt.order}};
        const QuadratureGrid grid =
            gauss_hermite_grid(f.dimension, opt.order);
        const Measure m = Measure::gamma(grid);
        for (std::size_t i = 0; i < nt; ++i) {
            const ScalarField ft =
                (times[i] == 0.0) ? f : mehler_field(f, times[i], opt.order);
            for (std::size_t j = 0; j < np; ++j)
                tr.values[i][j] = ft(evaluation_points[j]);
            if (opt.functional_track) {
                tr.variance[i] = variance(m, ft);
                if (track_entropy) {
                    tr.entropy[i] = entropy(m, ft);
                    tr.fisher[i] = fisher(m, ft);
                }
            }
        }
        return tr;
    }

    // SDE method: one bundle of paths per start point, advanced through all
    // requested times.  The functional track restarts bundles at the
    // quadrature nodes; its variance is first-order debiased for the inner
    // Monte-Carlo noise, and Fisher information is not estimated.
    tr.method = opt.sde.scheme == SdeScheme::exact_ou ? "sde-exact" : "sde-euler";
    tr.meta = {{"paths", opt.sde.paths},
               {"step", opt.sde.step},
               {"seed", opt.sde.seed},
               {"scheme", tr.method}};
    const double rho_linear = linear_drift_rho(p);
    if (opt.sde.scheme == SdeScheme::exact_ou && rho_linear <= 0.0)
        throw ConfigError(
            "evolve_trace: exact transition requires a Gaussian-family "
            "potential");
    tr.value_se.assign(nt, std::vector<double>(np, 0.0));

    auto run_bundles = [&](const std::vector<Vec>& starts,
                           std::vector<std::vector<double>>& mean_out,
                           std::vector<std::vector<double>>& se_out,
                           std::uint64_t seed_salt) {
        const std::size_t ns = starts.size();
        std::vector<std::vector<Welford>> acc(nt, std::vector<Welford>(ns));
        Vec x(p.dimension);
        for (std::size_t s = 0; s < ns; ++s) {
            for (int j = 0; j < opt.sde.paths; ++j) {
                Rng rng = Rng::substream(
                    opt.sde.seed,
                    kSdeIndexBase + seed_salt + s * 0x100000000ULL + j);
                x = starts[s];
                double t_prev = 0.0;
                for (std::size_t i = 0; i < nt; ++i) {
                    advance_path(p, x, t_prev, times[i], opt.sde, rho_linear,
                                 rng);
                    t_prev = times[i];
                    acc[i][s].add(f(x));
                }
            }
        }
        mean_out.assign(nt, std::vector<double>(ns, 0.0));
        se_out.assign(nt, std::vector<double>(ns, 0.0));
        for (std::size_t i = 0; i < nt; ++i)
            for (std::size_t s = 0; s < ns; ++s) {
                mean_out[i][s] = acc[i][s].mean;
                se_out[i][s] = acc[i][s].se();
            }
    };

    if (np > 0) run_bundles(evaluation_points, tr.values, tr.value_se, 0);

    if (opt.functional_track) {
        const QuadratureGrid grid =
            gauss_hermite_grid(f.dimension, opt.order);
        std::vector<std::vector<double>> node_mean, node_se;
        run_bundles(grid.nodes, node_mean, node_se, 0x8000000000ULL);
        for (std::size_t i = 0; i < nt; ++i) {
            double mean = 0.0;
            for (std::size_t k = 0; k < grid.nodes.size(); ++k)
                mean += grid.weights[k] * node_mean[i][k];
            double var = 0.0, bias = 0.0;
            bool positive = true;
            double ent = 0.0;
            for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
                const double w = grid.weights[k];
                const double v = node_mean[i][k];
                var += w * (v - mean) * (v - mean);
                bias += w * (1.0 - w) * node_se[i][k] * node_se[i][k];
                if (v <= 0.0) positive = false;
            }
            tr.variance[i] = std::max(0.0, var - bias);
            if (track_entropy && positive && mean > 0.0) {
                for (std::size_t k = 0; k < grid.nodes.size(); ++k)
                    ent += grid.weights[k] * node_mean[i][k] *
                           std::log(node_mean[i][k]);
                tr.entropy[i] = ent - mean * std::log(mean);
            }
        }
    }
    return tr;
}

} // namespace sglab
