#include "sglab/transport.hpp"

#include "sglab/normal.hpp"
#include "sglab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

namespace sglab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest-augmenting-path assignment with row/column potentials; exact
// minimal cost in O(n^3).  cost is row-major n x n.
std::vector<int> solve_assignment(const std::vector<double>& cost, int n) {
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = kInf;
            const double* row = &cost[static_cast<std::size_t>(i0 - 1) * n];
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = row[j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> match(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) match[p[j] - 1] = j - 1;
    return match;
}

std::vector<int> sorted_order(const std::vector<double>& a) {
    std::vector<int> idx(a.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&a](int i, int j) { return a[i] < a[j]; });
    return idx;
}

// Cubic Hermite evaluation on a sorted table; returns value and derivative.
struct HermiteEval {
    double value = 0.0;
    double deriv = 0.0;
};

int locate_cell(const std::vector<double>& xs, double x) {
    // last i with xs[i] <= x, clamped to a valid cell
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    int i = static_cast<int>(it - xs.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(xs.size()) - 2);
}

HermiteEval hermite_eval(const std::vector<double>& xs,
                         const std::vector<double>& ys,
                         const std::vector<double>& slopes, double x) {
    const int i = locate_cell(xs, x);
    const double h = xs[i + 1] - xs[i];
    const double s = (x - xs[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const double d00 = (6 * s2 - 6 * s) / h, d10 = (3 * s2 - 4 * s + 1) / h;
    const double d01 = (6 * s - 6 * s2) / h, d11 = (3 * s2 - 2 * s) / h;
    HermiteEval out;
    out.value = h00 * ys[i] + h10 * h * slopes[i] + h01 * ys[i + 1] +
                h11 * h * slopes[i + 1];
    out.deriv = d00 * ys[i] + d10 * h * slopes[i] + d01 * ys[i + 1] +
                d11 * h * slopes[i + 1];
    return out;
}

// Centered-difference slopes from table values, one-sided at the ends.
std::vector<double> fd_slopes(const std::vector<double>& xs,
                              const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    std::vector<double> s(n);
    for (std::size_t i = 1; i + 1 < n; ++i)
        s[i] = (ys[i + 1] - ys[i - 1]) / (xs[i + 1] - xs[i - 1]);
    s[0] = (ys[1] - ys[0]) / (xs[1] - xs[0]);
    s[n - 1] = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
    return s;
}

} // namespace

nlohmann::json TransportResult::to_json() const {
    return {{"w2", w2},
            {"cost_sum", cost_sum},
            {"sizes", {size_a, size_b}},
            {"coupling", coupling_kind}};
}

TransportResult w2_sorted_1d(const std::vector<double>& a,
                             const std::vector<double>& b) {
    if (a.empty() || a.size() != b.size())
        throw ConfigError("w2_sorted_1d: need equal nonzero sample counts");
    const std::vector<int> ia = sorted_order(a);
    const std::vector<int> ib = sorted_order(b);
    TransportResult res;
    res.size_a = static_cast<int>(a.size());
    res.size_b = static_cast<int>(b.size());
    res.coupling_kind = "monotone-1d";
    res.pairing.assign(a.size(), -1);
    double cost = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        res.pairing[ia[k]] = ib[k];
        const double d = a[ia[k]] - b[ib[k]];
        cost += d * d;
    }
    res.cost_sum = cost / a.size();
    res.w2 = std::sqrt(res.cost_sum);
    return res;
}

TransportResult w2_assignment(const std::vector<Vec>& a,
                              const std::vector<Vec>& b) {
    if (a.empty() || a.size() != b.size())
        throw ConfigError("w2_assignment: need equal nonzero sample counts");
    const int n = static_cast<int>(a.size());
    if (n > 2000)
        throw ConfigError("w2_assignment: sample count capped at 2000");
    const Eigen::Index d = a[0].size();
    for (const Vec& x : a)
        if (x.size() != d)
            throw ConfigError("w2_assignment: inconsistent dimensions");
    for (const Vec& y : b)
        if (y.size() != d)
            throw ConfigError("w2_assignment: inconsistent dimensions");

    std::vector<double> cost(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cost[static_cast<std::size_t>(i) * n + j] =
                (a[i] - b[j]).squaredNorm();

    TransportResult res;
    res.size_a = res.size_b = n;
    res.coupling_kind = "assignment";
    res.pairing = solve_assignment(cost, n);
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        total += cost[static_cast<std::size_t>(i) * n + res.pairing[i]];
    res.cost_sum = total / n;
    res.w2 = std::sqrt(res.cost_sum);
    return res;
}

std::vector<double> flatten_1d(const EmpiricalMeasure& m) {
    if (m.dimension != 1)
        throw ConfigError("flatten_1d: measure is not one-dimensional");
    std::vector<double> out;
    out.reserve(m.points.size());
    for (const Vec& x : m.points) out.push_back(x[0]);
    return out;
}

double BrenierMap1D::t_at(double x) const {
    if (x < grid_ext.front() || x > grid_ext.back())
        throw ConfigError("BrenierMap1D: evaluation outside table range");
    return hermite_eval(grid_ext, map_ext, t_prime_ext, x).value;
}

double BrenierMap1D::t_prime_at(double x) const {
    if (x < grid_ext.front() || x > grid_ext.back())
        throw ConfigError("BrenierMap1D: evaluation outside table range");
    return hermite_eval(grid_ext, map_ext, t_prime_ext, x).deriv;
}

double BrenierMap1D::theta_at(double x) const {
    if (x < grid_ext.front() || x > grid_ext.back())
        throw ConfigError("BrenierMap1D: evaluation outside table range");
    std::vector<double> slopes(grid_ext.size());
    for (std::size_t i = 0; i < grid_ext.size(); ++i)
        slopes[i] = map_ext[i] - grid_ext[i];
    return hermite_eval(grid_ext, theta_ext, slopes, x).value;
}

BrenierMap1D brenier_map_1d(const ScalarField& f,
                            const std::vector<double>& grid,
                            MapDirection direction, int quad_order) {
    if (f.dimension != 1)
        throw ConfigError("brenier_map_1d: field must be one-dimensional");
    if (!f.strictly_positive())
        throw ConfigError(
            "brenier_map_1d: density must be declared strictly positive");
    if (grid.size() < 9)
        throw ConfigError("brenier_map_1d: grid needs at least 9 points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ConfigError("brenier_map_1d: grid must increase strictly");

    ScalarField fd = f;
    Vec arg(1);
    auto fval = [&fd, &arg](double x) mutable {
        arg[0] = x;
        return fd(arg);
    };
    auto fgrad = [&fd, &arg](double x) mutable {
        arg[0] = x;
        return fd.grad(arg)[0];
    };

    const QuadratureGrid qg = gauss_hermite_grid(1, quad_order);
    double z = 0.0;
    for (std::size_t k = 0; k < qg.nodes.size(); ++k)
        z += qg.weights[k] * fval(qg.nodes[k][0]);
    if (std::abs(z - 1.0) >= 1.0e-6)
        throw ConfigError(
            "brenier_map_1d: density is not normalized (integral = " +
            std::to_string(z) + ")");

    // Extend the window until the density mass is negligible on both sides.
    std::vector<double> xs(grid.begin(), grid.end());
    const double h_lo = grid[1] - grid[0];
    const double h_hi = grid[grid.size() - 1] - grid[grid.size() - 2];
    auto dens = [&](double x) { return fval(x) * normal_pdf(x) / z; };
    {
        double x = xs.front();
        while ((std::abs(x) < 8.5 || dens(x) > 1.0e-18) && x > -15.0) {
            x -= h_lo;
            xs.insert(xs.begin(), x);
        }
        x = xs.back();
        while ((std::abs(x) < 8.5 || dens(x) > 1.0e-18) && x < 15.0) {
            x += h_hi;
            xs.push_back(x);
        }
    }

    const std::size_t n = xs.size();
    std::vector<double> d(n), dp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = xs[i];
        const double phi = normal_pdf(x);
        d[i] = fval(x) * phi / z;
        dp[i] = (fgrad(x) - x * fval(x)) * phi / z;
    }

    // Corrected trapezoid (Euler-Maclaurin) cell masses; every cell must
    // carry positive mass or the quantile is ill-defined there.
    std::vector<double> inc(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = xs[i + 1] - xs[i];
        inc[i] = 0.5 * h * (d[i] + d[i + 1]) +
                 h * h / 12.0 * (dp[i] - dp[i + 1]);
        if (!(inc[i] > 0.0))
            throw NumericError(
                "brenier_map_1d: CDF not increasing (grid too coarse)");
    }
    // Accumulate from both ends: the survival side keeps full relative
    // precision where the left-accumulated CDF saturates at 1.
    std::vector<double> cdf(n, 0.0), sur(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) cdf[i + 1] = cdf[i] + inc[i];
    for (std::size_t i = n - 1; i-- > 0;) sur[i] = sur[i + 1] + inc[i];
    const double total = cdf.back();
    if (!(total > 0.0) || !std::isfinite(total))
        throw NumericError("brenier_map_1d: degenerate CDF");
    for (double& v : cdf) v /= total;
    for (double& v : sur) v /= total;

    BrenierMap1D map;
    map.direction = direction;
    map.normalization = z;
    map.grid_ext = xs;
    map.map_ext.resize(n);
    map.t_prime_ext.resize(n);

    const double clamp_lo = 1.0e-300;
    if (direction == MapDirection::from_fgamma_to_gamma) {
        // T = Phi^{-1} . F, the quantile taken from whichever tail is
        // smaller so it keeps full relative precision.
        for (std::size_t i = 0; i < n; ++i) {
            const double p = std::max(cdf[i], clamp_lo);
            const double q = std::max(sur[i], clamp_lo);
            map.map_ext[i] =
                p <= q ? normal_quantile(p) : -normal_quantile(q);
            map.t_prime_ext[i] =
                d[i] / total / normal_pdf(map.map_ext[i]);
        }
    } else {
        // T = F^{-1} . Phi: locate the table cell, then safeguarded Newton
        // on the cubic Hermite interpolant of the CDF (its slope is the
        // tabulated density, so the interpolant is O(h^4) accurate).  For
        // x > 0 the inversion runs on the survival side for the same
        // precision reason as above.
        // -sur is increasing with derivative +density, same as the CDF.
        std::vector<double> dens_norm(n), neg_sur(n);
        for (std::size_t i = 0; i < n; ++i) {
            dens_norm[i] = d[i] / total;
            neg_sur[i] = -sur[i];
        }
        const auto invert = [&](const std::vector<double>& vals,
                                const std::vector<double>& slopes,
                                double target) {
            target = std::clamp(target, vals.front(), vals.back());
            auto it = std::upper_bound(vals.begin(), vals.end(), target);
            const int j = std::clamp(static_cast<int>(it - vals.begin()) - 1,
                                     0, static_cast<int>(n) - 2);
            double lo = xs[j], hi = xs[j + 1];
            double y = 0.5 * (lo + hi);
            for (int iter = 0; iter < 100; ++iter) {
                const HermiteEval he = hermite_eval(xs, vals, slopes, y);
                const double fy = he.value - target;
                if (fy > 0.0)
                    hi = y;
                else
                    lo = y;
                double step = y;
                if (he.deriv > 0.0) {
                    step = y - fy / he.deriv;
                    if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
                } else {
                    step = 0.5 * (lo + hi);
                }
                if (std::abs(step - y) < 1.0e-15 * (1.0 + std::abs(y))) {
                    y = step;
                    break;
                }
                y = step;
            }
            return y;
        };
        for (std::size_t i = 0; i < n; ++i) {
            const double x = xs[i];
            const double y =
                x <= 0.0
                    ? invert(cdf, dens_norm, normal_cdf(x))
                    : invert(neg_sur, dens_norm, -normal_cdf(-x));
            map.map_ext[i] = y;
            const double fy = fval(y) / (z * total);
            map.t_prime_ext[i] =
                normal_pdf(x) / std::max(fy * normal_pdf(y), 1.0e-300);
        }
    }

    // Limit slopes against the cell secants: in the far tails the clamped
    // quantile makes the closed derivative blow up, and a capped slope keeps
    // the Hermite interpolant bounded and monotone there.  Interior closed
    // slopes sit well inside the cap, so accuracy is untouched.
    for (std::size_t i = 0; i < n; ++i) {
        double cap = kInf;
        if (i > 0) {
            const double sec =
                (map.map_ext[i] - map.map_ext[i - 1]) / (xs[i] - xs[i - 1]);
            cap = std::min(cap, 3.0 * std::max(sec, 0.0));
        }
        if (i + 1 < n) {
            const double sec =
                (map.map_ext[i + 1] - map.map_ext[i]) / (xs[i + 1] - xs[i]);
            cap = std::min(cap, 3.0 * std::max(sec, 0.0));
        }
        map.t_prime_ext[i] = std::clamp(map.t_prime_ext[i], 0.0, cap);
    }

    // Monotonicity of the requested window is a hard contract.
    map.grid = grid;
    map.map_values.resize(grid.size());
    const std::size_t off = static_cast<std::size_t>(
        std::lower_bound(xs.begin(), xs.end(), grid.front() - 1.0e-12) -
        xs.begin());
    for (std::size_t i = 0; i < grid.size(); ++i)
        map.map_values[i] = map.map_ext[off + i];
    for (std::size_t i = 1; i < map.map_values.size(); ++i)
        if (!(map.map_values[i] >= map.map_values[i - 1]))
            throw NumericError(
                "brenier_map_1d: map values are not monotone (grid too "
                "coarse)");

    // theta' = T - x accumulated by the same corrected trapezoid.
    map.theta_ext.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = xs[i + 1] - xs[i];
        const double gi = map.map_ext[i] - xs[i];
        const double gi1 = map.map_ext[i + 1] - xs[i + 1];
        const double gpi = map.t_prime_ext[i] - 1.0;
        const double gpi1 = map.t_prime_ext[i + 1] - 1.0;
        map.theta_ext[i + 1] = map.theta_ext[i] + 0.5 * h * (gi + gi1) +
                               h * h / 12.0 * (gpi - gpi1);
    }
    map.theta.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        map.theta[i] = map.theta_ext[off + i];
    return map;
}

void write_brenier_csv(const BrenierMap1D& map, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << "x,T,theta\n";
    char buf[128];
    for (std::size_t i = 0; i < map.grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", map.grid[i],
                      map.map_values[i], map.theta[i]);
        out << buf;
    }
}

MongeAmpereResult monge_ampere_residual_1d(const ScalarField& f,
                                           const BrenierMap1D& map,
                                           const std::vector<double>& points) {
    if (map.direction != MapDirection::from_fgamma_to_gamma)
        throw ConfigError(
            "monge_ampere_residual_1d: map must push f dgamma onto gamma");
    if (points.empty())
        throw ConfigError("monge_ampere_residual_1d: no evaluation points");
    ScalarField fd = f;
    Vec arg(1);

    // Independent derivative: finite differences of the stored map values.
    const std::vector<double> slopes = fd_slopes(map.grid_ext, map.map_ext);

    MongeAmpereResult res;
    for (double x : points) {
        if (x < map.grid.front() || x > map.grid.back())
            throw ConfigError(
                "monge_ampere_residual_1d: point outside the map grid");
        const HermiteEval te =
            hermite_eval(map.grid_ext, map.map_ext, slopes, x);
        arg[0] = x;
        const double lhs = fd(arg) / map.normalization * normal_pdf(x);
        const double rhs = te.deriv * normal_pdf(te.value);
        const double rel = std::abs(lhs - rhs) / lhs;
        if (rel > res.max_relative_residual) {
            res.max_relative_residual = rel;
            res.argmax_x = x;
        }
    }
    return res;
}

double w2_squared_from_map(const ScalarField& f, const BrenierMap1D& map,
                           int quad_order) {
    ScalarField fd = f;
    Vec arg(1);
    const QuadratureGrid qg = gauss_hermite_grid(1, quad_order);
    double acc = 0.0;
    for (std::size_t k = 0; k < qg.nodes.size(); ++k) {
        const double x = qg.nodes[k][0];
        // Nodes beyond the extended table carry negligible mass.
        if (x < map.grid_ext.front() || x > map.grid_ext.back()) continue;
        const double disp = map.t_at(x) - x;
        double w = qg.weights[k] * disp * disp;
        if (map.direction == MapDirection::from_fgamma_to_gamma) {
            arg[0] = x;
            w *= fd(arg) / map.normalization;
        }
        acc += w;
    }
    return acc;
}

namespace {

InequalityReport talagrand_core(const Potential& p, const ScalarField& f,
                                double coefficient, const char* kind,
                                int sample_count, std::uint64_t seed,
                                int quad_order, double tolerance) {
    if (!p.normalizable)
        throw ConfigError("verify_talagrand: potential '" + p.name +
                          "' has no invariant probability measure");
    if (p.dimension != f.dimension)
        throw ConfigError("verify_talagrand: dimension mismatch");
    if (!f.strictly_positive())
        throw ConfigError(
            "verify_talagrand: density must be declared strictly positive");
    if (sample_count < 20)
        throw ConfigError("verify_talagrand: need at least 20 samples");
    if (p.dimension > 1 && sample_count > 2000)
        throw ConfigError(
            "verify_talagrand: assignment backend caps samples at 2000 "
            "above one dimension");

    const int order =
        quad_order > 0 ? quad_order : default_quadrature_order(p.dimension);
    const Measure m = Measure::mu(p, gauss_hermite_grid(p.dimension, order));
    const double mass = m.expect([&f](const Vec& x) { return f(x); });
    if (std::abs(mass - 1.0) > 1e-6)
        throw ConfigError("verify_talagrand: density is not normalized "
                          "(integral = " + std::to_string(mass) + ")");
    const double ent = entropy(m, f) / mass;

    const EmpiricalMeasure ea = sample_density(p, f, sample_count, seed);
    const EmpiricalMeasure eb = sample_invariant(p, sample_count, seed + 1);

    auto w2_between = [&](const std::vector<Vec>& xs,
                          const std::vector<Vec>& ys) {
        if (p.dimension == 1) {
            std::vector<double> a, b;
            a.reserve(xs.size());
            b.reserve(ys.size());
            for (const Vec& x : xs) a.push_back(x[0]);
            for (const Vec& y : ys) b.push_back(y[0]);
            return w2_sorted_1d(a, b).w2;
        }
        return w2_assignment(xs, ys).w2;
    };

    const double w2_full = w2_between(ea.points, eb.points);

    // Block subsampling: standard error plus a finite-sample bias
    // allowance.  Blocks are 10x smaller, so with the slowest realistic
    // bias decay ~ n^{-1/4} the full-sample bias is (mean_block - full) /
    // (10^{1/4} - 1) ~ 1.29 (mean_block - full); 1.3 rounds that up.
    const int blocks = 10;
    std::vector<double> block_w2;
    for (int k = 0; k < blocks; ++k) {
        std::vector<Vec> xa, xb;
        for (std::size_t i = k; i < ea.points.size(); i += blocks)
            xa.push_back(ea.points[i]);
        for (std::size_t i = k; i < eb.points.size(); i += blocks)
            xb.push_back(eb.points[i]);
        if (xa.size() != xb.size()) {
            const std::size_t sz = std::min(xa.size(), xb.size());
            xa.resize(sz);
            xb.resize(sz);
        }
        if (xa.size() >= 2) block_w2.push_back(w2_between(xa, xb));
    }
    double se = 0.0, inflation = 0.0;
    if (block_w2.size() >= 2) {
        double mean = 0.0;
        for (double v : block_w2) mean += v;
        mean /= block_w2.size();
        double ss = 0.0;
        for (double v : block_w2) ss += (v - mean) * (v - mean);
        se = std::sqrt(ss / (block_w2.size() - 1.0) / block_w2.size());
        inflation = std::max(0.0, mean - w2_full);
    }

    InequalityReport rep;
    rep.kind = kind;
    rep.constant_used = coefficient;
    rep.lhs = w2_full;
    rep.rhs = std::sqrt(std::max(0.0, coefficient * ent));
    rep.slack = rep.rhs - rep.lhs;
    rep.tolerance =
        tolerance >= 0.0 ? tolerance : 3.0 * se + 1.3 * inflation + 1.0e-8;
    rep.holds = rep.slack >= -rep.tolerance;
    rep.inputs = {{"potential",
                   {{"name", p.name},
                    {"params", p.params},
                    {"dimension", p.dimension}}},
                  {"field", {{"name", f.name}, {"params", f.params}}},
                  {"entropy", ent},
                  {"entropy_measure", m.description()},
                  {"sample_count", sample_count},
                  {"seed", seed},
                  {"sample_sources", {ea.source, eb.source}},
                  {"block_se", se},
                  {"block_inflation", inflation}};
    return rep;
}

} // namespace

InequalityReport verify_talagrand(const Potential& p, double rho,
                                  const ScalarField& f, int sample_count,
                                  std::uint64_t seed, int quad_order,
                                  double tolerance) {
    if (!(rho > 0.0)) throw ConfigError("verify_talagrand: rho must be > 0");
    InequalityReport rep = talagrand_core(p, f, 2.0 / rho, "talagrand",
                                          sample_count, seed, quad_order,
                                          tolerance);
    rep.inputs["rho"] = rho;
    return rep;
}

std::vector<InequalityReport> otto_villani_check(
    const Potential& p, bool rho_free, double lsi_constant,
    const std::vector<ScalarField>& densities, int sample_count,
    std::uint64_t seed, int quad_order) {
    double c = lsi_constant;
    if (!rho_free) {
        const double rho_hat = min_curvature(p, -4.0, 4.0, 401);
        if (!(rho_hat > 0.0))
            throw ConfigError(
                "otto_villani_check: potential '" + p.name +
                "' has no positive curvature certificate on [-4,4]; the "
                "bound needs a log-Sobolev constant, pass one explicitly");
        c = 2.0 / rho_hat;
    }
    if (!(c > 0.0))
        throw ConfigError(
            "otto_villani_check: rho_free requires a positive lsi_constant");

    std::vector<InequalityReport> out;
    out.reserve(densities.size());
    for (std::size_t i = 0; i < densities.size(); ++i) {
        InequalityReport rep =
            talagrand_core(p, densities[i], 2.0 * c, "otto-villani",
                           sample_count, seed + 101 * i, quad_order, -1.0);
        rep.inputs["lsi_constant"] = c;
        rep.inputs["constant_source"] =
            rho_free ? "user-supplied" : "min_curvature on [-4,4]";
        out.push_back(std::move(rep));
    }
    return out;
}

} // namespace sglab
