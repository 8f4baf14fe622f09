#include "sglab/empirical.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sglab {

namespace {

// Substream tags keep the different samplers decorrelated under one seed.
constexpr std::uint64_t kTagDirect = 0x11;
constexpr std::uint64_t kTagLangevin = 0x22;

void check_count(int count) {
    if (count < 1) throw ConfigError("sample count must be >= 1");
}

void check_state(const Vec& x, long step) {
    if (!x.allFinite() || x.norm() > 1.0e8)
        throw NumericError("langevin chain diverged at step " +
                           std::to_string(step));
}

} // namespace

EmpiricalMeasure sample_gaussian(int dim, int count, std::uint64_t seed) {
    check_count(count);
    EmpiricalMeasure m;
    m.dimension = dim;
    m.seed = seed;
    m.source = "direct-gaussian";
    m.points.reserve(count);
    Rng rng = Rng::substream(seed, kTagDirect);
    for (int k = 0; k < count; ++k) m.points.push_back(rng.normal_vec(dim));
    return m;
}

EmpiricalMeasure sample_shifted_gaussian(const Vec& mean, int count,
                                         std::uint64_t seed) {
    check_count(count);
    EmpiricalMeasure m;
    m.dimension = static_cast<int>(mean.size());
    m.seed = seed;
    m.source = "direct-shifted-gaussian";
    m.points.reserve(count);
    Rng rng = Rng::substream(seed, kTagDirect);
    for (int k = 0; k < count; ++k)
        m.points.push_back(Vec(mean + rng.normal_vec(m.dimension)));
    return m;
}

EmpiricalMeasure sample_langevin(const Potential& p, int count,
                                 std::uint64_t seed,
                                 const LangevinOptions& opt) {
    check_count(count);
    if (!(opt.step > 0.0)) throw ConfigError("langevin step must be positive");
    if (opt.burn_in < 0 || opt.thinning < 1)
        throw ConfigError("langevin burn_in must be >= 0 and thinning >= 1");
    EmpiricalMeasure m;
    m.dimension = p.dimension;
    m.seed = seed;
    m.source = "langevin[" + p.name + "]";
    m.points.reserve(count);
    Rng rng = Rng::substream(seed, kTagLangevin);
    const double noise = std::sqrt(2.0 * opt.step);
    Vec x = Vec::Zero(p.dimension);
    long step = 0;
    auto advance = [&] {
        x += -opt.step * p.gradient(x) + noise * rng.normal_vec(p.dimension);
        check_state(x, ++step);
    };
    for (int k = 0; k < opt.burn_in; ++k) advance();
    for (int k = 0; k < count; ++k) {
        for (int j = 0; j < opt.thinning; ++j) advance();
        m.points.push_back(x);
    }
    return m;
}

EmpiricalMeasure sample_invariant(const Potential& p, int count,
                                  std::uint64_t seed,
                                  const LangevinOptions& opt) {
    if (!p.normalizable)
        throw ConfigError("potential '" + p.name +
                          "' has no invariant probability measure");
    if (p.name == "gaussian") return sample_gaussian(p.dimension, count, seed);
    if (p.name == "scaled-gaussian") {
        EmpiricalMeasure m = sample_gaussian(p.dimension, count, seed);
        const double s = 1.0 / std::sqrt(p.params.at(0));
        for (Vec& x : m.points) x *= s;
        m.source = "direct-scaled-gaussian";
        return m;
    }
    return sample_langevin(p, count, seed, opt);
}

Potential tilt_potential(const Potential& p, const ScalarField& density) {
    if (p.dimension != density.dimension)
        throw ConfigError("tilt_potential: dimension mismatch");
    if (!density.strictly_positive())
        throw ConfigError("tilt_potential: density must be strictly positive");
    Potential t;
    t.dimension = p.dimension;
    t.name = p.name + " - log(" + density.name + ")";
    ScalarField f = density;
    Potential base = p;
    t.value = [base, f](const Vec& x) { return base.value(x) - std::log(f(x)); };
    t.gradient = [base, f](const Vec& x) {
        return Vec(base.gradient(x) - f.grad(x) / f(x));
    };
    t.hessian = [base, f](const Vec& x) {
        const double v = f(x);
        const Vec g = f.grad(x);
        return Mat(base.hessian(x) - f.hess(x) / v +
                   g * g.transpose() / (v * v));
    };
    return t;
}

EmpiricalMeasure sample_density(const Potential& p, const ScalarField& f,
                                int count, std::uint64_t seed,
                                const LangevinOptions& opt) {
    if (!p.normalizable)
        throw ConfigError("potential '" + p.name +
                          "' has no invariant probability measure");
    if (p.dimension != f.dimension)
        throw ConfigError("sample_density: dimension mismatch");
    if (p.name == "gaussian" && f.name == "shifted-density") {
        // f dgamma is again a unit Gaussian, centered at the shift.
        Vec mean(p.dimension);
        if (f.params.size() == 1)
            mean.setConstant(f.params[0]);
        else
            mean = Eigen::Map<const Vec>(f.params.data(), p.dimension);
        EmpiricalMeasure m = sample_shifted_gaussian(mean, count, seed);
        m.source = "direct-shifted-gaussian[m]";
        return m;
    }
    EmpiricalMeasure m = sample_langevin(tilt_potential(p, f), count, seed, opt);
    m.source = "langevin[" + p.name + ", density " + f.name + "]";
    return m;
}

void write_points_csv(const EmpiricalMeasure& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    for (int i = 0; i < m.dimension; ++i)
        out << (i ? ",x" : "x") << (i + 1);
    out << "\n";
    char buf[40];
    for (const Vec& x : m.points) {
        for (int i = 0; i < m.dimension; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", x[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
}

EmpiricalMeasure read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("'" + path + "': empty file");
    int dim = 1;
    for (char c : line)
        if (c == ',') ++dim;

    EmpiricalMeasure m;
    m.dimension = dim;
    m.source = "file:" + path;
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::stringstream ss(line);
        Vec x(dim);
        std::string cell;
        for (int i = 0; i < dim; ++i) {
            if (!std::getline(ss, cell, ','))
                throw ConfigError("'" + path + "': short row " +
                                  std::to_string(row));
            try {
                x[i] = std::stod(cell);
            } catch (const std::exception&) {
                throw ConfigError("'" + path + "': bad number in row " +
                                  std::to_string(row));
            }
        }
        if (std::getline(ss, cell, ','))
            throw ConfigError("'" + path + "': extra column in row " +
                              std::to_string(row));
        m.points.push_back(x);
    }
    if (m.points.empty())
        throw ConfigError("'" + path + "': no data rows");
    return m;
}

} // namespace sglab
