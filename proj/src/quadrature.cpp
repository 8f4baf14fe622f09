#include "sglab/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace sglab {

std::pair<std::vector<double>, std::vector<double>> gauss_hermite_1d(int order) {
    if (order < 1 || order > 1024)
        throw ConfigError("gauss_hermite_1d: order must be in [1, 1024]");
    std::vector<double> x(order), w(order);
    if (order == 1) {
        x = {0.0};
        w = {1.0};
        return {x, w};
    }
    // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the
    // Hermite recurrence (physicists' weight e^{-x^2}: diagonal 0,
    // off-diagonal sqrt(j/2)); weights are the squared first eigenvector
    // components, which already sum to 1.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order - 1);
    for (int j = 1; j < order; ++j) sub[j - 1] = std::sqrt(0.5 * j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw NumericError("gauss_hermite_1d: eigensolver failed");
    for (int i = 0; i < order; ++i) {
        x[i] = es.eigenvalues()[i]; // ascending
        const double v0 = es.eigenvectors()(0, i);
        w[i] = v0 * v0;
    }
    // Enforce the exact symmetry of the rule, then rescale the nodes to
    // the N(0,1) weight.
    for (int i = 0; i < order / 2; ++i) {
        const int j = order - 1 - i;
        const double mag = 0.5 * (x[j] - x[i]);
        x[i] = -mag;
        x[j] = mag;
        const double wm = 0.5 * (w[i] + w[j]);
        w[i] = wm;
        w[j] = wm;
    }
    if (order % 2 == 1) x[order / 2] = 0.0;
    const double sqrt2 = std::sqrt(2.0);
    double wsum = 0.0;
    for (double v : w) wsum += v;
    for (int i = 0; i < order; ++i) {
        x[i] *= sqrt2;
        w[i] /= wsum;
    }
    return {x, w};
}

int default_quadrature_order(int dim) {
    switch (dim) {
        case 1: return 40;
        case 2: return 40;
        case 3: return 20;
        case 4: return 12;
        default:
            throw ConfigError("quadrature grids support dimensions 1 to 4");
    }
}

QuadratureGrid gauss_hermite_grid(int dim, int order) {
    if (dim < 1 || dim > 4)
        throw ConfigError("quadrature grids support dimensions 1 to 4");
    if (order == 0) order = default_quadrature_order(dim);
    if (order < 2)
        throw ConfigError("gauss_hermite_grid: order must be >= 2");
    double total = std::pow(static_cast<double>(order), dim);
    if (total > 4.0e6)
        throw ConfigError("gauss_hermite_grid: tensor grid too large");

    auto [x1, w1] = gauss_hermite_1d(order);
    QuadratureGrid grid;
    grid.dimension = dim;
    grid.order = order;
    const std::size_t count = static_cast<std::size_t>(total);
    grid.nodes.reserve(count);
    grid.weights.reserve(count);
    std::vector<int> idx(dim, 0);
    Vec node(dim);
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < dim; ++i) {
            node[i] = x1[idx[i]];
            w *= w1[idx[i]];
        }
        grid.nodes.push_back(node);
        grid.weights.push_back(w);
        int i = 0;
        while (i < dim && ++idx[i] == order) idx[i++] = 0;
        if (i == dim) break;
    }
    return grid;
}

double QuadratureGrid::expect(const std::function<double(const Vec&)>& g) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double v = g(nodes[k]);
        if (!std::isfinite(v))
            throw NumericError("quadrature: non-finite integrand at node " +
                               std::to_string(k));
        acc += weights[k] * v;
    }
    return acc;
}

} // namespace sglab
