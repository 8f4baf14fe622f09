#pragma once

#include "sglab/types.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace sglab {

// Gauss-Hermite rule adapted to the standard normal weight: nodes are the
// Hermite roots rescaled by sqrt(2) so that sum_k w_k g(x_k) approximates
// the expectation of g under N(0,1); weights are normalized to sum to 1.
// Nodes come back in ascending order.
std::pair<std::vector<double>, std::vector<double>> gauss_hermite_1d(int order);

// Tensor-product rule for the standard Gaussian on R^d, d in 1..4.
struct QuadratureGrid {
    int dimension = 0;
    int order = 0; // nodes per axis
    std::vector<Vec> nodes;
    std::vector<double> weights;

    double expect(const std::function<double(const Vec&)>& g) const;
};

// order == 0 picks the per-dimension default.
QuadratureGrid gauss_hermite_grid(int dim, int order = 0);

// 40 / 40 / 20 / 12 nodes per axis for d = 1..4.
int default_quadrature_order(int dim);

} // namespace sglab
