#pragma once

#include "sglab/empirical.hpp"
#include "sglab/functionals.hpp"
#include "sglab/potential.hpp"
#include "sglab/scalar_field.hpp"
#include "sglab/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sglab {

struct TransportResult {
    double w2 = 0.0;
    double cost_sum = 0.0; // mean squared pair distance, equals w2^2
    int size_a = 0;
    int size_b = 0;
    std::string coupling_kind; // "monotone-1d" or "assignment"
    std::vector<int> pairing;  // index into b matched with a[i]

    nlohmann::json to_json() const;
};

// Exact 1-D optimal coupling by sorting; pairing maps the original index
// of each a-sample to its partner's original index in b.
TransportResult w2_sorted_1d(const std::vector<double>& a,
                             const std::vector<double>& b);

// Exact minimal-cost perfect matching under squared Euclidean cost
// (shortest-augmenting-path assignment), any dimension, n <= 2000.
TransportResult w2_assignment(const std::vector<Vec>& a,
                              const std::vector<Vec>& b);

// 1-D samples of an empirical measure as a flat list.
std::vector<double> flatten_1d(const EmpiricalMeasure& m);

enum class MapDirection { from_fgamma_to_gamma, from_gamma_to_fgamma };

// Monotone transport map T between f dgamma and gamma on a 1-D grid,
// computed by CDF inversion: T = Phi^{-1} . F forward, T = F^{-1} . Phi in
// reverse.  theta accumulates T - x, so x^2/2 + theta is the convex
// potential with T = x + theta'.  The table is extended internally well
// past the requested window so tail mass is captured; evaluation anywhere
// inside the extended range is allowed.
struct BrenierMap1D {
    std::vector<double> grid;       // requested window
    std::vector<double> map_values; // T on the window, nondecreasing
    std::vector<double> theta;      // up to an additive constant
    MapDirection direction = MapDirection::from_fgamma_to_gamma;
    double normalization = 1.0; // integral of f against gamma

    double t_at(double x) const;       // cubic interpolation of T
    double t_prime_at(double x) const; // derivative of the same interpolant
    double theta_at(double x) const;

    // Internal extended table (exposed for integration helpers).
    std::vector<double> grid_ext;
    std::vector<double> map_ext;
    std::vector<double> theta_ext;
    std::vector<double> t_prime_ext; // interpolation slopes for T
};

// f must be a strictly positive density with |integral f dgamma - 1| <
// 1e-6 (it is renormalized internally below that threshold).
BrenierMap1D brenier_map_1d(const ScalarField& f,
                            const std::vector<double>& grid,
                            MapDirection direction, int quad_order = 200);

void write_brenier_csv(const BrenierMap1D& map, const std::string& path);

struct MongeAmpereResult {
    double max_relative_residual = 0.0;
    double argmax_x = 0.0;
};

// Residual of f(x) phi(x) = T'(x) phi(T(x)) with T' by finite differences
// of the stored map values, evaluated at the given points (which must lie
// strictly inside the map's grid window).
MongeAmpereResult monge_ampere_residual_1d(const ScalarField& f,
                                           const BrenierMap1D& map,
                                           const std::vector<double>& points);

// W2^2(f dgamma, gamma) = integral of (T - x)^2 f dgamma via the map.
double w2_squared_from_map(const ScalarField& f, const BrenierMap1D& map,
                           int quad_order = 200);

// W2(f dmu, mu) <= sqrt((2/rho) Ent(f)): empirical left side (sorted
// coupling in 1-D, assignment otherwise), quadrature right side.  The
// default tolerance combines block-subsampling standard error with a
// finite-sample inflation allowance.
InequalityReport verify_talagrand(const Potential& p, double rho,
                                  const ScalarField& f, int sample_count,
                                  std::uint64_t seed, int quad_order = 0,
                                  double tolerance = -1.0);

// Talagrand bounds with rhs sqrt(2 C Ent(f)) for each density, where C is
// the log-Sobolev constant in the squared-field normalization.  With
// rho_free = true the caller supplies C; otherwise C = 2 / min_curvature
// over the box [-4, 4]^d, refusing when the curvature is not positive.
std::vector<InequalityReport> otto_villani_check(
    const Potential& p, bool rho_free, double lsi_constant,
    const std::vector<ScalarField>& densities, int sample_count,
    std::uint64_t seed, int quad_order = 0);

} // namespace sglab
