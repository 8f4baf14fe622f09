#pragma once

#include "sglab/potential.hpp"
#include "sglab/scalar_field.hpp"
#include "sglab/types.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace sglab {

// Gamma(f)(x) = |grad f(x)|^2.
double gamma1(const Potential& p, const ScalarField& f, const Vec& x);

// Bilinear form Gamma(f,g)(x) = grad f . grad g.
double gamma_bilinear(const Potential& p, const ScalarField& f,
                      const ScalarField& g, const Vec& x);

// The defining route 1/2 (L(f^2) - 2 f Lf), assembled from the generator
// applied to the squared field; agrees with gamma1 up to roundoff.
double gamma1_definitional(const Potential& p, const ScalarField& f,
                           const Vec& x);

// Gamma_2(f)(x) = ||Hess f||_HS^2 + <grad f, Hess V grad f>.
double gamma2(const Potential& p, const ScalarField& f, const Vec& x);

// The defining route 1/2 (L(Gamma f) - 2 Gamma(f, Lf)).  L(Gamma f) takes
// the divergence of the closed-form grad(Gamma f) = 2 Hess f grad f by
// finite differences, and grad(Lf) is a finite difference of generator
// values, so no derivative of Hess V is ever consulted.
double gamma2_iterated(const Potential& p, const ScalarField& f, const Vec& x);

// Residuals of the change-of-variables identities for log f.  The left
// sides evaluate log f with finite-difference derivatives only; the right
// sides use f's closed forms (grad(Gamma f) again by finite differences of
// Gamma-f values).
struct ChainRuleResiduals {
    double generator_log = 0.0; // |L(log f) - (Lf/f - Gamma(f)/f^2)|
    double gamma_log = 0.0;     // |Gamma(log f) - Gamma(f)/f^2|
    double gamma2_log = 0.0;    // |Gamma_2(log f) - (...)| per the lemma
};
ChainRuleResiduals chain_rule_residuals(const Potential& p,
                                        const ScalarField& f, const Vec& x);

struct CurvatureReport {
    std::string potential;
    double rho = 0.0;
    double n_param = 0.0; // infinity for the dimension-free condition
    bool holds = false;
    double min_gap = 0.0;
    double tolerance = 0.0;
    Vec witness_point;
    std::string witness_field;
    std::string sample_description;

    nlohmann::json to_json() const;
};

// Sampled curvature-dimension check: gap(f, x) =
// Gamma_2(f) - rho Gamma(f) - (1/n)(Lf)^2 (last term dropped at n = inf)
// over all (field, point) pairs; holds iff min gap >= -tol.
CurvatureReport check_cd(const Potential& p, double rho, double n_param,
                         const std::vector<ScalarField>& fields,
                         const std::vector<Vec>& points, double tol = 1.0e-9);

// Moderate-parameter probe battery for check_cd.
std::vector<ScalarField> cd_field_catalog(int dim);

// Standard-normal cloud with coordinates clipped to [-clip, clip].
std::vector<Vec> gaussian_point_cloud(int dim, int count, std::uint64_t seed,
                                      double clip = 3.0);

} // namespace sglab
