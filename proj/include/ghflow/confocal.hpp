#ifndef GHFLOW_CONFOCAL_HPP
#define GHFLOW_CONFOCAL_HPP

#include <array>
#include <cmath>

#include "ghflow/linalg.hpp"

namespace ghflow {

/// The three real constants lambda1 <= lambda2 <= lambda3 (length^2 units)
/// defining a confocal family of quadrics
///   x^2/(t - lambda1) + y^2/(t - lambda2) + z^2/(t - lambda3) = 1.
struct FocalTriple {
    double l1 = 0.0, l2 = 0.0, l3 = 0.0;

    double span() const { return l3 - l1; }
    bool ordered() const { return l1 <= l2 && l2 <= l3; }
    bool strictly_ordered() const { return l1 < l2 && l2 < l3; }
    bool flat() const { return l1 == l2 && l2 == l3; }
    /// Two-coincident-constant degeneration with real centres on the x axis.
    bool two_centre() const { return l1 < l2 && l2 == l3; }
};

/// Ellipsoidal coordinates interlaced with the focal constants,
///   lambda1 <= nu <= lambda2 <= mu <= lambda3 <= lambda,
/// together with the octant sign selectors that make the chart total on R^3.
struct EllipsoidalPoint {
    double lambda = 0.0, mu = 0.0, nu = 0.0;
    std::array<int, 3> signs {1, 1, 1};
};

struct CartesianPoint {
    double x = 0.0, y = 0.0, z = 0.0;

    double r2() const { return x * x + y * y + z * z; }
    double r() const { return std::sqrt(r2()); }
    Vec3 vec() const { return {x, y, z}; }
};

inline CartesianPoint make_point(const Vec3& v) { return {v.x, v.y, v.z}; }

/// Diagonal coefficients h_xi of the flat metric in ellipsoidal coordinates,
/// ds^2 = h_lambda^2 dlambda^2 + h_mu^2 dmu^2 + h_nu^2 dnu^2.
struct ScaleFactors {
    double h_lambda = 0.0, h_mu = 0.0, h_nu = 0.0;
};

namespace confocal {

/// Boundary proximity flags produced by the inverse transform, one per
/// coordinate in (lambda, mu, nu) order.
struct InverseResult {
    EllipsoidalPoint point;
    std::array<bool, 3> boundary {false, false, false};

    bool any_boundary() const { return boundary[0] || boundary[1] || boundary[2]; }
};

struct Cubic {
    double value;       ///< Q(t)  = (t-l1)(t-l2)(t-l3)
    double derivative;  ///< Q'(t)
};

/// Roots within tol*(span) of an interval endpoint raise the boundary flag.
inline constexpr double kBoundaryTol = 1e-10;

/// The cubic shared by the three branch radicals, evaluated in factored form.
Cubic cubic(double t, const FocalTriple& f);

/// R(lambda) = sqrt(Q), valid on the lambda branch where Q >= 0.
double radical_lambda(double lambda, const FocalTriple& f);
/// S(mu) = sqrt(-Q), valid on the mu branch where Q <= 0.
double radical_mu(double mu, const FocalTriple& f);
/// T(nu) = sqrt(Q), valid on the nu branch where Q >= 0.
double radical_nu(double nu, const FocalTriple& f);

/// Forward transform. Magnitudes come from the product formulas of the
/// confocal chart; signs from p.signs. Requires a strictly ordered triple and
/// interlacing within tolerance.
CartesianPoint to_cartesian(const EllipsoidalPoint& p, const FocalTriple& f);

/// Inverse transform by per-interval root isolation of the monic cubic
///   P(t) = Q(t) - x^2 (t-l2)(t-l3) - y^2 (t-l1)(t-l3) - z^2 (t-l1)(t-l2),
/// bisection to a short bracket followed by safeguarded Newton. Total on R^3
/// for strictly ordered triples; endpoint contact is reported through the
/// boundary flags, never as a failure.
InverseResult from_cartesian(const CartesianPoint& c, const FocalTriple& f);

/// Largest confocal root lambda(c) >= lambda3. Works for degenerate
/// (flat / two-coincident) triples as well; used by the Cartesian-side
/// potential. Returns lambda3 exactly for points on the focal disc.
double lambda_root(const CartesianPoint& c, const FocalTriple& f);

/// Scale factors at a strictly interior point. Raises std::domain_error at
/// endpoint degeneracy where the branch radicals vanish.
ScaleFactors scale_factors(const EllipsoidalPoint& p, const FocalTriple& f);

/// J(i, xi) = d x_i / d xi for xi in (lambda, mu, nu). Satisfies
/// J^T J = diag(h_lambda^2, h_mu^2, h_nu^2) at interior points.
Mat3 jacobian(const EllipsoidalPoint& p, const FocalTriple& f);

/// sum_i x_i^2/(lambda - lambda_i) - 1 for lambda > lambda3.
double quadric_residual(const CartesianPoint& c, double lambda, const FocalTriple& f);

}  // namespace confocal
}  // namespace ghflow

#endif
