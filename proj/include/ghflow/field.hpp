#ifndef GHFLOW_FIELD_HPP
#define GHFLOW_FIELD_HPP

#include <cstdint>

#include "ghflow/confocal.hpp"
#include "ghflow/linalg.hpp"

namespace ghflow::field {

/// Harmonic potential V = R(lambda) / ((lambda - mu)(lambda - nu)) in the
/// ellipsoidal chart. Singular where lambda meets mu (the focal ellipse).
double potential(const EllipsoidalPoint& p, const FocalTriple& f);

/// Cartesian-side evaluation: solves the confocal equation for lambda(c),
/// then 1/V = R(lambda) * sum x_i^2 / (lambda - lambda_i)^2. Defined for
/// degenerate triples as well; agrees with the ellipsoidal route wherever
/// both apply.
double potential_cartesian(const CartesianPoint& c, const FocalTriple& f);

/// Cartesian gradient of V. Analytic chain rule through the ellipsoidal chart
/// at comfortably interior points, central differences near octant walls
/// where the chart degenerates but V itself stays smooth.
Vec3 grad_potential(const CartesianPoint& c, const FocalTriple& f);

/// Connection one-form components in the gauge with no dlambda part,
/// omega = omega_mu dmu + omega_nu dnu.
struct ConnectionComponents {
    double omega_mu = 0.0, omega_nu = 0.0;
};

ConnectionComponents connection(const EllipsoidalPoint& p, const FocalTriple& f);

/// Cartesian components of the one-form, pulled back through the inverse
/// Jacobian and dressed with the octant parity sign(x y z) so that
/// curl omega = +/- grad V holds with a single global sign on all of R^3
/// (the chart formula is orientation-sensitive and odd reflections flip it).
Vec3 connection_cartesian(const CartesianPoint& c, const FocalTriple& f);

enum class SpecialKind { flat, eguchi_hanson };

/// Closed-form degenerate-case potentials: 1/r for a fully coincident triple,
/// (1/r1 + 1/r2)/2 with centres (+-sqrt(l3 - l1), 0, 0) for l2 == l3.
double special_potential(SpecialKind kind, const CartesianPoint& c, const FocalTriple& f);

/// V - f_lambda / h_lambda^2 with f_lambda = 1/(4 R(lambda)); identically
/// zero, which is the separability condition in Staeckel form.
double staeckel_residual(const EllipsoidalPoint& p, const FocalTriple& f);

/// Distance to the nearer coordinate plane.
double plane_distance(const CartesianPoint& c);

/// Approximate distance to the focal conics (ellipse in z = 0, hyperbola in
/// y = 0). Good to a fraction of a percent of the span; used for guard zones.
double focal_conic_distance(const CartesianPoint& c, const FocalTriple& f);

/// Distance to the set where the reduced fields degenerate: the focal conics
/// together with the closed disc spanning the focal ellipse (V has a crease
/// there). For degenerate triples this is the distance to the point centres.
double singular_set_distance(const CartesianPoint& c, const FocalTriple& f);

struct FieldCheckConfig {
    int samples = 100;
    std::uint64_t seed = 7;
    double step = 1e-3;          ///< central-difference step
    double guard_factor = 0.05;  ///< rejection radius as a multiple of the span
    double box_half_width = 0.0; ///< 0 = derived from the triple
};

struct FieldCheckReport {
    double max_laplacian_residual = 0.0;  ///< |lap V| * len / |grad V|
    double max_curl_residual = 0.0;       ///< |curl w -+ grad V| / |grad V|
    int curl_sign = 0;                    ///< +1 or -1, fixed on the first sample
    int samples_used = 0;
};

/// Finite-difference verification of harmonicity and of curl omega = grad V
/// at guarded random points. For flat and two-centre triples only the
/// Laplacian part runs (the chart-based omega needs distinct constants).
FieldCheckReport field_checks(const FocalTriple& f, const FieldCheckConfig& cfg);

}  // namespace ghflow::field

#endif
