#include "ghflow/confocal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ghflow::confocal {

namespace {

void require_ordered(const FocalTriple& f) {
    if (!f.ordered() || !std::isfinite(f.l1) || !std::isfinite(f.l3))
        throw std::invalid_argument("focal constants must be nondecreasing");
}

void require_strict(const FocalTriple& f) {
    require_ordered(f);
    if (!f.strictly_ordered())
        throw std::domain_error("operation requires three distinct focal constants");
}

// Monic cubic whose roots are the ellipsoidal coordinates of c,
// P(t) = (t - lambda)(t - mu)(t - nu), evaluated in factored pieces.
struct ConfocalCubic {
    CartesianPoint c;
    FocalTriple f;

    double value(double t) const {
        const double d1 = t - f.l1, d2 = t - f.l2, d3 = t - f.l3;
        return d1 * d2 * d3 - c.x * c.x * d2 * d3 - c.y * c.y * d1 * d3 - c.z * c.z * d1 * d2;
    }
    double derivative(double t) const {
        const double d1 = t - f.l1, d2 = t - f.l2, d3 = t - f.l3;
        return d1 * d2 + d1 * d3 + d2 * d3 - c.x * c.x * (d2 + d3) - c.y * c.y * (d1 + d3)
             - c.z * c.z * (d1 + d2);
    }
};

// Root of P in [lo, hi]. The crossing direction is known per interval:
// P' = product of differences to the other two roots, so P crosses upward at
// the nu and lambda roots and downward at the mu root. Using the fixed
// orientation keeps the isolation correct when an endpoint is itself a root
// (coordinate-plane and axis points). Bisection takes the bracket down to
// bisect_width, then safeguarded Newton polishes to ~1e-14 relative.
double bracketed_root(const ConfocalCubic& p, double lo, double hi, bool upward,
                      double bisect_width) {
    const double s = upward ? 1.0 : -1.0;  // s*P <= 0 on the lo side of the root
    double a = lo, b = hi;
    while (b - a > bisect_width) {
        const double m = 0.5 * (a + b);
        if (s * p.value(m) <= 0.0)
            a = m;
        else
            b = m;
    }
    double t = 0.5 * (a + b);
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    for (int it = 0; it < 60; ++it) {
        const double v = p.value(t);
        const double d = p.derivative(t);
        double step = (d != 0.0) ? v / d : 0.0;
        double tn = t - step;
        if (!(tn > a && tn < b) || step == 0.0) {
            // Newton left the bracket; fall back to one bisection move.
            if (s * v <= 0.0)
                a = t;
            else
                b = t;
            tn = 0.5 * (a + b);
            step = tn - t;
        }
        t = tn;
        if (std::abs(step) <= 1e-14 * scale) break;
    }
    return std::clamp(t, lo, hi);
}

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

}  // namespace

Cubic cubic(double t, const FocalTriple& f) {
    require_ordered(f);
    const double d1 = t - f.l1, d2 = t - f.l2, d3 = t - f.l3;
    return {d1 * d2 * d3, d1 * d2 + d1 * d3 + d2 * d3};
}

double radical_lambda(double lambda, const FocalTriple& f) {
    const double q = cubic(lambda, f).value;
    if (q < 0.0) {
        // permit roundoff-level excursions at the branch endpoint
        if (q > -1e-12 * std::max(1.0, f.span() * f.span() * f.span())) return 0.0;
        throw std::domain_error("lambda outside the lambda branch (Q < 0)");
    }
    return std::sqrt(q);
}

double radical_mu(double mu, const FocalTriple& f) {
    const double q = cubic(mu, f).value;
    if (q > 0.0) {
        if (q < 1e-12 * std::max(1.0, f.span() * f.span() * f.span())) return 0.0;
        throw std::domain_error("mu outside the mu branch (Q > 0)");
    }
    return std::sqrt(-q);
}

double radical_nu(double nu, const FocalTriple& f) {
    const double q = cubic(nu, f).value;
    if (q < 0.0) {
        if (q > -1e-12 * std::max(1.0, f.span() * f.span() * f.span())) return 0.0;
        throw std::domain_error("nu outside the nu branch (Q < 0)");
    }
    return std::sqrt(q);
}

CartesianPoint to_cartesian(const EllipsoidalPoint& p, const FocalTriple& f) {
    require_strict(f);
    const double tol = 1e-9 * f.span();
    if (p.nu < f.l1 - tol || p.nu > f.l2 + tol || p.mu < f.l2 - tol || p.mu > f.l3 + tol
        || p.lambda < f.l3 - tol)
        throw std::domain_error("ellipsoidal point violates the interlacing ranges");

    // clamp roundoff-level range violations so the products stay nonnegative
    const double nu = std::clamp(p.nu, f.l1, f.l2);
    const double mu = std::clamp(p.mu, f.l2, f.l3);
    const double lambda = std::max(p.lambda, f.l3);

    const double x2 = (lambda - f.l1) * (mu - f.l1) * (nu - f.l1)
                    / ((f.l2 - f.l1) * (f.l3 - f.l1));
    const double y2 = (lambda - f.l2) * (mu - f.l2) * (nu - f.l2)
                    / ((f.l2 - f.l1) * (f.l2 - f.l3));
    const double z2 = (lambda - f.l3) * (mu - f.l3) * (nu - f.l3)
                    / ((f.l3 - f.l1) * (f.l3 - f.l2));

    return {p.signs[0] * std::sqrt(std::max(0.0, x2)),
            p.signs[1] * std::sqrt(std::max(0.0, y2)),
            p.signs[2] * std::sqrt(std::max(0.0, z2))};
}

InverseResult from_cartesian(const CartesianPoint& c, const FocalTriple& f) {
    require_strict(f);
    const ConfocalCubic p {c, f};
    const double span = f.span();
    const double bw = 1e-3 * span;
    const double r2 = c.r2();

    InverseResult out;
    out.point.nu = bracketed_root(p, f.l1, f.l2, true, bw);
    out.point.mu = bracketed_root(p, f.l2, f.l3, false, bw);
    out.point.lambda = bracketed_root(p, f.l3, f.l3 + r2 + bw, true, std::max(bw, 1e-3 * r2));
    out.point.signs = {sign_of(c.x), sign_of(c.y), sign_of(c.z)};

    const double btol = kBoundaryTol * span;
    out.boundary[0] = out.point.lambda - f.l3 <= btol;
    out.boundary[1] = std::min(out.point.mu - f.l2, f.l3 - out.point.mu) <= btol;
    out.boundary[2] = std::min(out.point.nu - f.l1, f.l2 - out.point.nu) <= btol;
    return out;
}

double lambda_root(const CartesianPoint& c, const FocalTriple& f) {
    require_ordered(f);
    const ConfocalCubic p {c, f};
    const double r2 = c.r2();
    const double bw = std::max(1e-3 * f.span(), 1e-3 * r2);
    if (r2 == 0.0) return f.l3;
    return bracketed_root(p, f.l3, f.l3 + r2 + bw, true, bw);
}

ScaleFactors scale_factors(const EllipsoidalPoint& p, const FocalTriple& f) {
    require_strict(f);
    const double btol = kBoundaryTol * f.span();
    if (p.lambda - f.l3 <= btol || std::min(p.mu - f.l2, f.l3 - p.mu) <= btol
        || std::min(p.nu - f.l1, f.l2 - p.nu) <= btol)
        throw std::domain_error("scale factors diverge at an endpoint-degenerate point");

    const double R = radical_lambda(p.lambda, f);
    const double S = radical_mu(p.mu, f);
    const double T = radical_nu(p.nu, f);
    ScaleFactors h;
    h.h_lambda = 0.5 * std::sqrt((p.lambda - p.mu) * (p.lambda - p.nu)) / R;
    h.h_mu = 0.5 * std::sqrt((p.lambda - p.mu) * (p.mu - p.nu)) / S;
    // the two negative factors are multiplied before the square root
    h.h_nu = 0.5 * std::sqrt((p.nu - p.mu) * (p.nu - p.lambda)) / T;
    return h;
}

Mat3 jacobian(const EllipsoidalPoint& p, const FocalTriple& f) {
    require_strict(f);
    const double btol = kBoundaryTol * f.span();
    if (p.lambda - f.l3 <= btol || std::min(p.mu - f.l2, f.l3 - p.mu) <= btol
        || std::min(p.nu - f.l1, f.l2 - p.nu) <= btol)
        throw std::domain_error("jacobian is singular at an endpoint-degenerate point");

    const CartesianPoint c = to_cartesian(p, f);
    const double xi[3] = {p.lambda, p.mu, p.nu};
    const double xv[3] = {c.x, c.y, c.z};
    const double lv[3] = {f.l1, f.l2, f.l3};
    Mat3 j;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            j(i, k) = xv[i] / (2.0 * (xi[k] - lv[i]));
    return j;
}

double quadric_residual(const CartesianPoint& c, double lambda, const FocalTriple& f) {
    require_ordered(f);
    if (lambda <= f.l3)
        throw std::domain_error("quadric residual requires lambda > lambda3");
    return c.x * c.x / (lambda - f.l1) + c.y * c.y / (lambda - f.l2)
         + c.z * c.z / (lambda - f.l3) - 1.0;
}

}  // namespace ghflow::confocal
