#include "ghflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ghflow/rng.hpp"

namespace ghflow::field {

namespace cf = ghflow::confocal;

namespace {

double length_scale(const FocalTriple& f) {
    const double s = f.span();
    return s > 0.0 ? std::sqrt(s) : 1.0;
}

int parity(const CartesianPoint& c) {
    return std::signbit(c.x) == std::signbit(c.y * c.z) ? 1 : -1;
}

// distance from (px, py) to the ellipse x^2/a^2 + y^2/b^2 = 1, coarse scan
// plus local ternary refinement; b may be zero (segment endpoints)
double ellipse_distance_2d(double px, double py, double a, double b) {
    auto d2 = [&](double th) {
        const double dx = px - a * std::cos(th);
        const double dy = py - b * std::sin(th);
        return dx * dx + dy * dy;
    };
    const int n = 720;
    double best = 0.0, best_d = d2(0.0);
    for (int i = 1; i < n; ++i) {
        const double th = 2.0 * M_PI * i / n;
        const double v = d2(th);
        if (v < best_d) {
            best_d = v;
            best = th;
        }
    }
    double lo = best - 2.0 * M_PI / n, hi = best + 2.0 * M_PI / n;
    for (int it = 0; it < 60; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (d2(m1) < d2(m2))
            hi = m2;
        else
            lo = m1;
    }
    return std::sqrt(d2(0.5 * (lo + hi)));
}

// distance from (px, pz) to both branches of x^2/a^2 - z^2/b^2 = 1
double hyperbola_distance_2d(double px, double pz, double a, double b) {
    auto d2 = [&](double u, double sgn) {
        const double dx = px - sgn * a * std::cosh(u);
        const double dz = pz - b * std::sinh(u);
        return dx * dx + dz * dz;
    };
    const double umax = std::asinh((std::abs(pz) + std::abs(px) + a + b) / b) + 1.0;
    double best = d2(0.0, 1.0);
    for (double sgn : {1.0, -1.0}) {
        const int n = 512;
        double arg = -umax, arg_d = d2(-umax, sgn);
        for (int i = 1; i <= n; ++i) {
            const double u = -umax + 2.0 * umax * i / n;
            const double v = d2(u, sgn);
            if (v < arg_d) {
                arg_d = v;
                arg = u;
            }
        }
        double lo = arg - 2.0 * umax / n, hi = arg + 2.0 * umax / n;
        for (int it = 0; it < 60; ++it) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (d2(m1, sgn) < d2(m2, sgn))
                hi = m2;
            else
                lo = m1;
        }
        best = std::min(best, d2(0.5 * (lo + hi), sgn));
    }
    return std::sqrt(best);
}

double potential_inverse(const CartesianPoint& c, const FocalTriple& f, double lambda) {
    const double d1 = lambda - f.l1, d2 = lambda - f.l2, d3 = lambda - f.l3;
    const double radical = std::sqrt(d1 * d2 * d3);
    return radical
         * (c.x * c.x / (d1 * d1) + c.y * c.y / (d2 * d2) + c.z * c.z / (d3 * d3));
}

}  // namespace

double potential(const EllipsoidalPoint& p, const FocalTriple& f) {
    const double gap = (p.lambda - p.mu) * (p.lambda - p.nu);
    if (gap <= 1e-12 * std::max(1.0, f.span() * f.span()))
        throw std::domain_error("potential is singular where lambda meets mu (focal ellipse)");
    return cf::radical_lambda(p.lambda, f) / gap;
}

double potential_cartesian(const CartesianPoint& c, const FocalTriple& f) {
    const double lambda = cf::lambda_root(c, f);
    const double scale = std::max({1.0, std::abs(f.l3), c.r2()});
    if (lambda - f.l3 <= 1e-13 * scale)
        throw std::domain_error("potential is singular on the focal disc");
    const double vinv = potential_inverse(c, f, lambda);
    if (!std::isfinite(vinv) || vinv <= 0.0)
        throw std::domain_error("potential evaluation degenerate near the focal set");
    return 1.0 / vinv;
}

Vec3 grad_potential(const CartesianPoint& c, const FocalTriple& f) {
    const double len = length_scale(f);
    if (f.strictly_ordered() && plane_distance(c) > 1e-3 * len) {
        const auto inv = cf::from_cartesian(c, f);
        if (!inv.any_boundary()) {
            const auto& p = inv.point;
            const double R = cf::radical_lambda(p.lambda, f);
            const double qp = cf::cubic(p.lambda, f).derivative;
            const double dl = p.lambda - p.mu, dn = p.lambda - p.nu;
            const double gap = dl * dn;
            // dV/dxi in the ellipsoidal chart
            const double v_l = (0.5 * qp / R * gap - R * (dl + dn)) / (gap * gap);
            const double v_m = R / (dl * dl * dn);
            const double v_n = R / (dl * dn * dn);
            const auto j = cf::jacobian(p, f);
            const auto h = cf::scale_factors(p, f);
            return j.col(0) * (v_l / (h.h_lambda * h.h_lambda))
                 + j.col(1) * (v_m / (h.h_mu * h.h_mu))
                 + j.col(2) * (v_n / (h.h_nu * h.h_nu));
        }
    }
    // central differences; V is smooth across octant walls away from the disc
    const double s = 1e-6 * len;
    Vec3 g;
    for (int i = 0; i < 3; ++i) {
        CartesianPoint cp = c, cm = c;
        (i == 0 ? cp.x : i == 1 ? cp.y : cp.z) += s;
        (i == 0 ? cm.x : i == 1 ? cm.y : cm.z) -= s;
        g[i] = (potential_cartesian(cp, f) - potential_cartesian(cm, f)) / (2.0 * s);
    }
    return g;
}

ConnectionComponents connection(const EllipsoidalPoint& p, const FocalTriple& f) {
    const double btol = cf::kBoundaryTol * f.span();
    if (std::min(p.mu - f.l2, f.l3 - p.mu) <= btol || std::min(p.nu - f.l1, f.l2 - p.nu) <= btol)
        throw std::domain_error("connection gauge is singular where S or T vanishes");
    const double S = cf::radical_mu(p.mu, f);
    const double T = cf::radical_nu(p.nu, f);
    // The relative sign between the two terms is forced by d(omega) = *dV:
    // with both coefficients taken positive the dlambda^dmu and dlambda^dnu
    // components of the curl equation demand opposite global signs.
    ConnectionComponents w;
    w.omega_nu = 0.5 * (p.lambda - p.nu) / ((p.mu - p.lambda) * (p.mu - p.nu)) * (S / T);
    w.omega_mu = -0.5 * (p.lambda - p.mu) / ((p.nu - p.lambda) * (p.nu - p.mu)) * (T / S);
    return w;
}

Vec3 connection_cartesian(const CartesianPoint& c, const FocalTriple& f) {
    const auto inv = cf::from_cartesian(c, f);
    if (inv.any_boundary())
        throw std::domain_error("connection needs a strictly interior point");
    const auto w = connection(inv.point, f);
    const auto j = cf::jacobian(inv.point, f);
    const auto h = cf::scale_factors(inv.point, f);
    const Vec3 raw = j.col(1) * (w.omega_mu / (h.h_mu * h.h_mu))
                   + j.col(2) * (w.omega_nu / (h.h_nu * h.h_nu));
    return raw * static_cast<double>(parity(c));
}

double special_potential(SpecialKind kind, const CartesianPoint& c, const FocalTriple& f) {
    switch (kind) {
        case SpecialKind::flat: {
            if (!f.flat())
                throw std::domain_error("flat potential requires three coincident constants");
            const double r = c.r();
            if (r == 0.0) throw std::domain_error("flat potential is singular at the origin");
            return 1.0 / r;
        }
        case SpecialKind::eguchi_hanson: {
            if (!f.two_centre())
                throw std::domain_error("two-centre potential requires lambda2 == lambda3 > lambda1");
            const double a = std::sqrt(f.l3 - f.l1);
            const double r1 = std::sqrt((c.x - a) * (c.x - a) + c.y * c.y + c.z * c.z);
            const double r2 = std::sqrt((c.x + a) * (c.x + a) + c.y * c.y + c.z * c.z);
            if (r1 == 0.0 || r2 == 0.0)
                throw std::domain_error("two-centre potential is singular at a centre");
            return 0.5 * (1.0 / r1 + 1.0 / r2);
        }
    }
    throw std::invalid_argument("unknown special potential kind");
}

double staeckel_residual(const EllipsoidalPoint& p, const FocalTriple& f) {
    const double v = potential(p, f);
    const double q = cf::cubic(p.lambda, f).value;
    const double R = std::sqrt(std::max(0.0, q));
    // 1/h_lambda^2 = 4 Q(lambda) / ((lambda-mu)(lambda-nu))
    const double inv_h2 = 4.0 * q / ((p.lambda - p.mu) * (p.lambda - p.nu));
    const double f_lambda = 1.0 / (4.0 * R);
    return v - f_lambda * inv_h2;
}

double plane_distance(const CartesianPoint& c) {
    return std::min({std::abs(c.x), std::abs(c.y), std::abs(c.z)});
}

double focal_conic_distance(const CartesianPoint& c, const FocalTriple& f) {
    if (f.flat()) return c.r();
    if (f.two_centre()) {
        const double a = std::sqrt(f.l3 - f.l1);
        const double yz = std::sqrt(c.y * c.y + c.z * c.z);
        return std::sqrt(std::min((c.x - a) * (c.x - a), (c.x + a) * (c.x + a)) + yz * yz);
    }
    const double ae = std::sqrt(f.l3 - f.l1), be = std::sqrt(f.l3 - f.l2);
    const double de = std::hypot(ellipse_distance_2d(std::abs(c.x), std::abs(c.y), ae, be), c.z);
    const double ah = std::sqrt(f.l2 - f.l1), bh = std::sqrt(f.l3 - f.l2);
    const double dh = std::hypot(hyperbola_distance_2d(c.x, c.z, ah, bh), c.y);
    return std::min(de, dh);
}

double singular_set_distance(const CartesianPoint& c, const FocalTriple& f) {
    if (f.flat()) return c.r();
    if (f.two_centre()) return focal_conic_distance(c, f);
    const double ae = std::sqrt(f.l3 - f.l1), be = std::sqrt(f.l3 - f.l2);
    const double u = c.x / ae, v = c.y / be;
    if (u * u + v * v <= 1.0) return std::abs(c.z);  // above the focal disc
    return std::hypot(ellipse_distance_2d(std::abs(c.x), std::abs(c.y), ae, be), c.z);
}

FieldCheckReport field_checks(const FocalTriple& f, const FieldCheckConfig& cfg) {
    Rng rng(cfg.seed);
    FieldCheckReport report;
    const bool strict = f.strictly_ordered();
    const double len = length_scale(f);
    const double guard = strict ? cfg.guard_factor * f.span() : 0.75 * len;
    const double box = cfg.box_half_width > 0.0
        ? cfg.box_half_width
        : (strict ? 1.25 * len : 4.0 * len);
    const double h = cfg.step;

    auto value = [&](const CartesianPoint& c) { return potential_cartesian(c, f); };
    auto shifted = [](CartesianPoint c, int axis, double d) {
        (axis == 0 ? c.x : axis == 1 ? c.y : c.z) += d;
        return c;
    };

    int accepted = 0;
    long attempts = 0;
    while (accepted < cfg.samples && attempts < 1000L * cfg.samples) {
        ++attempts;
        CartesianPoint c {rng.uniform(-box, box), rng.uniform(-box, box), rng.uniform(-box, box)};
        if (strict && plane_distance(c) < guard) continue;
        if (focal_conic_distance(c, f) < guard) continue;
        if (!strict && singular_set_distance(c, f) < guard) continue;

        // central-difference Laplacian and gradient of V
        const double v0 = value(c);
        double lap = 0.0;
        Vec3 grad;
        for (int i = 0; i < 3; ++i) {
            const double vp = value(shifted(c, i, h));
            const double vm = value(shifted(c, i, -h));
            lap += (vp - 2.0 * v0 + vm) / (h * h);
            grad[i] = (vp - vm) / (2.0 * h);
        }
        const double gnorm = norm(grad);
        report.max_laplacian_residual =
            std::max(report.max_laplacian_residual, std::abs(lap) * len / std::max(gnorm, 1e-300));

        if (strict) {
            // curl of the one-form against grad V, both by fourth-order
            // central differences at the same step (the one-form's gauge
            // derivatives grow near the guard boundary and need the extra
            // truncation order to stay inside the budget)
            auto d4 = [&](auto&& field_at, int axis) {
                const auto fp1 = field_at(shifted(c, axis, h));
                const auto fm1 = field_at(shifted(c, axis, -h));
                const auto fp2 = field_at(shifted(c, axis, 2.0 * h));
                const auto fm2 = field_at(shifted(c, axis, -2.0 * h));
                return (fm2 - fp2 + (fp1 - fm1) * 8.0) * (1.0 / (12.0 * h));
            };
            auto omega_at = [&](const CartesianPoint& q) { return connection_cartesian(q, f); };
            auto gradv_at = [&](const CartesianPoint& q) { return Vec3 {value(q), 0.0, 0.0}; };
            Vec3 dw[3];
            Vec3 grad4;
            for (int i = 0; i < 3; ++i) {
                dw[i] = d4(omega_at, i);
                grad4[i] = d4(gradv_at, i).x;
            }
            const Vec3 curl {dw[1].z - dw[2].y, dw[2].x - dw[0].z, dw[0].y - dw[1].x};
            if (report.curl_sign == 0)
                report.curl_sign = dot(curl, grad4) >= 0.0 ? 1 : -1;
            const Vec3 resid = curl - grad4 * static_cast<double>(report.curl_sign);
            report.max_curl_residual =
                std::max(report.max_curl_residual, norm(resid) / std::max(norm(grad4), 1e-300));
        }
        ++accepted;
    }
    report.samples_used = accepted;
    return report;
}

}  // namespace ghflow::field
