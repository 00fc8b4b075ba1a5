#include "ghflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ghflow/field.hpp"
#include "ghflow/ode.hpp"

namespace ghflow::dynamics {

namespace cf = ghflow::confocal;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double length_scale(const FocalTriple& f) {
    const double s = f.span();
    return s > 0.0 ? std::sqrt(s) : 1.0;
}

Vec3 omega_at(const CartesianPoint& c, const FocalTriple& f) {
    return field::connection_cartesian(c, f);
}

CartesianPoint shifted(CartesianPoint c, int axis, double d) {
    (axis == 0 ? c.x : axis == 1 ? c.y : c.z) += d;
    return c;
}

}  // namespace

double hamiltonian(const ReducedState& s, const FocalTriple& f) {
    const double v = field::potential_cartesian(s.position, f);
    Vec3 q = s.momentum;
    if (s.charge != 0.0) q -= omega_at(s.position, f) * s.charge;
    return 0.5 * (norm2(q) / v + s.charge * s.charge * v);
}

StateDerivative flow_rhs(const ReducedState& s, const FocalTriple& f) {
    const double v = field::potential_cartesian(s.position, f);
    const Vec3 gv = field::grad_potential(s.position, f);
    const double e = s.charge;

    Vec3 q = s.momentum;
    Mat3 dw;  // dw(i, k) = d omega_k / d x_i
    if (e != 0.0) {
        q -= omega_at(s.position, f) * e;
        const double step = 1e-6 * length_scale(f);
        for (int i = 0; i < 3; ++i) {
            const Vec3 wp = omega_at(shifted(s.position, i, step), f);
            const Vec3 wm = omega_at(shifted(s.position, i, -step), f);
            for (int k = 0; k < 3; ++k) dw(i, k) = (wp[k] - wm[k]) / (2.0 * step);
        }
    }

    StateDerivative d;
    d.velocity = q * (1.0 / v);
    const double q2 = norm2(q);
    for (int i = 0; i < 3; ++i) {
        double force = 0.5 * q2 / (v * v) * gv[i] - 0.5 * e * e * gv[i];
        if (e != 0.0)
            force += (e / v) * (dw(i, 0) * q.x + dw(i, 1) * q.y + dw(i, 2) * q.z);
        d.force[i] = force;
    }
    return d;
}

double guard_distance(const CartesianPoint& c, const FocalTriple& f, double charge) {
    double d = field::singular_set_distance(c, f);
    if (charge != 0.0) d = std::min(d, field::plane_distance(c));
    return d;
}

double guard_radius(const FocalTriple& f) {
    return 0.05 * std::max(f.span(), 1.0);
}

Trajectory integrate(const ReducedState& s0, const FocalTriple& f, double T, double tol) {
    Trajectory tr;
    const double radius = guard_radius(f);

    ode::State<6> y {s0.position.x, s0.position.y, s0.position.z,
                     s0.momentum.x, s0.momentum.y, s0.momentum.z};
    auto unpack = [&](const ode::State<6>& w) {
        return ReducedState {{w[0], w[1], w[2]}, {w[3], w[4], w[5]}, s0.charge};
    };
    auto rhs = [&](double, const ode::State<6>& w, ode::State<6>& dw) {
        try {
            const auto d = flow_rhs(unpack(w), f);
            dw = {d.velocity.x, d.velocity.y, d.velocity.z, d.force.x, d.force.y, d.force.z};
        } catch (const std::domain_error&) {
            dw.fill(kNan);  // the singular set was probed; reject the step
        }
    };
    auto observer = [&](double t, const ode::State<6>& w) {
        tr.samples.push_back({t, unpack(w)});
    };
    auto stop = [&](double, const ode::State<6>& w) {
        return guard_distance({w[0], w[1], w[2]}, f, s0.charge) < radius;
    };

    ode::Options opt;
    opt.tol = tol;
    const auto status = ode::integrate_dopri5<6>(rhs, y, 0.0, T, opt, observer, stop);
    switch (status) {
        case ode::Status::ok: tr.status = FlowStatus::completed; break;
        case ode::Status::stopped: tr.status = FlowStatus::guard_zone; break;
        default: tr.status = FlowStatus::non_finite; break;
    }
    return tr;
}

EllipsoidalMomenta cotangent_to_ellipsoidal(const CartesianPoint& x, const Vec3& p,
                                            const FocalTriple& f) {
    const auto inv = cf::from_cartesian(x, f);
    if (inv.any_boundary())
        throw std::domain_error("momentum transform degenerates on coordinate planes");
    const Mat3 j = cf::jacobian(inv.point, f);
    EllipsoidalMomenta m;
    m.point = inv.point;
    m.p_lambda = dot(j.col(0), p);
    m.p_mu = dot(j.col(1), p);
    m.p_nu = dot(j.col(2), p);
    return m;
}

Vec3 cotangent_from_ellipsoidal(const EllipsoidalPoint& p, double p_lambda, double p_mu,
                                double p_nu, const FocalTriple& f) {
    const Mat3 j = cf::jacobian(p, f);
    const auto h = cf::scale_factors(p, f);
    return j.col(0) * (p_lambda / (h.h_lambda * h.h_lambda))
         + j.col(1) * (p_mu / (h.h_mu * h.h_mu))
         + j.col(2) * (p_nu / (h.h_nu * h.h_nu));
}

SeparationResult separation_line(const CartesianPoint& x, const Vec3& p, const FocalTriple& f) {
    const auto m = cotangent_to_ellipsoidal(x, p, f);
    const double xi[3] = {m.point.lambda, m.point.mu, m.point.nu};
    const double q[3] = {cf::cubic(xi[0], f).value, cf::cubic(xi[1], f).value,
                         cf::cubic(xi[2], f).value};
    const double pc[3] = {m.p_lambda, m.p_mu, m.p_nu};
    double k[3];
    for (int i = 0; i < 3; ++i) k[i] = 4.0 * q[i] * pc[i] * pc[i];
    k[0] -= std::sqrt(std::max(0.0, q[0]));

    // least squares line through the three (xi, K) points
    const double xbar = (xi[0] + xi[1] + xi[2]) / 3.0;
    const double kbar = (k[0] + k[1] + k[2]) / 3.0;
    double sxx = 0.0, sxk = 0.0;
    for (int i = 0; i < 3; ++i) {
        sxx += (xi[i] - xbar) * (xi[i] - xbar);
        sxk += (xi[i] - xbar) * (k[i] - kbar);
    }
    SeparationResult out;
    out.line.a = sxk / sxx;
    out.line.b = kbar - out.line.a * xbar;

    const double chord = k[2] + (k[1] - k[2]) * (xi[0] - xi[2]) / (xi[1] - xi[2]);
    const double kmax = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
    out.residual = std::abs(k[0] - chord) / std::max(1.0, kmax);
    return out;
}

ReducedState on_shell_state(const CartesianPoint& x, const Vec3& dir, double charge,
                            const FocalTriple& f) {
    const double v = field::potential_cartesian(x, f);
    const double rest = 1.0 - charge * charge * v;
    if (rest <= 0.0)
        throw std::domain_error("no unit-speed shell here: e^2 V >= 1");
    const double n = norm(dir);
    if (n == 0.0) throw std::invalid_argument("momentum direction must be nonzero");
    Vec3 p = dir * (std::sqrt(v * rest) / n);
    if (charge != 0.0) p += omega_at(x, f) * charge;
    return {x, p, charge};
}

std::vector<TrajectoryRow> trajectory_rows(const Trajectory& tr, const FocalTriple& f) {
    std::vector<TrajectoryRow> rows;
    rows.reserve(tr.samples.size());
    for (const auto& s : tr.samples) {
        TrajectoryRow r {s.t,
                         s.state.position.x, s.state.position.y, s.state.position.z,
                         s.state.momentum.x, s.state.momentum.y, s.state.momentum.z,
                         kNan, kNan, kNan, kNan};
        try {
            r.H = hamiltonian(s.state, f);
        } catch (const std::domain_error&) {
        }
        if (s.state.charge == 0.0) {
            try {
                const auto sep = separation_line(s.state.position, s.state.momentum, f);
                r.a = sep.line.a;
                r.b = sep.line.b;
                r.residual = sep.residual;
            } catch (const std::domain_error&) {
            }
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace ghflow::dynamics
