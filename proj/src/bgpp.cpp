#include "ghflow/bgpp.hpp"

#include <cmath>
#include <stdexcept>

namespace ghflow::bgpp {

namespace cf = ghflow::confocal;

GroupPoint normalize(GroupPoint g) {
    const double n = std::sqrt(g.q[0] * g.q[0] + g.q[1] * g.q[1] + g.q[2] * g.q[2]
                               + g.q[3] * g.q[3]);
    if (n == 0.0) throw std::domain_error("cannot normalize the zero quaternion");
    for (auto& v : g.q) v /= n;
    return g;
}

GroupPoint multiply(const GroupPoint& a, const GroupPoint& b) {
    const auto& p = a.q;
    const auto& q = b.q;
    GroupPoint r;
    r.q[0] = p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3];
    r.q[1] = p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2];
    r.q[2] = p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1];
    r.q[3] = p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0];
    return r;
}

GroupPoint axis_rotation(int axis, double t) {
    GroupPoint g;
    g.q[0] = std::cos(0.5 * t);
    g.q[1 + axis] = std::sin(0.5 * t);
    return g;
}

GroupPoint left_flow(const GroupPoint& g, int axis, double t) {
    return normalize(multiply(g, axis_rotation(axis, -t)));
}

GroupPoint random_group_point(Rng& rng) {
    const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
    const double s1 = std::sqrt(1.0 - u1), s2 = std::sqrt(u1);
    GroupPoint g;
    g.q[0] = s1 * std::sin(2.0 * M_PI * u2);
    g.q[1] = s1 * std::cos(2.0 * M_PI * u2);
    g.q[2] = s2 * std::sin(2.0 * M_PI * u3);
    g.q[3] = s2 * std::cos(2.0 * M_PI * u3);
    return g;
}

Mat3 adjoint(const GroupPoint& gp) {
    const GroupPoint g = normalize(gp);
    const double w = g.q[0], x = g.q[1], y = g.q[2], z = g.q[3];
    Mat3 o;
    o(0, 0) = 1.0 - 2.0 * (y * y + z * z);
    o(0, 1) = 2.0 * (x * y - w * z);
    o(0, 2) = 2.0 * (x * z + w * y);
    o(1, 0) = 2.0 * (x * y + w * z);
    o(1, 1) = 1.0 - 2.0 * (x * x + z * z);
    o(1, 2) = 2.0 * (y * z - w * x);
    o(2, 0) = 2.0 * (x * z - w * y);
    o(2, 1) = 2.0 * (y * z + w * x);
    o(2, 2) = 1.0 - 2.0 * (x * x + y * y);
    return o;
}

ProfileTriple profile(double lambda, const FocalTriple& f) {
    if (!f.ordered()) throw std::invalid_argument("focal constants must be nondecreasing");
    if (lambda < f.l3) throw std::domain_error("profile requires lambda >= lambda3");
    return {std::sqrt(lambda - f.l1), std::sqrt(lambda - f.l2), std::sqrt(lambda - f.l3)};
}

std::array<double, 3> euler_rhs(const ProfileTriple& p) {
    return {p.B * p.C, p.C * p.A, p.A * p.B};
}

MetricNorms metric_norms(double lambda, const FocalTriple& f) {
    if (lambda <= f.l3) throw std::domain_error("metric norms require lambda > lambda3");
    const auto p = profile(lambda, f);
    MetricNorms m;
    m.g_lambda = 0.25 / (p.A * p.B * p.C);
    m.g1 = p.B * p.C / p.A;
    m.g2 = p.C * p.A / p.B;
    m.g3 = p.A * p.B / p.C;
    return m;
}

double right_norm(double lambda, const GroupPoint& g, const FocalTriple& f) {
    const auto m = metric_norms(lambda, f);
    const Vec3 l = adjoint(g).row(0);
    return l.x * l.x * m.g1 + l.y * l.y * m.g2 + l.z * l.z * m.g3;
}

CartesianPoint moment_map(double lambda, const GroupPoint& g, const FocalTriple& f) {
    const auto p = profile(lambda, f);
    const Vec3 l = adjoint(g).row(0);
    return {-l.x * p.A, -l.y * p.B, -l.z * p.C};
}

}  // namespace ghflow::bgpp
