#ifndef GHFLOW_BGPP_HPP
#define GHFLOW_BGPP_HPP

#include <array>

#include "ghflow/confocal.hpp"
#include "ghflow/linalg.hpp"
#include "ghflow/rng.hpp"

namespace ghflow {

/// SU(2) group element as a unit quaternion (w, x, y, z), renormalized on
/// construction through bgpp::normalize.
struct GroupPoint {
    std::array<double, 4> q {1.0, 0.0, 0.0, 0.0};
};

/// Profile functions of the diagonal metric, A^2 + lambda1 = B^2 + lambda2 =
/// C^2 + lambda3 = lambda.
struct ProfileTriple {
    double A = 0.0, B = 0.0, C = 0.0;
};

namespace bgpp {

GroupPoint normalize(GroupPoint g);
GroupPoint multiply(const GroupPoint& a, const GroupPoint& b);

/// exp along the generator e_axis (axis in 0..2) by group angle t.
GroupPoint axis_rotation(int axis, double t);

/// Flow of the left-invariant field L_{axis+1} for parameter time t:
/// g * exp(-t e_axis / 2). The sign and the half-angle normalization are the
/// unique choice for which [L1, L2] = -L3 and L_i l_j = -eps_ijk l_k hold;
/// the finite-difference identity test exercises exactly that.
GroupPoint left_flow(const GroupPoint& g, int axis, double t);

/// Haar-uniform random element (Shoemake's subgroup construction).
GroupPoint random_group_point(Rng& rng);

/// Orthogonal matrix O relating right- to left-invariant fields,
/// R_i = O_ij L_j; rows are (l, m, n). For a unit quaternion this is the
/// standard rotation matrix of v -> q v q^-1.
Mat3 adjoint(const GroupPoint& g);

/// Closed-form profile (sqrt(lambda - lambda1), ...); requires lambda >= lambda3.
ProfileTriple profile(double lambda, const FocalTriple& f);

/// Right-hand side (BC, CA, AB) of the Euler-like system dA/deta = BC etc.
std::array<double, 3> euler_rhs(const ProfileTriple& p);

/// Diagonal metric data at orbit lambda: coefficient of dlambda^2 and of the
/// three invariant one-form squares.
struct MetricNorms {
    double g_lambda = 0.0;  ///< 1 / (4 R(lambda))
    double g1 = 0.0, g2 = 0.0, g3 = 0.0;
};

MetricNorms metric_norms(double lambda, const FocalTriple& f);

/// g(R1, R1) = l1^2 BC/A + l2^2 CA/B + l3^2 AB/C, the inverse potential on
/// the orbit; requires lambda > lambda3.
double right_norm(double lambda, const GroupPoint& g, const FocalTriple& f);

/// Moment-map image (-l1 A, -l2 B, -l3 C); lies on the quadric labelled by
/// lambda for every group point.
CartesianPoint moment_map(double lambda, const GroupPoint& g, const FocalTriple& f);

}  // namespace bgpp
}  // namespace ghflow

#endif
