#ifndef GHFLOW_DYNAMICS_HPP
#define GHFLOW_DYNAMICS_HPP

#include <vector>

#include "ghflow/confocal.hpp"
#include "ghflow/linalg.hpp"

namespace ghflow {

/// Point of the reduced phase space: Cartesian position on the quotient,
/// momentum covector, and the conserved fiber charge e. On the unit-speed
/// shell e^2 V + |p - e w|^2 / V = 1, i.e. H = 1/2.
struct ReducedState {
    CartesianPoint position;
    Vec3 momentum;
    double charge = 0.0;
};

/// Stackel separation constants: the line K = a xi + b through the three
/// branch points (xi, K_xi).
struct SeparationLine {
    double a = 0.0, b = 0.0;
};

namespace dynamics {

/// H = (|p - e w(x)|^2 / V(x) + e^2 V(x)) / 2. The unit-speed shell is 1/2.
double hamiltonian(const ReducedState& s, const FocalTriple& f);

struct StateDerivative {
    Vec3 velocity;  ///< dx/dt
    Vec3 force;     ///< dp/dt
};

/// Canonical equations of the reduced Hamiltonian. grad V comes from the
/// analytic ellipsoidal chain rule (finite differences near octant walls);
/// the omega Jacobian needed for e != 0 is taken by central differences.
StateDerivative flow_rhs(const ReducedState& s, const FocalTriple& f);

enum class FlowStatus { completed, guard_zone, non_finite };

struct TrajectorySample {
    double t = 0.0;
    ReducedState state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    FlowStatus status = FlowStatus::completed;
};

/// Distance to the set where the flow stops: the focal conics and disc, plus
/// the coordinate planes when the charge couples the motion to the one-form.
double guard_distance(const CartesianPoint& c, const FocalTriple& f, double charge);

/// Radius of the stopping zone used by integrate.
double guard_radius(const FocalTriple& f);

/// Adaptive integration of the reduced flow over [0, T] (T may be negative).
/// Entering the guard zone ends the trajectory with FlowStatus::guard_zone;
/// a non-finite state reports FlowStatus::non_finite. Samples are the
/// accepted integrator steps, with the final time hit exactly.
Trajectory integrate(const ReducedState& s0, const FocalTriple& f, double T, double tol);

struct EllipsoidalMomenta {
    EllipsoidalPoint point;
    double p_lambda = 0.0, p_mu = 0.0, p_nu = 0.0;
};

/// Covector components in the ellipsoidal cobasis, p_xi = sum_i p_i dx_i/dxi.
/// Requires a strictly interior point. |p|^2 = sum p_xi^2 / h_xi^2 holds.
EllipsoidalMomenta cotangent_to_ellipsoidal(const CartesianPoint& x, const Vec3& p,
                                            const FocalTriple& f);

/// Inverse of the above: Cartesian covector with prescribed chart components.
Vec3 cotangent_from_ellipsoidal(const EllipsoidalPoint& p, double p_lambda, double p_mu,
                                double p_nu, const FocalTriple& f);

struct SeparationResult {
    SeparationLine line;
    double residual = 0.0;  ///< deviation of (lambda, K_lambda) from the mu-nu chord
};

/// Separation constants for a charge-zero state. The three branch values
///   K_lambda = 4 Q(lambda) p_lambda^2 - sqrt(Q(lambda)),
///   K_mu     = 4 Q(mu) p_mu^2,
///   K_nu     = 4 Q(nu) p_nu^2
/// are collinear over xi exactly when the state is on the unit-speed shell
/// (sum K_xi / prod(xi - others) = |p|^2 - V identically); the fitted line
/// K = a xi + b carries the two conserved constants. The residual is the
/// vertical distance of the lambda point from the line through the other
/// two, normalized by max(1, max |K_xi|).
SeparationResult separation_line(const CartesianPoint& x, const Vec3& p, const FocalTriple& f);

/// State on the unit-speed shell at x with momentum direction dir:
/// p = e w + sqrt(V (1 - e^2 V)) dir/|dir|. Requires e^2 V < 1.
ReducedState on_shell_state(const CartesianPoint& x, const Vec3& dir, double charge,
                            const FocalTriple& f);

/// Flat record of one trajectory step for file output. The separation data
/// is filled for charge-zero states at interior points and is NaN otherwise.
struct TrajectoryRow {
    double t, x, y, z, px, py, pz, H, a, b, residual;
};

std::vector<TrajectoryRow> trajectory_rows(const Trajectory& tr, const FocalTriple& f);

}  // namespace dynamics
}  // namespace ghflow

#endif
