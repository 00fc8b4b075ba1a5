#ifndef GHFLOW_ODE_HPP
#define GHFLOW_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace ghflow::ode {

template <std::size_t N>
using State = std::array<double, N>;

enum class Status {
    ok,              ///< reached the end of the integration interval
    stopped,         ///< stop predicate fired at an accepted step
    non_finite,      ///< state or derivative became non-finite
    step_underflow,  ///< step size shrank below representable resolution
    too_many_steps
};

struct Options {
    double tol = 1e-10;          ///< absolute and relative weight per component
    double initial_step = 0.0;   ///< 0 = choose automatically
    std::size_t max_steps = 20'000'000;
};

namespace detail {

template <std::size_t N>
inline bool finite(const State<N>& y) {
    for (double v : y)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace detail

/// Adaptive Dormand-Prince 5(4) with error-per-unit-step control: a step of
/// size h is accepted when the embedded error estimate is below tol*h in the
/// mixed absolute/relative norm, so the accumulated error over a fixed
/// interval stays proportional to tol rather than to the step count.
///
/// `observer(t, y)` runs at every accepted step (and at t0); `stop(t, y)`
/// is checked after each accepted step and ends the run with Status::stopped.
template <std::size_t N, class Rhs, class Observer, class Stop>
Status integrate_dopri5(Rhs&& rhs, State<N>& y, double t0, double t1,
                        const Options& opt, Observer&& observer, Stop&& stop) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - bhat, with bhat the embedded 4th order weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (t1 == t0) {
        observer(t0, y);
        return Status::ok;
    }
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double t = t0;

    State<N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    rhs(t, y, k1);
    if (!detail::finite(y) || !detail::finite(k1)) return Status::non_finite;
    observer(t, y);
    if (stop(t, y)) return Status::stopped;

    double h = opt.initial_step;
    if (h <= 0.0) {
        // crude start; the controller settles within a few steps
        double dy = 0.0, df = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            dy = std::max(dy, std::abs(y[i]));
            df = std::max(df, std::abs(k1[i]));
        }
        h = (df > 0.0) ? 0.01 * (1.0 + dy) / df : 0.01 * span;
        h = std::min(h, span);
    }

    bool fsal_valid = true;
    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if (std::abs(h) < 1e-14 * std::max({std::abs(t), std::abs(t1), 1.0}))
            return Status::step_underflow;
        bool last = false;
        if (std::abs(t1 - t) <= h) {
            h = std::abs(t1 - t);
            last = true;
        }
        const double hs = dir * h;

        if (!fsal_valid) rhs(t, y, k1);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
        rhs(t + c2 * hs, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * hs, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * hs, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * hs, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + hs, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + hs, ynew, k7);

        if (!detail::finite(ynew) || !detail::finite(k7)) return Status::non_finite;

        double err2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i]
                                   + e6 * k6[i] + e7 * k7[i]);
            const double w = opt.tol * (1.0 + std::max(std::abs(y[i]), std::abs(ynew[i])));
            const double q = e / w;
            err2 += q * q;
        }
        const double err = std::sqrt(err2 / static_cast<double>(N));

        if (err <= h) {
            t = last ? t1 : t + hs;
            y = ynew;
            k1 = k7;
            fsal_valid = true;
            observer(t, y);
            if (stop(t, y)) return Status::stopped;
            if (last) return Status::ok;
            const double grow = (err > 0.0)
                ? 0.9 * std::pow(h / err, 0.25)
                : 5.0;
            h *= std::clamp(grow, 0.2, 5.0);
        } else {
            fsal_valid = false;
            h *= std::clamp(0.9 * std::pow(h / err, 0.25), 0.1, 0.9);
        }
    }
    return Status::too_many_steps;
}

template <std::size_t N, class Rhs>
Status integrate_dopri5(Rhs&& rhs, State<N>& y, double t0, double t1, const Options& opt) {
    auto no_observe = [](double, const State<N>&) {};
    auto no_stop = [](double, const State<N>&) { return false; };
    return integrate_dopri5<N>(static_cast<Rhs&&>(rhs), y, t0, t1, opt, no_observe, no_stop);
}

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
         + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
template <class F>
double integrate_1d(F f, double a, double b, double tol = 1e-12) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace ghflow::ode

#endif
