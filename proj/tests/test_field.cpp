#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ghflow/field.hpp"
#include "ghflow/rng.hpp"

using namespace ghflow;
namespace cf = ghflow::confocal;

namespace {

const FocalTriple kF {0.0, 1.0, 4.0};
const EllipsoidalPoint kP {5.0, 2.0, 0.5, {1, 1, 1}};

EllipsoidalPoint random_interior(Rng& rng, const FocalTriple& f) {
    const double m = 0.02 * f.span();
    EllipsoidalPoint p;
    p.lambda = rng.uniform(f.l3 + m, f.l3 + 2.0 * f.span());
    p.mu = rng.uniform(f.l2 + m, f.l3 - m);
    p.nu = rng.uniform(f.l1 + m, f.l2 - m);
    p.signs = {rng.sign(), rng.sign(), rng.sign()};
    return p;
}

}  // namespace

TEST_CASE("potential on the lambda branch") {
    CHECK(field::potential(kP, kF) == doctest::Approx(std::sqrt(20.0) / 13.5).epsilon(1e-12));
    CHECK(field::potential(kP, kF) == doctest::Approx(0.331269).epsilon(1e-5));

    EllipsoidalPoint axis {5.0, 4.0, 1.0, {1, 1, 1}};
    CHECK(field::potential(axis, kF) == doctest::Approx(std::sqrt(5.0) / 2.0).epsilon(1e-12));

    // leading-order decay V ~ lambda^{-1/2}
    EllipsoidalPoint far {1e8, 2.0, 0.5, {1, 1, 1}};
    CHECK(field::potential(far, kF) < 2e-4);

    EllipsoidalPoint singular {4.0 + 1e-14, 4.0, 1.0, {1, 1, 1}};
    CHECK_THROWS_AS(field::potential(singular, kF), std::domain_error);
}

TEST_CASE("potential agrees between the ellipsoidal and Cartesian routes") {
    CartesianPoint c {1.118033988749895, 0.816496580927726, 0.7637626158259734};
    const double v = field::potential_cartesian(c, kF);
    CHECK(v == doctest::Approx(field::potential(kP, kF)).epsilon(1e-10));

    CHECK(field::potential_cartesian({std::sqrt(5.0), 0.0, 0.0}, kF)
          == doctest::Approx(std::sqrt(5.0) / 2.0).epsilon(1e-12));

    SUBCASE("route equivalence over random interior points") {
        Rng rng(99);
        for (int i = 0; i < 1000; ++i) {
            auto p = random_interior(rng, kF);
            const double ve = field::potential(p, kF);
            const double vc = field::potential_cartesian(cf::to_cartesian(p, kF), kF);
            CHECK(std::abs(ve - vc) / ve <= 1e-10);
        }
    }
    SUBCASE("flat triple gives the point potential exactly") {
        const FocalTriple flat {0.0, 0.0, 0.0};
        Rng rng(3);
        for (int i = 0; i < 100; ++i) {
            CartesianPoint c1 {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
            if (c1.r() < 0.1) continue;
            CHECK(field::potential_cartesian(c1, flat) * c1.r() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("connection components in the no-dlambda gauge") {
    auto w = field::connection(kP, kF);
    // 1/2 * (4.5 / ((-3)(1.5))) * (2 / sqrt(0.875))
    CHECK(w.omega_nu == doctest::Approx(-1.069045).epsilon(1e-5));
    // the dmu coefficient carries the sign that makes curl omega = grad V;
    // its magnitude is 1/2 * (3 / 6.75) * (sqrt(0.875) / 2)
    CHECK(std::abs(w.omega_mu) == doctest::Approx(0.103935).epsilon(1e-5));
    CHECK(w.omega_mu == doctest::Approx(-0.103935).epsilon(1e-5));

    // coefficient magnitude diverges (like 1/sqrt(l3 - mu)) as mu -> lambda
    EllipsoidalPoint near {4.0 + 1e-7, 4.0 - 1e-7, 0.5, {1, 1, 1}};
    auto wn = field::connection(near, kF);
    CHECK(std::abs(wn.omega_nu) > 1e3);
    EllipsoidalPoint nearer {4.0 + 1e-9, 4.0 - 1e-9, 0.5, {1, 1, 1}};
    CHECK(std::abs(field::connection(nearer, kF).omega_nu) > 5.0 * std::abs(wn.omega_nu));

    EllipsoidalPoint endpoint {5.0, 4.0, 0.5, {1, 1, 1}};
    CHECK_THROWS_AS(field::connection(endpoint, kF), std::domain_error);
}

TEST_CASE("Cartesian one-form pairs correctly with the chart directions") {
    CartesianPoint c {1.118033988749895, 0.816496580927726, 0.7637626158259734};
    auto w = field::connection_cartesian(c, kF);
    auto well = field::connection(kP, kF);
    auto j = cf::jacobian(kP, kF);
    CHECK(dot(w, j.col(0)) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(std::abs(dot(w, j.col(0))) <= 1e-10);
    CHECK(dot(w, j.col(1)) == doctest::Approx(well.omega_mu).epsilon(1e-10));
    CHECK(dot(w, j.col(2)) == doctest::Approx(well.omega_nu).epsilon(1e-10));

    CHECK_THROWS_AS(field::connection_cartesian({1.0, 0.0, 0.5}, kF), std::domain_error);
}

TEST_CASE("finite-difference field checks stay within tolerance") {
    field::FieldCheckConfig cfg;
    cfg.samples = 100;
    cfg.seed = 7;
    cfg.step = 1e-3;
    auto rep = field::field_checks(kF, cfg);
    CHECK(rep.samples_used == 100);
    CHECK(rep.max_laplacian_residual <= 1e-4);
    CHECK(rep.max_curl_residual <= 1e-4);
    CHECK((rep.curl_sign == 1 || rep.curl_sign == -1));

    SUBCASE("flat limit is the Newtonian potential") {
        auto flat_rep = field::field_checks(FocalTriple {0.0, 0.0, 0.0}, cfg);
        CHECK(flat_rep.max_laplacian_residual <= 1e-6);
    }
}

TEST_CASE("special potentials match the Cartesian evaluation") {
    const FocalTriple eh {0.0, 4.0, 4.0};
    const CartesianPoint y_axis {0.0, 3.0, 0.0};
    const double v = field::special_potential(field::SpecialKind::eguchi_hanson, y_axis, eh);
    CHECK(v == doctest::Approx(1.0 / std::sqrt(13.0)).epsilon(1e-12));
    CHECK(v == doctest::Approx(field::potential_cartesian(y_axis, eh)).epsilon(1e-10));

    // axis closed form: V = x / (x^2 - 4) for x > 2
    for (double x : {2.5, 3.0, 5.0, 10.0}) {
        const CartesianPoint c {x, 0.0, 0.0};
        CHECK(field::special_potential(field::SpecialKind::eguchi_hanson, c, eh)
              == doctest::Approx(x / (x * x - 4.0)).epsilon(1e-12));
        CHECK(field::potential_cartesian(c, eh)
              == doctest::Approx(x / (x * x - 4.0)).epsilon(1e-10));
    }

    const FocalTriple flat {0.0, 0.0, 0.0};
    CHECK(field::special_potential(field::SpecialKind::flat, {0.0, 0.0, 2.0}, flat)
          == doctest::Approx(0.5).epsilon(1e-14));

    CHECK_THROWS_AS(field::special_potential(field::SpecialKind::flat, y_axis, eh),
                    std::domain_error);
    CHECK_THROWS_AS(field::special_potential(field::SpecialKind::eguchi_hanson, y_axis, kF),
                    std::domain_error);

    SUBCASE("two-centre oracle over guarded random points") {
        Rng rng(11);
        int used = 0;
        while (used < 100) {
            CartesianPoint c {rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4)};
            if (field::singular_set_distance(c, eh) < 0.2) continue;
            ++used;
            const double oracle = field::special_potential(field::SpecialKind::eguchi_hanson, c, eh);
            CHECK(std::abs(field::potential_cartesian(c, eh) - oracle) / oracle <= 1e-6);
        }
    }
    SUBCASE("near-flat triples degenerate to 1/r") {
        Rng rng(12);
        for (double eps : {1e-4, 1e-6}) {
            const FocalTriple near_flat {0.0, eps, 2.0 * eps};
            for (int i = 0; i < 50; ++i) {
                CartesianPoint c {rng.uniform(1, 3), rng.uniform(1, 3), rng.uniform(1, 3)};
                const double v1 = field::potential_cartesian(c, near_flat);
                CHECK(std::abs(v1 * c.r() - 1.0) <= 50.0 * eps);
            }
        }
    }
}

TEST_CASE("Staeckel decomposition vanishes identically") {
    CHECK(std::abs(field::staeckel_residual(kP, kF)) <= 1e-12);

    // boundary point, by continuous extension
    EllipsoidalPoint axis {5.0, 4.0, 1.0, {1, 1, 1}};
    CHECK(std::abs(field::staeckel_residual(axis, kF)) <= 1e-12);

    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        auto p = random_interior(rng, kF);
        CHECK(std::abs(field::staeckel_residual(p, kF))
              <= 1e-12 * std::max(1.0, field::potential(p, kF)));
    }
}

TEST_CASE("guard-zone distances") {
    CHECK(field::plane_distance({0.5, -2.0, 1.0}) == doctest::Approx(0.5));
    // focal ellipse of (0,1,4): semiaxes (2, sqrt(3)) in z = 0
    CHECK(field::focal_conic_distance({2.0, 0.0, 0.0}, kF) == doctest::Approx(0.0).epsilon(1e-6));
    // nearest conic to (0,0,1) is the hyperbola x^2 - z^2/3 = 1: d^2 = 5/4
    CHECK(field::focal_conic_distance({0.0, 0.0, 1.0}, kF)
          == doctest::Approx(std::sqrt(1.25)).epsilon(1e-4));
    // centre of the disc: distance |z| above it
    CHECK(field::singular_set_distance({0.0, 0.0, 0.7}, kF) == doctest::Approx(0.7).epsilon(1e-12));
}
