#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ghflow/confocal.hpp"
#include "ghflow/rng.hpp"

using namespace ghflow;
namespace cf = ghflow::confocal;

namespace {

const FocalTriple kF {0.0, 1.0, 4.0};

EllipsoidalPoint random_interior(Rng& rng, const FocalTriple& f) {
    const double m = 1e-3 * f.span();
    EllipsoidalPoint p;
    p.lambda = rng.uniform(f.l3 + m, f.l3 + 2.0 * f.span());
    p.mu = rng.uniform(f.l2 + m, f.l3 - m);
    p.nu = rng.uniform(f.l1 + m, f.l2 - m);
    p.signs = {rng.sign(), rng.sign(), rng.sign()};
    return p;
}

}  // namespace

TEST_CASE("cubic evaluates the factored polynomial and its derivative") {
    auto q = cf::cubic(5.0, kF);
    CHECK(q.value == doctest::Approx(20.0).epsilon(1e-14));
    CHECK(q.derivative == doctest::Approx(29.0).epsilon(1e-14));

    CHECK(cf::cubic(kF.l1, kF).value == 0.0);

    auto qm = cf::cubic(2.0, kF);
    CHECK(qm.value == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(cf::radical_mu(2.0, kF) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("to_cartesian reproduces the worked point") {
    EllipsoidalPoint p {5.0, 2.0, 0.5, {1, 1, 1}};
    auto c = cf::to_cartesian(p, kF);
    CHECK(c.x == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));
    CHECK(c.y == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
    CHECK(c.z == doctest::Approx(std::sqrt(7.0 / 12.0)).epsilon(1e-12));
    CHECK(cf::quadric_residual(c, 5.0, kF) == doctest::Approx(0.0).epsilon(1e-12));

    SUBCASE("vanishing factor kills the matching coordinate") {
        EllipsoidalPoint q {5.0, 2.0, kF.l1, {1, 1, 1}};
        CHECK(cf::to_cartesian(q, kF).x == 0.0);
    }
    SUBCASE("fully degenerate point maps to the origin") {
        EllipsoidalPoint q {kF.l3, kF.l2, kF.l1, {1, 1, 1}};
        auto o = cf::to_cartesian(q, kF);
        CHECK(o.x == 0.0);
        CHECK(o.y == 0.0);
        CHECK(o.z == 0.0);
    }
    SUBCASE("interlacing violation is a domain error") {
        EllipsoidalPoint q {5.0, 0.5, 2.0, {1, 1, 1}};
        CHECK_THROWS_AS(cf::to_cartesian(q, kF), std::domain_error);
    }
}

TEST_CASE("from_cartesian recovers the worked point and flags degeneracies") {
    CartesianPoint c {1.118033988749895, 0.816496580927726, 0.7637626158259734};
    auto inv = cf::from_cartesian(c, kF);
    CHECK(inv.point.lambda == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(inv.point.mu == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(inv.point.nu == doctest::Approx(0.5).epsilon(1e-10));
    CHECK_FALSE(inv.any_boundary());

    SUBCASE("origin lands on the focal constants, all boundary") {
        auto o = cf::from_cartesian({0.0, 0.0, 0.0}, kF);
        CHECK(o.point.lambda == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(o.point.mu == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(o.point.nu == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(o.boundary[0]);
        CHECK(o.boundary[1]);
        CHECK(o.boundary[2]);
    }
    SUBCASE("x-axis point outside the focal region") {
        auto a = cf::from_cartesian({std::sqrt(5.0), 0.0, 0.0}, kF);
        CHECK(a.point.lambda == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(a.point.mu == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(a.point.nu == doctest::Approx(1.0).epsilon(1e-12));
        CHECK_FALSE(a.boundary[0]);
        CHECK(a.boundary[1]);
        CHECK(a.boundary[2]);
    }
}

TEST_CASE("round trip over random interior points") {
    Rng rng(20240601);
    const double tol = 1e-8 * kF.span();
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        auto p = random_interior(rng, kF);
        auto c = cf::to_cartesian(p, kF);
        auto inv = cf::from_cartesian(c, kF);
        worst = std::max(worst, std::abs(inv.point.lambda - p.lambda));
        worst = std::max(worst, std::abs(inv.point.mu - p.mu));
        worst = std::max(worst, std::abs(inv.point.nu - p.nu));
        CHECK(inv.point.signs[0] == p.signs[0]);
        CHECK(inv.point.signs[1] == p.signs[1]);
        CHECK(inv.point.signs[2] == p.signs[2]);
        // interlacing of the recovered roots
        REQUIRE(inv.point.nu >= kF.l1 - tol);
        REQUIRE(inv.point.nu <= kF.l2 + tol);
        REQUIRE(inv.point.mu >= kF.l2 - tol);
        REQUIRE(inv.point.mu <= kF.l3 + tol);
        REQUIRE(inv.point.lambda >= kF.l3 - tol);
        // quadric identity
        CHECK(std::abs(cf::quadric_residual(c, p.lambda, kF)) <= 1e-10);
    }
    CHECK(worst <= tol);
}

TEST_CASE("scale factors at the worked point") {
    EllipsoidalPoint p {5.0, 2.0, 0.5, {1, 1, 1}};
    auto h = cf::scale_factors(p, kF);
    CHECK(h.h_lambda == doctest::Approx(std::sqrt(13.5) / (2.0 * std::sqrt(20.0))).epsilon(1e-12));
    CHECK(h.h_mu == doctest::Approx(std::sqrt(4.5) / 4.0).epsilon(1e-12));
    CHECK(h.h_nu == doctest::Approx(std::sqrt(6.75) / (2.0 * std::sqrt(0.875))).epsilon(1e-12));
    CHECK(h.h_lambda == doctest::Approx(0.410791).epsilon(1e-5));
    CHECK(h.h_mu == doctest::Approx(0.530330).epsilon(1e-5));
    CHECK(h.h_nu == doctest::Approx(1.388733).epsilon(1e-5));

    EllipsoidalPoint boundary {5.0, 4.0, 1.0, {1, 1, 1}};
    CHECK_THROWS_AS(cf::scale_factors(boundary, kF), std::domain_error);
}

TEST_CASE("jacobian is orthogonal with h^2 on the diagonal") {
    EllipsoidalPoint p {5.0, 2.0, 0.5, {1, 1, 1}};
    auto j = cf::jacobian(p, kF);
    auto jtj = j.transposed() * j;
    CHECK(jtj(0, 0) == doctest::Approx(0.168749).epsilon(1e-5));
    CHECK(jtj(1, 1) == doctest::Approx(0.281250).epsilon(1e-5));
    CHECK(jtj(2, 2) == doctest::Approx(1.928580).epsilon(1e-5));
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            if (i != k) CHECK(std::abs(jtj(i, k)) <= 1e-10);
    // factored partial dx/dlambda = x / (2(lambda - l1))
    CHECK(j(0, 0) == doctest::Approx(std::sqrt(1.25) / 10.0).epsilon(1e-12));

    SUBCASE("diagonal matches the scale factors over random points") {
        Rng rng(7);
        for (int i = 0; i < 200; ++i) {
            auto q = random_interior(rng, kF);
            auto jj = cf::jacobian(q, kF);
            auto g = jj.transposed() * jj;
            auto h = cf::scale_factors(q, kF);
            const double d[3] = {h.h_lambda, h.h_mu, h.h_nu};
            for (int k = 0; k < 3; ++k)
                CHECK(g(k, k) == doctest::Approx(d[k] * d[k]).epsilon(1e-8));
        }
    }
}

TEST_CASE("quadric residual edge cases") {
    CartesianPoint axis {3.0, 0.0, 0.0};  // x^2 = lambda - l1 exactly
    CHECK(cf::quadric_residual(axis, 9.0, kF) == 0.0);
    CHECK(std::abs(cf::quadric_residual({std::sqrt(5.0), 0.0, 0.0}, 5.0, kF)) <= 1e-15);

    CartesianPoint c {2.0 * 1.118033988749895, 2.0 * 0.816496580927726, 2.0 * 0.7637626158259734};
    CHECK(cf::quadric_residual(c, 5.0, kF) == doctest::Approx(3.0).epsilon(1e-12));

    CHECK_THROWS_AS(cf::quadric_residual(axis, 4.0, kF), std::domain_error);
    CHECK(cf::quadric_residual({2.0 * 3.0, 0.0, 0.0}, 9.0, kF) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("lambda_root handles degenerate triples") {
    const FocalTriple flat {0.0, 0.0, 0.0};
    CHECK(cf::lambda_root({1.0, 2.0, 2.0}, flat) == doctest::Approx(9.0).epsilon(1e-12));

    const FocalTriple eh {0.0, 4.0, 4.0};
    CHECK(cf::lambda_root({0.0, 3.0, 0.0}, eh) == doctest::Approx(13.0).epsilon(1e-12));

    CHECK_THROWS_AS(cf::lambda_root({1.0, 0.0, 0.0}, FocalTriple {4.0, 1.0, 0.0}),
                    std::invalid_argument);
}
