#include <doctest.h>

#include <cmath>

#include "ckn/sphere_ops.hpp"
#include "support.hpp"

using namespace ckn;
using namespace testsup;

TEST_CASE("gamma closed form at basis points") {
    const Point e0{{1.0, 0.0, 0.0}};
    CHECK(gamma_coordinate(0, 0, e0) == doctest::Approx(0.0));
    CHECK(gamma_coordinate(0, 1, e0) == doctest::Approx(0.0));
    CHECK(gamma_coordinate(1, 1, e0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(gamma_coordinate(3, 0, e0), SpecError);
    CHECK_THROWS_AS(gamma_coordinate(0, 0, Point{{0.5, 0.0, 0.0}}), SpecError);
}

TEST_CASE("gamma_coordinate agrees with the AD spherical gradient at random points") {
    SplitMix64 rng(2024);
    for (int n : {2, 3, 4}) {
        const int d = n + 1;
        for (int it = 0; it < 100; ++it) {
            const Point x = random_sphere_point(rng, d);
            const int k = rng.index(d);
            FieldSpec coord;
            coord.domain = {DomainKind::SphereAmbient, d};
            coord.codomain = CodomainKind::Real;
            coord.family = AffineHarmonic{0.0, 1.0, k};
            const auto grads = spherical_gradient(coord, x);
            for (int j = 0; j < d; ++j)
                CHECK(std::abs(grads[0].components[static_cast<std::size_t>(j)] -
                               gamma_coordinate(j, k, x)) <= 1e-12);
        }
    }
}

TEST_CASE("spherical gradient of x_0^2 via the chain rule") {
    const Domain dom{DomainKind::SphereAmbient, 3};
    const FieldSpec f = real_field(dom, "(pow (coord 0) 2)");
    SplitMix64 rng(88);
    for (int it = 0; it < 20; ++it) {
        const double t = rng.uniform(-0.95, 0.95);
        const double a = std::cos(t), b = std::sin(t);
        const Point x{{a, b, 0.0}};
        const auto g = spherical_gradient(f, x);
        // 2 x_0 Gamma(x_0) = (2a(1-a^2), -2a^2 b, 0)
        CHECK(g[0].components[0] == doctest::Approx(2.0*a*(1.0 - a*a)).epsilon(1e-12));
        CHECK(g[0].components[1] == doctest::Approx(-2.0*a*a*b).epsilon(1e-12));
        CHECK(std::abs(g[0].components[2]) <= 1e-13);
    }
}

TEST_CASE("constant fields have zero spherical gradient and tangency holds") {
    const Domain dom{DomainKind::SphereAmbient, 4};
    const FieldSpec c = real_field(dom, "(add 2 (mul 0 (coord 0)))");
    SplitMix64 rng(99);
    for (int it = 0; it < 10; ++it) {
        const Point x = random_sphere_point(rng, 4);
        const auto g = spherical_gradient(c, x);
        double norm = 0.0, dot = 0.0;
        for (int j = 0; j < 4; ++j) {
            norm += g[0].components[static_cast<std::size_t>(j)]*g[0].components[static_cast<std::size_t>(j)];
            dot += g[0].components[static_cast<std::size_t>(j)]*g[0].base.coords[static_cast<std::size_t>(j)];
        }
        CHECK(std::sqrt(norm) <= 1e-14);
        CHECK(std::abs(dot) <= 1e-12);
    }
}

TEST_CASE("gamma linearity pointwise") {
    const Domain dom{DomainKind::SphereAmbient, 3};
    const FieldSpec f = real_field(dom, "(exp (mul 0.7 (coord 0)))");
    const FieldSpec g = real_field(dom, "(cos (coord 1))");
    const double a = 1.7, b = -0.6;
    const FieldSpec combo = real_field(
        dom, "(add (mul 1.7 (exp (mul 0.7 (coord 0)))) (mul -0.6 (cos (coord 1))))");
    SplitMix64 rng(5);
    for (int it = 0; it < 25; ++it) {
        const Point x = random_sphere_point(rng, 3);
        const auto gf = spherical_gradient(f, x);
        const auto gg = spherical_gradient(g, x);
        const auto gc = spherical_gradient(combo, x);
        for (int j = 0; j < 3; ++j) {
            const double want = a*gf[0].components[static_cast<std::size_t>(j)] +
                                b*gg[0].components[static_cast<std::size_t>(j)];
            CHECK(std::abs(gc[0].components[static_cast<std::size_t>(j)] - want) <= 1e-13);
        }
    }
}

TEST_CASE("integration by parts: trivial and moment-oracle cases") {
    Budget b;
    b.angular_nodes = 16;
    const Domain dom{DomainKind::SphereAmbient, 3};

    const FieldSpec one = real_field(dom, "(add 1 (mul 0 (coord 0)))");
    CHECK(integration_by_parts_residual(one, one, 0, b) <= 1e-14);

    const FieldSpec x0 = real_field(dom, "(coord 0)");
    CHECK(integration_by_parts_residual(x0, x0, 0, b) <= 1e-13);

    // f = x_0, g = x_0^2, j = 0 on S^2: both sides equal 2/15 by the moment oracle
    const FieldSpec x0sq = real_field(dom, "(pow (coord 0) 2)");
    const IbpCheck chk = integration_by_parts_check(x0, x0sq, 0, b);
    CHECK(chk.residual <= 1e-10);

    // lhs = ∫ (1 - x_0^2) x_0^2 = 1/3 - 1/5 = 2/15, from the independent moment oracle
    const double lhs_expected = sphere_moment({2, 0, 0}) - sphere_moment({4, 0, 0});
    CHECK(lhs_expected == doctest::Approx(2.0/15.0).epsilon(1e-14));
    const auto lhs = integrate_sn(
        [&](std::span<const double> x) {
            Point p;
            p.coords.assign(x.begin(), x.end());
            return eval_jet1(restrict_to_sphere(x0), p).grad[0][0]*x[0]*x[0];
        },
        2, b);
    CHECK(lhs.value == doctest::Approx(lhs_expected).epsilon(1e-12));
}

TEST_CASE("integration by parts holds for random smooth pairs within 10x the estimate") {
    SplitMix64 rng(1234);
    Budget b;
    b.angular_nodes = 12;
    for (int n : {2, 3}) {
        const Domain dom{DomainKind::SphereAmbient, n + 1};
        for (int it = 0; it < 6; ++it) {
            const double cf = rng.uniform(0.3, 1.0), cg = rng.uniform(0.3, 1.0);
            const int af = rng.index(n + 1), ag = rng.index(n + 1);
            char bf[96], bg[96];
            std::snprintf(bf, sizeof bf, "(exp (mul %.17g (coord %d)))", cf, af);
            std::snprintf(bg, sizeof bg, "(cos (mul %.17g (coord %d)))", cg, ag);
            const FieldSpec f = real_field(dom, bf);
            const FieldSpec g = real_field(dom, bg);
            const int j = rng.index(n + 1);
            const IbpCheck chk = integration_by_parts_check(f, g, j, b);
            CHECK(chk.residual <= 10.0*chk.error_estimate + 1e-13);
        }
    }
}
