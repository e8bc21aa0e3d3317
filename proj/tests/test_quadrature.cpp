#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ckn/quadrature.hpp"
#include "support.hpp"

using namespace ckn;
using namespace testsup;

namespace {
constexpr double kPi = std::numbers::pi;

double norm_sq(std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += c*c;
    return s;
}
}  // namespace

TEST_CASE("gauss-legendre integrates polynomials of degree 2k-1") {
    const Rule1D r = gauss_legendre(6);
    for (int deg = 0; deg <= 11; ++deg) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i]*std::pow(r.x[i], deg);
        const double exact = deg % 2 == 1 ? 0.0 : 2.0/(deg + 1);
        CHECK(s == doctest::Approx(exact).epsilon(1e-14).scale(1.0));
    }
}

TEST_CASE("gauss-chebyshev2 integrates polynomials against sqrt(1-t^2)") {
    const Rule1D r = gauss_chebyshev2(8);
    // ∫ t^{2m} sqrt(1-t^2) dt = pi/2 * C_m with C_0 = 1/2... use exact values
    const double exact0 = kPi/2.0;          // m = 0
    const double exact2 = kPi/8.0;          // ∫ t^2 sqrt(1-t^2) = pi/8
    const double exact4 = kPi/16.0;         // ∫ t^4 sqrt(1-t^2) = pi/16
    double s0 = 0.0, s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        s0 += r.w[i];
        s2 += r.w[i]*r.x[i]*r.x[i];
        s4 += r.w[i]*std::pow(r.x[i], 4);
    }
    CHECK(s0 == doctest::Approx(exact0).epsilon(1e-14));
    CHECK(s2 == doctest::Approx(exact2).epsilon(1e-14));
    CHECK(s4 == doctest::Approx(exact4).epsilon(1e-14));
}

TEST_CASE("gaussian integral over R^3 hits pi^{3/2} within 1e-8") {
    Budget b;
    b.radial_nodes = 64;
    b.angular_nodes = 32;
    const auto est = integrate_rn([](std::span<const double> x) { return std::exp(-norm_sq(x)); }, 3, b);
    CHECK(std::abs(est.value - std::pow(kPi, 1.5)) <= 1e-8);
    CHECK(est.error_estimate <= 1e-7);
}

TEST_CASE("weighted gaussian integrals: s = 1 gives 2pi, s = 2 gives 2pi^{3/2}, s = 0 reduces") {
    Budget b;
    b.radial_nodes = 64;
    b.angular_nodes = 24;
    auto g = [](std::span<const double> x) { return std::exp(-norm_sq(x)); };
    CHECK(integrate_weighted_rn(g, 1.0, 3, b).value == doctest::Approx(2.0*kPi).epsilon(1e-10));
    CHECK(integrate_weighted_rn(g, 2.0, 3, b).value ==
          doctest::Approx(2.0*std::pow(kPi, 1.5)).epsilon(1e-10));

    SplitMix64 rng(55);
    for (int it = 0; it < 10; ++it) {
        const double a = rng.uniform(0.5, 2.0), c = rng.uniform(-0.5, 0.5);
        auto h = [a, c](std::span<const double> x) {
            return std::exp(-a*norm_sq(x)) + c*x[0]*std::exp(-norm_sq(x));
        };
        const double w0 = integrate_weighted_rn(h, 0.0, 3, b).value;
        const double plain = integrate_rn(h, 3, b).value;
        CHECK(std::abs(w0 - plain) <= 1e-13*std::max(1.0, std::abs(plain)));
    }

    CHECK_THROWS_AS(integrate_weighted_rn(g, 3.0, 3, b), SpecError);
}

TEST_CASE("odd integrand vanishes") {
    Budget b;
    b.radial_nodes = 32;
    b.angular_nodes = 16;
    const auto est = integrate_rn(
        [](std::span<const double> x) { return x[0]*std::exp(-norm_sq(x)); }, 2, b);
    CHECK(std::abs(est.value) <= 1e-12);
}

TEST_CASE("sphere rule: constants, coordinate moments, odd symmetry") {
    Budget b;
    b.angular_nodes = 16;
    for (int n = 1; n <= 5; ++n) {
        const auto one = integrate_sn([](std::span<const double>) { return 1.0; }, n, b);
        CHECK(std::abs(one.value - 1.0) <= 1e-14);
        const auto x0sq = integrate_sn([](std::span<const double> x) { return x[0]*x[0]; }, n, b);
        CHECK(x0sq.value == doctest::Approx(1.0/(n + 1)).epsilon(1e-12));
    }
    const auto odd = integrate_sn([](std::span<const double> x) { return x[0]; }, 2, b);
    CHECK(std::abs(odd.value) <= 1e-14);
}

TEST_CASE("sphere-product weights are positive and sum to 1 within 1e-12") {
    for (int n = 1; n <= 5; ++n) {
        const QuadratureGrid grid = build_sphere_grid(n, n <= 3 ? 12 : 6);
        double sum = 0.0;
        for (const auto& [p, w] : grid.nodes) {
            CHECK(w > 0.0);
            sum += w;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("k angular nodes integrate all sphere polynomials of degree <= k-1 to 1e-12") {
    const int k = 6;
    for (int n = 1; n <= 5; ++n) {
        const int d = n + 1;
        SphereRule rule(n, k);
        // enumerate monomials of total degree <= k-1
        std::vector<int> alpha(static_cast<std::size_t>(d), 0);
        auto run = [&](auto&& self, int pos, int remaining) -> void {
            if (pos == d) {
                double s = 0.0;
                std::vector<double> x(static_cast<std::size_t>(d));
                double w;
                for (std::size_t i = 0; i < rule.count(); ++i) {
                    rule.node(i, x.data(), w);
                    double term = w;
                    for (int c = 0; c < d; ++c)
                        for (int rep = 0; rep < alpha[static_cast<std::size_t>(c)]; ++rep)
                            term *= x[static_cast<std::size_t>(c)];
                    s += term;
                }
                CHECK(std::abs(s - sphere_moment(alpha)) <= 1e-12);
                return;
            }
            for (int a = 0; a <= remaining; ++a) {
                alpha[static_cast<std::size_t>(pos)] = a;
                self(self, pos + 1, remaining - a);
            }
            alpha[static_cast<std::size_t>(pos)] = 0;
        };
        run(run, 0, k - 1);
    }
}

TEST_CASE("doubling all node counts changes values by less than the reported estimate") {
    auto g = [](std::span<const double> x) { return std::exp(-norm_sq(x))*(1.0 + x[0]*x[0]); };
    Budget coarse;
    coarse.radial_nodes = 16;
    coarse.angular_nodes = 8;
    Budget fine = coarse;
    fine.radial_nodes *= 2;
    fine.angular_nodes *= 2;
    const auto e1 = integrate_rn(g, 3, coarse);
    const auto e2 = integrate_rn(g, 3, fine);
    CHECK(std::abs(e2.value - e1.value) <= e1.error_estimate + 1e-14);
}

TEST_CASE("non-finite integrand reports the offending node") {
    Budget b;
    b.radial_nodes = 8;
    b.angular_nodes = 6;
    auto bad = [](std::span<const double> x) {
        return x[0] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    };
    CHECK_THROWS_AS(integrate_rn(bad, 2, b), QuadratureError);
}

TEST_CASE("tolerance flag set when the estimate exceeds the request") {
    Budget b;
    b.radial_nodes = 4;
    b.angular_nodes = 4;
    b.tolerance = 1e-16;
    const auto est = integrate_rn(
        [](std::span<const double> x) { return std::exp(-norm_sq(x))*std::cos(3.0*x[0]); }, 3, b);
    CHECK(est.tolerance_exceeded);
}
