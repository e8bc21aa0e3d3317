#include <doctest.h>

#include <cmath>

#include "ckn/dual.hpp"

using namespace ckn;

namespace {

// h(x, y) = exp(-x^2/2) * sin(2y) / (1 + x*y)
template <class S>
S sample_function(S x, S y) {
    using std::exp;
    using std::sin;
    return exp(x*x*(-0.5))*sin(y*2.0)/(x*y + 1.0);
}

double fd2(double (*f)(double, double), double x, double y, int which, double h) {
    if (which == 0) return (f(x + h, y) - f(x - h, y))/(2*h);
    return (f(x, y + h) - f(x, y - h))/(2*h);
}

double plain(double x, double y) { return sample_function(x, y); }

}  // namespace

TEST_CASE("Dual1 gradient matches finite differences on a composed function") {
    const double x = 0.7, y = -0.4;
    Dual1 dx = Dual1::variable(x, 0, 2);
    Dual1 dy = Dual1::variable(y, 1, 2);
    Dual1 r = sample_function(dx, dy);

    CHECK(r.v == doctest::Approx(plain(x, y)).epsilon(1e-14));
    CHECK(r.g[0] == doctest::Approx(fd2(plain, x, y, 0, 1e-6)).epsilon(1e-8));
    CHECK(r.g[1] == doctest::Approx(fd2(plain, x, y, 1, 1e-6)).epsilon(1e-8));
}

TEST_CASE("Dual2 second derivatives match analytic values") {
    // f(x) = exp(a x), f'' = a^2 exp(a x)
    const double a = 1.3, x0 = 0.25;
    Dual2 x = Dual2::variable(x0, 0, 1);
    Dual2 r = exp(x*a);
    CHECK(r.v == doctest::Approx(std::exp(a*x0)));
    CHECK(r.g[0] == doctest::Approx(a*std::exp(a*x0)));
    CHECK(r.hess(0, 0) == doctest::Approx(a*a*std::exp(a*x0)));

    // g = sin(x)*cos(y): g_xy = -cos(x)*(-sin(y)) ... = -cos(x) sin(y)
    Dual2 gx = Dual2::variable(0.3, 0, 2);
    Dual2 gy = Dual2::variable(1.1, 1, 2);
    Dual2 g = sin(gx)*cos(gy);
    CHECK(g.hess(0, 1) == doctest::Approx(-std::cos(0.3)*std::sin(1.1)).epsilon(1e-14));
    CHECK(g.hess(1, 0) == g.hess(0, 1));
}

TEST_CASE("Dual division and pow") {
    Dual2 x = Dual2::variable(2.0, 0, 1);
    Dual2 r = 1.0/x;
    CHECK(r.v == doctest::Approx(0.5));
    CHECK(r.g[0] == doctest::Approx(-0.25));
    CHECK(r.hess(0, 0) == doctest::Approx(0.25));

    Dual2 p = pow(x, 2.5);
    CHECK(p.v == doctest::Approx(std::pow(2.0, 2.5)));
    CHECK(p.g[0] == doctest::Approx(2.5*std::pow(2.0, 1.5)));
    CHECK(p.hess(0, 0) == doctest::Approx(2.5*1.5*std::pow(2.0, 0.5)));

    Dual2 s = sqrt(x);
    CHECK(s.v == doctest::Approx(std::sqrt(2.0)));
    CHECK(s.g[0] == doctest::Approx(0.5/std::sqrt(2.0)));
}

TEST_CASE("pow with zero exponent is the constant 1") {
    Dual1 x = Dual1::variable(3.0, 0, 1);
    Dual1 r = pow(x, 0.0);
    CHECK(r.v == 1.0);
    CHECK(r.g[0] == 0.0);
}
