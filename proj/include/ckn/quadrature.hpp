#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ckn/fields.hpp"
#include "ckn/reduce.hpp"

namespace ckn {

struct Budget {
    int radial_nodes = 48;
    int angular_nodes = 24;
    int refine_levels = 1;   // one doubling pass for the a-posteriori error estimate
    double tolerance = 0.0;  // 0 = unset; only drives the tolerance_exceeded flag
    bool parallel = true;
};

struct IntegralEstimate {
    double value = 0.0;
    double error_estimate = 0.0;
    std::array<int, 4> grid_levels{};  // {radial_coarse, angular_coarse, radial_fine, angular_fine}
    bool tolerance_exceeded = false;
};

struct MultiEstimate {
    std::vector<double> value;
    std::vector<double> error_estimate;
    std::array<int, 4> grid_levels{};
};

struct Rule1D {
    std::vector<double> x, w;
};

Rule1D gauss_legendre(int k);    // on (-1, 1), weight 1
Rule1D gauss_chebyshev2(int k);  // on (-1, 1), weight sqrt(1-t^2)

// ∫_0^∞ r^{n-1-s} h(r) dr after r = t/(1-t); never places a node at r = 0.
Rule1D radial_rule(int k, int n, double s);

double sphere_area(int d);  // unnormalized |S^d|

// Product rule on S^d ⊂ R^{d+1} with the normalized surface measure. Polar
// angles use Gauss rules in t = cos(theta) with the sin-power Jacobian
// absorbed into the weight function (Gauss-Legendre for even powers,
// Gauss-Chebyshev second kind for odd); the azimuth is uniform. Nodes are
// generated on demand from the per-angle tables.
class SphereRule {
public:
    SphereRule(int d, int nodes_per_angle);
    int dim() const { return d_; }
    std::size_t count() const { return count_; }
    void node(std::size_t idx, double* x, double& w) const;

private:
    int d_;
    int per_angle_;
    std::vector<Rule1D> polar_;
    double norm_ = 1.0;
    std::size_t count_ = 0;
};

// Materialized grids, mainly for inspection and tests.
struct QuadratureGrid {
    enum class Kind { EuclideanSphericalRadial, SphereProduct };
    Kind kind;
    int dim;            // ambient dimension of the stored points
    int radial_nodes;   // 0 for sphere grids
    int angular_nodes;  // per angle
    std::vector<std::pair<Point, double>> nodes;
};

QuadratureGrid build_sphere_grid(int sphere_dim, int nodes_per_angle);
QuadratureGrid build_rn_grid(int n, int radial_nodes, int nodes_per_angle, double s);

namespace detail {

std::string node_str(const double* x, int n);

// One quadrature pass over R^n at fixed node counts. g(x, r, out); the measure
// supplied is r^{n-1-s} dr dS(omega) with dS unnormalized.
template <class F>
void rn_pass(F& g, int n, double s, int radial, int angular, int n_out, bool parallel, double* out) {
    const Rule1D rad = radial_rule(radial, n, s);
    const SphereRule sph(n - 1, angular);
    const double area = sphere_area(n - 1);
    const std::size_t scount = sph.count();
    const std::size_t total = scount*static_cast<std::size_t>(radial);

    blocked_sum(total, n_out, [&](std::size_t i, double* row) {
        const std::size_t ir = i/scount;
        const std::size_t is = i - ir*scount;
        double omega[kMaxDim];
        double ws;
        sph.node(is, omega, ws);
        const double r = rad.x[ir];
        double x[kMaxDim];
        for (int k = 0; k < n; ++k) x[k] = r*omega[k];
        g(std::span<const double>(x, static_cast<std::size_t>(n)), r, std::span<double>(row, static_cast<std::size_t>(n_out)));
        const double scale = rad.w[ir]*ws*area;
        for (int k = 0; k < n_out; ++k) {
            row[k] *= scale;
            if (!std::isfinite(row[k]))
                throw QuadratureError("non-finite integrand value at node " + node_str(x, n));
        }
    }, out, parallel);
}

template <class F>
void sn_pass(F& g, int d, int angular, int n_out, bool parallel, double* out) {
    const SphereRule sph(d, angular);
    blocked_sum(sph.count(), n_out, [&](std::size_t i, double* row) {
        double x[kMaxDim];
        double w;
        sph.node(i, x, w);
        g(std::span<const double>(x, static_cast<std::size_t>(d + 1)), std::span<double>(row, static_cast<std::size_t>(n_out)));
        for (int k = 0; k < n_out; ++k) {
            row[k] *= w;
            if (!std::isfinite(row[k]))
                throw QuadratureError("non-finite integrand value at node " + node_str(x, d + 1));
        }
    }, out, parallel);
}

}  // namespace detail

// Multi-output integral over R^n against r^{n-1-s} dr dS; per-output radial
// weights beyond that belong in the integrand, which receives r = |x|.
template <class F>
MultiEstimate integrate_rn_multi(F&& g, int n, int n_out, const Budget& b, double s = 0.0) {
    if (n < 1) throw SpecError("integrate_rn needs n >= 1");
    if (s >= n) throw SpecError("weight exponent must satisfy s < n for integrability");
    MultiEstimate est;
    est.value.assign(static_cast<std::size_t>(n_out), 0.0);
    est.error_estimate.assign(static_cast<std::size_t>(n_out), 0.0);
    const int rc = b.radial_nodes, ac = b.angular_nodes;
    if (b.refine_levels <= 0) {
        est.grid_levels = {rc, ac, rc, ac};
        detail::rn_pass(g, n, s, rc, ac, n_out, b.parallel, est.value.data());
        return est;
    }
    const int rf = 2*rc, af = 2*ac;
    est.grid_levels = {rc, ac, rf, af};
    std::vector<double> coarse(static_cast<std::size_t>(n_out));
    detail::rn_pass(g, n, s, rc, ac, n_out, b.parallel, coarse.data());
    detail::rn_pass(g, n, s, rf, af, n_out, b.parallel, est.value.data());
    for (int k = 0; k < n_out; ++k)
        est.error_estimate[k] = std::abs(est.value[k] - coarse[k]);
    return est;
}

template <class F>
MultiEstimate integrate_sn_multi(F&& g, int sphere_dim, int n_out, const Budget& b) {
    if (sphere_dim < 1) throw SpecError("integrate_sn needs sphere dimension >= 1");
    MultiEstimate est;
    est.value.assign(static_cast<std::size_t>(n_out), 0.0);
    est.error_estimate.assign(static_cast<std::size_t>(n_out), 0.0);
    const int ac = b.angular_nodes;
    if (b.refine_levels <= 0) {
        est.grid_levels = {0, ac, 0, ac};
        detail::sn_pass(g, sphere_dim, ac, n_out, b.parallel, est.value.data());
        return est;
    }
    const int af = 2*ac;
    est.grid_levels = {0, ac, 0, af};
    std::vector<double> coarse(static_cast<std::size_t>(n_out));
    detail::sn_pass(g, sphere_dim, ac, n_out, b.parallel, coarse.data());
    detail::sn_pass(g, sphere_dim, af, n_out, b.parallel, est.value.data());
    for (int k = 0; k < n_out; ++k)
        est.error_estimate[k] = std::abs(est.value[k] - coarse[k]);
    return est;
}

namespace detail {

inline IntegralEstimate single(const MultiEstimate& m, const Budget& b) {
    IntegralEstimate e;
    e.value = m.value[0];
    e.error_estimate = m.error_estimate[0];
    e.grid_levels = m.grid_levels;
    e.tolerance_exceeded = b.tolerance > 0.0 && e.error_estimate > b.tolerance;
    return e;
}

}  // namespace detail

// ∫_{R^n} g(x) |x|^{-s} dx with the weight absorbed analytically into the radial rule.
template <class F>
IntegralEstimate integrate_weighted_rn(F&& g, double s, int n, const Budget& b) {
    auto wrap = [&g](std::span<const double> x, double, std::span<double> out) { out[0] = g(x); };
    return detail::single(integrate_rn_multi(wrap, n, 1, b, s), b);
}

template <class F>
IntegralEstimate integrate_rn(F&& g, int n, const Budget& b) {
    return integrate_weighted_rn(std::forward<F>(g), 0.0, n, b);
}

// ∫_{S^n} g dσ with the normalized surface measure.
template <class F>
IntegralEstimate integrate_sn(F&& g, int sphere_dim, const Budget& b) {
    auto wrap = [&g](std::span<const double> x, std::span<double> out) { out[0] = g(x); };
    return detail::single(integrate_sn_multi(wrap, sphere_dim, 1, b), b);
}

}  // namespace ckn
