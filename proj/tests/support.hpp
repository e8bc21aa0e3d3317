#pragma once

// Test-side oracles, independent of the library paths they check: central
// finite differences for jets, analytic sphere moments for quadrature.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ckn/fields.hpp"
#include "ckn/rng.hpp"

namespace testsup {

inline double value_at(const ckn::FieldSpec& f, int comp, const ckn::Point& x) {
    return ckn::eval_jet1(f, x).value[comp];
}

inline double fd_grad(const ckn::FieldSpec& f, int comp, ckn::Point x, int k, double h = 1e-5) {
    const double x0 = x.coords[static_cast<std::size_t>(k)];
    x.coords[static_cast<std::size_t>(k)] = x0 + h;
    const double fp = value_at(f, comp, x);
    x.coords[static_cast<std::size_t>(k)] = x0 - h;
    const double fm = value_at(f, comp, x);
    return (fp - fm)/(2.0*h);
}

inline double fd_hess(const ckn::FieldSpec& f, int comp, ckn::Point x, int i, int j, double h = 1e-4) {
    if (i == j) {
        const double x0 = x.coords[static_cast<std::size_t>(i)];
        const double f0 = value_at(f, comp, x);
        x.coords[static_cast<std::size_t>(i)] = x0 + h;
        const double fp = value_at(f, comp, x);
        x.coords[static_cast<std::size_t>(i)] = x0 - h;
        const double fm = value_at(f, comp, x);
        return (fp - 2.0*f0 + fm)/(h*h);
    }
    const double xi = x.coords[static_cast<std::size_t>(i)], xj = x.coords[static_cast<std::size_t>(j)];
    auto at = [&](double di, double dj) {
        x.coords[static_cast<std::size_t>(i)] = xi + di;
        x.coords[static_cast<std::size_t>(j)] = xj + dj;
        return value_at(f, comp, x);
    };
    return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h))/(4.0*h*h);
}

// ∫_{S^d} prod x_i^{a_i} dσ for the normalized surface measure (Folland's formula)
inline double sphere_moment(const std::vector<int>& alpha) {
    const int d = static_cast<int>(alpha.size()) - 1;
    int total_half = 0;
    for (int a : alpha) {
        if (a % 2 == 1) return 0.0;
        total_half += a/2;
    }
    double logv = std::lgamma(0.5*(d + 1)) - std::lgamma(0.5*(d + 1) + total_half);
    for (int a : alpha) logv += std::lgamma(0.5*a + 0.5) - std::lgamma(0.5);
    return std::exp(logv);
}

inline ckn::Point random_point(ckn::SplitMix64& rng, int dim, double lo, double hi,
                               double min_radius = 0.0) {
    for (;;) {
        ckn::Point p;
        p.coords.resize(static_cast<std::size_t>(dim));
        double r2 = 0.0;
        for (auto& c : p.coords) {
            c = rng.uniform(lo, hi);
            r2 += c*c;
        }
        if (std::sqrt(r2) >= min_radius) return p;
    }
}

inline ckn::Point random_sphere_point(ckn::SplitMix64& rng, int ambient) {
    for (;;) {
        ckn::Point p = random_point(rng, ambient, -1.0, 1.0);
        double r2 = 0.0;
        for (double c : p.coords) r2 += c*c;
        const double r = std::sqrt(r2);
        if (r >= 0.2 && r <= 1.0) {
            for (auto& c : p.coords) c /= r;
            return p;
        }
    }
}

inline ckn::FieldSpec real_field(const ckn::Domain& dom, const std::string& expr) {
    ckn::FieldSpec f;
    f.domain = dom;
    f.codomain = ckn::CodomainKind::Real;
    ckn::CustomField c;
    c.sources = {expr};
    c.comps = {ckn::parse_expr(expr, dom)};
    f.family = std::move(c);
    return f;
}

inline ckn::FieldSpec complex_field(const ckn::Domain& dom, const std::string& re,
                                    const std::string& im) {
    ckn::FieldSpec f;
    f.domain = dom;
    f.codomain = ckn::CodomainKind::Complex;
    ckn::CustomField c;
    c.sources = {re, im};
    c.comps = {ckn::parse_expr(re, dom), ckn::parse_expr(im, dom)};
    f.family = std::move(c);
    return f;
}

inline ckn::FieldSpec vector_field(const ckn::Domain& dom, const std::vector<std::string>& exprs) {
    ckn::FieldSpec f;
    f.domain = dom;
    f.codomain = ckn::CodomainKind::Vector;
    ckn::CustomField c;
    for (const auto& e : exprs) {
        c.sources.push_back(e);
        c.comps.push_back(ckn::parse_expr(e, dom));
    }
    f.family = std::move(c);
    return f;
}

inline ckn::FieldSpec gaussian(int n, std::vector<double> center = {}, double b = 1.0) {
    ckn::FieldSpec f;
    f.domain = {ckn::DomainKind::Euclidean, n};
    f.codomain = ckn::CodomainKind::Real;
    ckn::GaussianReal g;
    g.center = center.empty() ? std::vector<double>(static_cast<std::size_t>(n), 0.0) : center;
    g.inv_width = b;
    f.family = std::move(g);
    return f;
}

inline ckn::FieldSpec chirped(int n, std::vector<double> k, double b = 1.0) {
    ckn::FieldSpec f;
    f.domain = {ckn::DomainKind::Euclidean, n};
    f.codomain = ckn::CodomainKind::Complex;
    f.family = ckn::ChirpedGaussian{std::move(k), b};
    return f;
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace testsup
