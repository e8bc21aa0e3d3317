#include "ckn/selftest.hpp"

#include <cmath>
#include <cstdio>

#include "ckn/phase.hpp"
#include "ckn/rng.hpp"
#include "ckn/sphere_ops.hpp"
#include "ckn/sphere_stats.hpp"

namespace ckn {

namespace {

double field_value(const FieldSpec& f, int comp, const Point& x) {
    return eval_jet1(f, x).value[comp];
}

double fd_gradient(const FieldSpec& f, int comp, Point x, int k, double h) {
    const double x0 = x.coords[static_cast<std::size_t>(k)];
    x.coords[static_cast<std::size_t>(k)] = x0 + h;
    const double fp = field_value(f, comp, x);
    x.coords[static_cast<std::size_t>(k)] = x0 - h;
    const double fm = field_value(f, comp, x);
    return (fp - fm)/(2.0*h);
}

double fd_hessian(const FieldSpec& f, int comp, Point x, int i, int j, double h) {
    if (i == j) {
        const double x0 = x.coords[static_cast<std::size_t>(i)];
        const double f0 = field_value(f, comp, x);
        x.coords[static_cast<std::size_t>(i)] = x0 + h;
        const double fp = field_value(f, comp, x);
        x.coords[static_cast<std::size_t>(i)] = x0 - h;
        const double fm = field_value(f, comp, x);
        return (fp - 2.0*f0 + fm)/(h*h);
    }
    const double xi = x.coords[static_cast<std::size_t>(i)], xj = x.coords[static_cast<std::size_t>(j)];
    auto at = [&](double di, double dj) {
        x.coords[static_cast<std::size_t>(i)] = xi + di;
        x.coords[static_cast<std::size_t>(j)] = xj + dj;
        return field_value(f, comp, x);
    };
    return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h))/(4.0*h*h);
}

Point random_point(SplitMix64& rng, int dim, double lo, double hi, double min_radius) {
    for (;;) {
        Point p;
        p.coords.resize(static_cast<std::size_t>(dim));
        double r2 = 0.0;
        for (auto& c : p.coords) {
            c = rng.uniform(lo, hi);
            r2 += c*c;
        }
        if (std::sqrt(r2) >= min_radius) return p;
    }
}

Point random_sphere_point(SplitMix64& rng, int ambient) {
    for (;;) {
        Point p = random_point(rng, ambient, -1.0, 1.0, 0.2);
        double r2 = 0.0;
        for (double c : p.coords) r2 += c*c;
        const double r = std::sqrt(r2);
        if (r > 0.2 && r <= 1.0) {
            for (auto& c : p.coords) c /= r;
            return p;
        }
    }
}

std::vector<FieldSpec> euclidean_families(SplitMix64& rng, int n) {
    const Domain dom{DomainKind::Euclidean, n};
    std::vector<FieldSpec> fs;
    {
        FieldSpec f;
        f.domain = dom;
        f.codomain = CodomainKind::Real;
        GaussianReal g;
        for (int i = 0; i < n; ++i) g.center.push_back(rng.uniform(-0.5, 0.5));
        g.inv_width = rng.uniform(0.5, 2.0);
        f.family = g;
        fs.push_back(f);
    }
    {
        FieldSpec f;
        f.domain = dom;
        f.codomain = CodomainKind::Complex;
        ChirpedGaussian c;
        for (int i = 0; i < n; ++i) c.wave.push_back(rng.uniform(-2.0, 2.0));
        c.inv_width = rng.uniform(0.5, 2.0);
        f.family = c;
        fs.push_back(f);
    }
    {
        FieldSpec f;
        f.domain = dom;
        f.codomain = CodomainKind::Real;
        f.family = RadialPolyGaussian{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
        fs.push_back(f);
    }
    if (n >= 2) {
        FieldSpec f;
        f.domain = dom;
        f.codomain = CodomainKind::Real;
        CustomField c;
        c.sources = {"(mul (coord 1) (coord 2) (exp (mul -0.5 (add (pow (coord 1) 2) (pow (coord 2) 2)))))"};
        c.comps = {parse_expr(c.sources[0], dom)};
        f.family = c;
        fs.push_back(f);
    }
    return fs;
}

FieldSpec modulated_sphere_complex(SplitMix64& rng, int ambient) {
    const Domain dom{DomainKind::SphereAmbient, ambient};
    const double amp = rng.uniform(0.3, 0.8);
    const double lam = rng.uniform(0.5, 1.5);
    char re[160], im[160];
    std::snprintf(re, sizeof re, "(mul (add 1 (mul %.17g (coord 0))) (cos (mul %.17g (coord 1))))", amp, lam);
    std::snprintf(im, sizeof im, "(mul (add 1 (mul %.17g (coord 0))) (sin (mul %.17g (coord 1))))", amp, lam);
    FieldSpec f;
    f.domain = dom;
    f.codomain = CodomainKind::Complex;
    CustomField c;
    c.sources = {re, im};
    c.comps = {parse_expr(re, dom), parse_expr(im, dom)};
    f.family = c;
    return f;
}

FieldSpec rotating_sphere_vector(SplitMix64& rng, int ambient) {
    const Domain dom{DomainKind::SphereAmbient, ambient};
    const double amp = rng.uniform(0.3, 0.8);
    const double lam = rng.uniform(0.5, 1.5);
    char c0[160], c1[160];
    std::snprintf(c0, sizeof c0, "(mul (add 1 (mul %.17g (coord 0))) (cos (mul %.17g (coord 1))))", amp, lam);
    std::snprintf(c1, sizeof c1, "(mul (add 1 (mul %.17g (coord 0))) (sin (mul %.17g (coord 1))))", amp, lam);
    FieldSpec f;
    f.domain = dom;
    f.codomain = CodomainKind::Vector;
    CustomField c;
    c.sources = {c0, c1};
    c.comps = {parse_expr(c0, dom), parse_expr(c1, dom)};
    f.family = c;
    return f;
}

FieldSpec smooth_sphere_scalar(SplitMix64& rng, int ambient) {
    const Domain dom{DomainKind::SphereAmbient, ambient};
    const int axis = rng.index(ambient);
    const double c = rng.uniform(0.3, 1.2);
    const int kind = rng.index(3);
    char buf[96];
    if (kind == 0)
        std::snprintf(buf, sizeof buf, "(exp (mul %.17g (coord %d)))", c, axis);
    else if (kind == 1)
        std::snprintf(buf, sizeof buf, "(cos (mul %.17g (coord %d)))", c, axis);
    else
        std::snprintf(buf, sizeof buf, "(add 1 (mul %.17g (pow (coord %d) 2)))", c, axis);
    FieldSpec f;
    f.domain = dom;
    f.codomain = CodomainKind::Real;
    CustomField cf;
    cf.sources = {buf};
    cf.comps = {parse_expr(buf, dom)};
    f.family = cf;
    return f;
}

FieldSpec random_vector_field(SplitMix64& rng, int n, int m) {
    const Domain dom{DomainKind::Euclidean, n};
    VectorOfFields vf;
    for (int c = 0; c < m; ++c) {
        FieldSpec part;
        part.domain = dom;
        part.codomain = CodomainKind::Real;
        GaussianReal g;
        for (int i = 0; i < n; ++i) g.center.push_back(rng.uniform(-0.6, 0.6));
        g.inv_width = rng.uniform(0.5, 2.0);
        part.family = g;
        vf.parts.push_back(std::move(part));
    }
    FieldSpec f;
    f.domain = dom;
    f.codomain = CodomainKind::Vector;
    f.family = std::move(vf);
    return f;
}

}  // namespace

SelftestReport run_selftest(int n_max, std::uint64_t seed, const Budget& budget) {
    SelftestReport rep;
    auto add_row = [&rep](const std::string& name, double metric, double threshold) {
        rep.rows.push_back({name, metric, threshold, metric <= threshold});
    };

    // AD gradients and Hessians against central finite differences
    {
        SplitMix64 rng(seed ^ 0xad01ULL);
        double worst_g = 0.0, worst_h = 0.0;
        for (int n = 2; n <= std::min(n_max, 4); ++n) {
            for (const FieldSpec& f : euclidean_families(rng, n)) {
                for (int rep_i = 0; rep_i < 12; ++rep_i) {
                    const Point x = random_point(rng, n, -1.2, 1.2, 0.3);
                    const Jet2 jet = eval_jet2(f, x);
                    double scale_g = 1.0, scale_h = 1.0;
                    for (int c = 0; c < jet.m; ++c)
                        for (int i = 0; i < n; ++i) {
                            scale_g = std::max(scale_g, std::abs(jet.grad[c][i]));
                            for (int j = 0; j < n; ++j) scale_h = std::max(scale_h, std::abs(jet.hess[c][i][j]));
                        }
                    for (int c = 0; c < jet.m; ++c) {
                        for (int i = 0; i < n; ++i) {
                            const double fd = fd_gradient(f, c, x, i, 1e-5);
                            worst_g = std::max(worst_g, std::abs(jet.grad[c][i] - fd)/scale_g);
                            for (int j = 0; j <= i; ++j) {
                                const double fh = fd_hessian(f, c, x, i, j, 1e-4);
                                worst_h = std::max(worst_h, std::abs(jet.hess[c][i][j] - fh)/scale_h);
                            }
                        }
                    }
                }
            }
        }
        add_row("ad_gradient_vs_finite_diff", worst_g, 1e-6);
        add_row("ad_hessian_vs_finite_diff", worst_h, 1e-4);
    }

    // Gamma closed form vs AD spherical gradient on coordinate fields
    {
        SplitMix64 rng(seed ^ 0xad02ULL);
        double worst = 0.0;
        for (int n = 2; n <= n_max; ++n) {
            const int d = n + 1;
            for (int rep_i = 0; rep_i < 25; ++rep_i) {
                const Point x = random_sphere_point(rng, d);
                const int k = rng.index(d);
                FieldSpec coord;
                coord.domain = {DomainKind::SphereAmbient, d};
                coord.codomain = CodomainKind::Real;
                coord.family = AffineHarmonic{0.0, 1.0, k};
                const auto grads = spherical_gradient(coord, x);
                for (int j = 0; j < d; ++j)
                    worst = std::max(worst, std::abs(grads[0].components[static_cast<std::size_t>(j)] -
                                                     gamma_coordinate(j, k, x)));
            }
        }
        add_row("gamma_closed_form_vs_ad", worst, 1e-12);
    }

    // integration by parts on the sphere
    {
        SplitMix64 rng(seed ^ 0xad03ULL);
        double worst = 0.0;
        for (int n = 2; n <= n_max; ++n) {
            for (int rep_i = 0; rep_i < 5; ++rep_i) {
                const FieldSpec f = smooth_sphere_scalar(rng, n + 1);
                const FieldSpec g = smooth_sphere_scalar(rng, n + 1);
                const int j = rng.index(n + 1);
                const IbpCheck chk = integration_by_parts_check(f, g, j, budget);
                worst = std::max(worst, chk.residual/(10.0*chk.error_estimate + 1e-13));
            }
        }
        add_row("integration_by_parts", worst, 1.0);
    }

    // pointwise identity |grad f|^2 - |grad |f||^2 = |f|^2 |Phi'|^2
    {
        SplitMix64 rng(seed ^ 0xad04ULL);
        double worst = 0.0;
        for (int n = 2; n <= std::min(n_max, 4); ++n) {
            std::vector<FieldSpec> fields;
            {
                FieldSpec f;
                f.domain = {DomainKind::Euclidean, n};
                f.codomain = CodomainKind::Complex;
                ChirpedGaussian c;
                for (int i = 0; i < n; ++i) c.wave.push_back(rng.uniform(-2.0, 2.0));
                c.inv_width = rng.uniform(0.5, 2.0);
                f.family = c;
                fields.push_back(f);
            }
            for (int m = 2; m <= 4; ++m) fields.push_back(random_vector_field(rng, n, m));
            for (const auto& f : fields) {
                for (int rep_i = 0; rep_i < 25; ++rep_i) {
                    const Point x = random_point(rng, n, -1.2, 1.2, 0.0);
                    const Jet1 jet = eval_jet1(f, x);
                    if (amp_norm(jet) <= 1e-6) continue;
                    const double split = grad_sq(jet) - amp_grad_sq(jet);
                    const double mag = direct_magnitude_from_jet(jet);
                    const double direct = amp_norm(jet)*amp_norm(jet)*mag*mag;
                    worst = std::max(worst, std::abs(split - direct)/std::max(grad_sq(jet), 1e-12));
                }
            }
        }
        add_row("phase_split_identity", worst, 1e-10);
    }

    // variance decompositions on the sphere
    {
        SplitMix64 rng(seed ^ 0xad05ULL);
        double worst = 0.0;
        for (int n = 2; n <= n_max; ++n) {
            for (int rep_i = 0; rep_i < 3; ++rep_i) {
                const FieldSpec fc = modulated_sphere_complex(rng, n + 1);
                const DecompositionResiduals rc = variance_decomposition_residuals(fc, n, budget);
                worst = std::max(worst, rc.res1/(10.0*rc.error_estimate1 + 1e-13));
                worst = std::max(worst, *rc.res2/(10.0*rc.error_estimate2 + 1e-13));
                const FieldSpec fv = rotating_sphere_vector(rng, n + 1);
                const DecompositionResiduals rv = variance_decomposition_residuals(fv, n, budget);
                worst = std::max(worst, rv.res1/(10.0*rv.error_estimate1 + 1e-13));
            }
        }
        add_row("variance_decompositions", worst, 1.0);
    }

    // frequency-mean identity Re a(f) = (n/2) tau(f)
    {
        SplitMix64 rng(seed ^ 0xad06ULL);
        double worst = 0.0;
        for (int n = 2; n <= n_max; ++n) {
            for (int rep_i = 0; rep_i < 3; ++rep_i) {
                for (const FieldSpec& f : {modulated_sphere_complex(rng, n + 1),
                                           rotating_sphere_vector(rng, n + 1)}) {
                    const SphereStats st = compute_stats(f, n, budget);
                    for (int j = 0; j <= n; ++j) {
                        const double res = std::abs(st.a[static_cast<std::size_t>(j)].real() -
                                                    0.5*n*st.tau[static_cast<std::size_t>(j)]);
                        const double tol = 10.0*(st.err.a_re[static_cast<std::size_t>(j)] +
                                                 0.5*n*st.err.tau[static_cast<std::size_t>(j)]) + 1e-13;
                        worst = std::max(worst, res/tol);
                    }
                }
            }
        }
        add_row("frequency_mean_identity", worst, 1.0);
    }

    rep.all_pass = true;
    for (const auto& r : rep.rows) rep.all_pass = rep.all_pass && r.pass;
    return rep;
}

std::string selftest_to_text(const SelftestReport& rep) {
    std::string out;
    char buf[160];
    int passed = 0;
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%s %-30s metric=%.17g threshold=%.17g\n",
                      r.pass ? "PASS" : "FAIL", r.name.c_str(), r.metric, r.threshold);
        out += buf;
        if (r.pass) ++passed;
    }
    std::snprintf(buf, sizeof buf, "%s %d/%zu identity checks passed\n",
                  rep.all_pass ? "SELFTEST-PASS" : "SELFTEST-FAIL", passed, rep.rows.size());
    out += buf;
    return out;
}

}  // namespace ckn
