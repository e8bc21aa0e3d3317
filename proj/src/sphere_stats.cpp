#include "ckn/sphere_stats.hpp"

#include <cmath>

#include "ckn/json_out.hpp"
#include "ckn/phase.hpp"

namespace ckn {

namespace {

Point to_point(std::span<const double> x) {
    Point p;
    p.coords.assign(x.begin(), x.end());
    return p;
}

double dist_to(std::span<const double> x, const std::vector<double>& tau) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - tau[j];
        s += d*d;
    }
    return std::sqrt(s);
}

}  // namespace

SphereStats compute_stats(const FieldSpec& f, int sphere_dim, const Budget& b) {
    const int n = sphere_dim;
    const int d = n + 1;
    if (f.domain.kind != DomainKind::SphereAmbient || f.domain.ambient_dim != d)
        throw SpecError("compute_stats needs a sphere-ambient field over S^" + std::to_string(n));
    validate(f);
    const bool cx = f.is_complex();
    const int m = f.components();
    const FieldSpec fr = restrict_to_sphere(f);

    // pass 1: energy, raw spherical mean, raw frequency mean
    const int n1 = 1 + d + (cx ? 2*d : d);
    auto pass1 = [&](std::span<const double> x, std::span<double> out) {
        const Jet1 jet = eval_jet1(fr, to_point(x));
        double f2 = 0.0;
        for (int c = 0; c < m; ++c) f2 += jet.value[c]*jet.value[c];
        out[0] = f2;
        for (int j = 0; j < d; ++j) out[1 + j] = x[static_cast<std::size_t>(j)]*f2;
        if (cx) {
            const double u = jet.value[0], v = jet.value[1];
            for (int j = 0; j < d; ++j) {
                out[1 + d + j] = jet.grad[0][j]*u + jet.grad[1][j]*v;  // Re (Γ_j f) conj(f)
                out[1 + 2*d + j] = jet.grad[1][j]*u - jet.grad[0][j]*v;  // Im
            }
        } else {
            for (int j = 0; j < d; ++j) {
                double s = 0.0;
                for (int c = 0; c < m; ++c) s += jet.value[c]*jet.grad[c][j];
                out[1 + d + j] = s;
            }
        }
    };
    const MultiEstimate m1 = integrate_sn_multi(pass1, n, n1, b);

    const double energy_raw = m1.value[0];
    if (!std::isfinite(energy_raw) || energy_raw <= 0.0)
        throw SpecError("energy renormalization factor outside (0, inf): raw energy = " +
                        std::to_string(energy_raw));

    SphereStats st;
    st.n = n;
    st.is_complex = cx;
    st.renorm_factor = 1.0/std::sqrt(energy_raw);
    st.energy = energy_raw*st.renorm_factor*st.renorm_factor;

    st.tau.resize(static_cast<std::size_t>(d));
    st.a.resize(static_cast<std::size_t>(d));
    std::vector<double> a_re(static_cast<std::size_t>(d)), a_im(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        st.tau[static_cast<std::size_t>(j)] = m1.value[static_cast<std::size_t>(1 + j)]/energy_raw;
        a_re[static_cast<std::size_t>(j)] = m1.value[static_cast<std::size_t>(1 + d + j)]/energy_raw;
        if (cx) a_im[static_cast<std::size_t>(j)] = m1.value[static_cast<std::size_t>(1 + 2*d + j)]/energy_raw;
        st.a[static_cast<std::size_t>(j)] = {a_re[static_cast<std::size_t>(j)], a_im[static_cast<std::size_t>(j)]};
    }
    if (cx) st.a_star = a_im;

    // pass 2: centered variance, frequency variances, gradient energy, covariances
    const int kVarX = 0, kV = 1, kGrad = 2, kCov = 3, kVStar = 4, kCovStar = 5;
    const int n2 = cx ? 6 : 4;
    const double E = energy_raw;
    auto pass2 = [&](std::span<const double> x, std::span<double> out) {
        const Jet1 jet = eval_jet1(fr, to_point(x));
        double f2 = 0.0;
        for (int c = 0; c < m; ++c) f2 += jet.value[c]*jet.value[c];
        const double dist = dist_to(x, st.tau);
        out[kVarX] = dist*dist*f2/E;
        out[kGrad] = grad_sq(jet)/E;

        double vsum = 0.0;
        if (cx) {
            const double u = jet.value[0], v = jet.value[1];
            for (int j = 0; j < d; ++j) {
                const double al = a_re[static_cast<std::size_t>(j)], be = a_im[static_cast<std::size_t>(j)];
                const double ru = jet.grad[0][j] - (al*u - be*v);
                const double rv = jet.grad[1][j] - (al*v + be*u);
                vsum += ru*ru + rv*rv;
            }
        } else {
            for (int j = 0; j < d; ++j) {
                const double aj = a_re[static_cast<std::size_t>(j)];
                for (int c = 0; c < m; ++c) {
                    const double rc = jet.grad[c][j] - aj*jet.value[c];
                    vsum += rc*rc;
                }
            }
        }
        out[kV] = vsum/E;

        const double amp = std::sqrt(f2);
        const double atp = amp_times_phase_from_jet(jet);
        out[kCov] = dist*amp*atp/E;

        if (cx) {
            const double u = jet.value[0], v = jet.value[1];
            double vstar = 0.0, covstar = 0.0;
            for (int j = 0; j < d; ++j) {
                const double as = a_im[static_cast<std::size_t>(j)];
                const double r1 = jet.grad[1][j] - as*u;  // Re(-i Γf - a* f)
                const double r2 = jet.grad[0][j] + as*v;  // -Im(...)
                vstar += r1*r1 + r2*r2;
                const double wj = u*jet.grad[1][j] - v*jet.grad[0][j];  // |f|^2 Phi'_j
                const double diff = wj - as*f2;
                covstar += diff*diff;
            }
            out[kVStar] = vstar/E;
            out[kCovStar] = dist*std::sqrt(covstar)/E;
        }
    };
    const MultiEstimate m2 = integrate_sn_multi(pass2, n, n2, b);

    st.var_x = m2.value[kVarX];
    st.var_freq = m2.value[kV];
    st.grad_energy = m2.value[kGrad];
    st.cov = m2.value[kCov];
    if (cx) {
        st.var_freq_star = m2.value[kVStar];
        st.cov_star = m2.value[kCovStar];
    }

    st.err.energy = m1.error_estimate[0]/energy_raw;
    st.err.tau.resize(static_cast<std::size_t>(d));
    st.err.a_re.resize(static_cast<std::size_t>(d));
    st.err.a_im.assign(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        st.err.tau[static_cast<std::size_t>(j)] =
            m1.error_estimate[static_cast<std::size_t>(1 + j)]/energy_raw +
            std::abs(st.tau[static_cast<std::size_t>(j)])*st.err.energy;
        st.err.a_re[static_cast<std::size_t>(j)] =
            m1.error_estimate[static_cast<std::size_t>(1 + d + j)]/energy_raw +
            std::abs(a_re[static_cast<std::size_t>(j)])*st.err.energy;
        if (cx)
            st.err.a_im[static_cast<std::size_t>(j)] =
                m1.error_estimate[static_cast<std::size_t>(1 + 2*d + j)]/energy_raw +
                std::abs(a_im[static_cast<std::size_t>(j)])*st.err.energy;
    }
    st.err.var_x = m2.error_estimate[kVarX];
    st.err.var_freq = m2.error_estimate[kV];
    st.err.grad_energy = m2.error_estimate[kGrad];
    st.err.cov = m2.error_estimate[kCov];
    if (cx) {
        st.err.var_freq_star = m2.error_estimate[kVStar];
        st.err.cov_star = m2.error_estimate[kCovStar];
    }

    st.quadrature_errors = m1.error_estimate;
    st.quadrature_errors.insert(st.quadrature_errors.end(), m2.error_estimate.begin(),
                                m2.error_estimate.end());
    return st;
}

DecompositionResiduals variance_decomposition_residuals(const FieldSpec& f, int sphere_dim,
                                                        const Budget& b) {
    const SphereStats st = compute_stats(f, sphere_dim, b);
    const int n = sphere_dim;
    const int d = n + 1;
    const bool cx = st.is_complex;
    const int m = f.components();
    const FieldSpec fr = restrict_to_sphere(f);
    const double E = 1.0/(st.renorm_factor*st.renorm_factor);

    std::vector<double> a_re(static_cast<std::size_t>(d)), a_im(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        a_re[static_cast<std::size_t>(j)] = st.a[static_cast<std::size_t>(j)].real();
        a_im[static_cast<std::size_t>(j)] = st.a[static_cast<std::size_t>(j)].imag();
    }

    // The amplitude/phase split of V needs care in the complex case: the
    // Lagrange identity behind it holds for real coefficients only, so Re a(f)
    // pairs with the amplitude part and Im a(f) with the phase part:
    //   V  = ∫ |grad|f| - Re a(f) |f||^2 + ∫ |Phi' - a*(f)|^2 |f|^2,
    //   V* = ∫ |grad|f||^2           + ∫ |Phi' - a*(f)|^2 |f|^2.
    // Grouping the full complex a(f) into the amplitude part instead leaves a
    // residual of exactly 2|a*(f)|^2. For vector (and real) fields a(f) is
    // real and the split is the plain one.
    const int n_out = cx ? 3 : 2;
    auto decomp = [&](std::span<const double> x, std::span<double> out) {
        const Jet1 jet = eval_jet1(fr, to_point(x));
        double f2 = 0.0;
        for (int c = 0; c < m; ++c) f2 += jet.value[c]*jet.value[c];
        const double amp = std::sqrt(f2);

        double p1 = 0.0;
        for (int j = 0; j < d; ++j) {
            double gj = 0.0;
            if (amp > 0.0) {
                for (int c = 0; c < m; ++c) gj += jet.value[c]*jet.grad[c][j];
                gj /= amp;
            }
            const double ru = gj - a_re[static_cast<std::size_t>(j)]*amp;
            p1 += ru*ru;
        }
        out[0] = p1/E;

        if (cx) {
            const double u = jet.value[0], v = jet.value[1];
            double amp_grad = 0.0, pstar = 0.0;
            for (int j = 0; j < d; ++j) {
                double gj = 0.0;
                if (amp > 0.0) gj = (u*jet.grad[0][j] + v*jet.grad[1][j])/amp;
                amp_grad += gj*gj;
                const double wj = u*jet.grad[1][j] - v*jet.grad[0][j];
                const double diff = wj - a_im[static_cast<std::size_t>(j)]*f2;
                if (f2 > 0.0) pstar += diff*diff/f2;
            }
            out[1] = pstar/E;     // shared phase part of both decompositions
            out[2] = amp_grad/E;  // uncentered amplitude part of V*
        } else {
            const double atp = amp_times_phase_from_jet(jet);
            out[1] = atp*atp/E;
        }
    };
    const MultiEstimate md = integrate_sn_multi(decomp, n, n_out, b);

    DecompositionResiduals res;
    res.res1 = std::abs(st.var_freq - md.value[0] - md.value[1]);
    res.error_estimate1 = std::sqrt(st.err.var_freq*st.err.var_freq +
                                    md.error_estimate[0]*md.error_estimate[0] +
                                    md.error_estimate[1]*md.error_estimate[1]);
    if (cx) {
        res.res2 = std::abs(*st.var_freq_star - md.value[2] - md.value[1]);
        res.error_estimate2 = std::sqrt(st.err.var_freq_star*st.err.var_freq_star +
                                        md.error_estimate[2]*md.error_estimate[2] +
                                        md.error_estimate[1]*md.error_estimate[1]);
    }
    return res;
}

std::string stats_to_json(const SphereStats& s) {
    JsonWriter w;
    w.begin_object();
    w.field("n", s.n);
    w.field("codomain", s.is_complex ? "complex" : "vector_or_real");
    w.field("tau", s.tau);
    w.field("var_x", s.var_x);
    std::vector<double> are, aim;
    for (const auto& z : s.a) {
        are.push_back(z.real());
        aim.push_back(z.imag());
    }
    w.field("a_re", are);
    w.field("a_im", aim);
    if (!s.a_star.empty()) w.field("a_star", s.a_star);
    w.field("var_freq", s.var_freq);
    if (s.var_freq_star) w.field("var_freq_star", *s.var_freq_star);
    w.field("cov", s.cov);
    if (s.cov_star) w.field("cov_star", *s.cov_star);
    w.field("grad_energy", s.grad_energy);
    w.field("energy", s.energy);
    w.field("renorm_factor", s.renorm_factor);
    w.field("quadrature_errors", s.quadrature_errors);
    w.end_object();
    return w.str();
}

}  // namespace ckn
