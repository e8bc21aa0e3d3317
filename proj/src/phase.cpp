#include "ckn/phase.hpp"

#include <cmath>

#include "ckn/sphere_ops.hpp"

namespace ckn {

double amp_norm(const Jet1& jet) {
    double s = 0.0;
    for (int c = 0; c < jet.m; ++c) s += jet.value[c]*jet.value[c];
    return std::sqrt(s);
}

double grad_sq(const Jet1& jet) {
    double s = 0.0;
    for (int c = 0; c < jet.m; ++c)
        for (int k = 0; k < jet.dim; ++k) s += jet.grad[c][k]*jet.grad[c][k];
    return s;
}

double amp_grad_sq(const Jet1& jet) {
    double f2 = 0.0;
    for (int c = 0; c < jet.m; ++c) f2 += jet.value[c]*jet.value[c];
    if (f2 == 0.0) return 0.0;  // limit convention at exact zeros of |f|
    double s = 0.0;
    for (int k = 0; k < jet.dim; ++k) {
        double d = 0.0;
        for (int c = 0; c < jet.m; ++c) d += jet.value[c]*jet.grad[c][k];
        s += d*d;
    }
    return s/f2;
}

double amp_times_phase_from_jet(const Jet1& jet) {
    if (jet.m == 1) return 0.0;  // empty pair sum
    double f2 = 0.0;
    for (int c = 0; c < jet.m; ++c) f2 += jet.value[c]*jet.value[c];
    if (f2 == 0.0) return 0.0;  // limit convention at exact zeros; biases COV down
    const double d = grad_sq(jet) - amp_grad_sq(jet);
    return d > 0.0 ? std::sqrt(d) : 0.0;
}

double direct_magnitude_from_jet(const Jet1& jet) {
    double f2 = 0.0;
    for (int c = 0; c < jet.m; ++c) f2 += jet.value[c]*jet.value[c];
    double s = 0.0;
    for (int k = 0; k < jet.dim; ++k)
        for (int j = 0; j < jet.m; ++j)
            for (int l = j + 1; l < jet.m; ++l) {
                const double cross = jet.value[l]*jet.grad[j][k] - jet.value[j]*jet.grad[l][k];
                s += cross*cross;
            }
    return std::sqrt(s)/f2;
}

void phase_vector_from_jet(const Jet1& jet, double* out) {
    // complex layout: component 0 = u, component 1 = v
    const double u = jet.value[0], v = jet.value[1];
    const double f2 = u*u + v*v;
    for (int k = 0; k < jet.dim; ++k)
        out[k] = (u*jet.grad[1][k] - v*jet.grad[0][k])/f2;
}

namespace {

Jet1 setting_jet(const FieldSpec& f, const Point& x, Setting setting) {
    if (setting == Setting::Sphere) {
        if (f.domain.kind != DomainKind::SphereAmbient)
            throw SpecError("sphere setting needs a sphere-ambient field");
        return eval_jet1(restrict_to_sphere(f), snap_to_sphere(x));
    }
    if (f.domain.kind != DomainKind::Euclidean)
        throw SpecError("euclidean setting needs a euclidean field");
    return eval_jet1(f, x);
}

}  // namespace

PhaseData phase_derivative_direct(const FieldSpec& f, const Point& x, Setting setting,
                                  const PhaseOptions& opt) {
    const Jet1 jet = setting_jet(f, x, setting);
    PhaseData out;
    if (jet.m == 1) {
        out.has_magnitude = true;  // single component: empty pair sum, exactly zero
        return out;
    }
    const double amp = amp_norm(jet);
    if (amp <= opt.threshold())
        throw AmplitudeError("|f(x)| = " + std::to_string(amp) +
                             " at or below the amplitude threshold; use the amplitude-split form");
    out.magnitude = direct_magnitude_from_jet(jet);
    out.amp_times_phase = out.magnitude*amp;
    out.has_magnitude = true;
    if (f.is_complex()) {
        out.phase_vector.resize(static_cast<std::size_t>(jet.dim));
        phase_vector_from_jet(jet, out.phase_vector.data());
    }
    return out;
}

PhaseData amp_phase_split(const FieldSpec& f, const Point& x, Setting setting,
                          const PhaseOptions& opt) {
    const Jet1 jet = setting_jet(f, x, setting);
    PhaseData out;
    out.amp_times_phase = amp_times_phase_from_jet(jet);
    const double amp = amp_norm(jet);
    if (amp > opt.threshold()) {
        out.magnitude = jet.m == 1 ? 0.0 : out.amp_times_phase/amp;
        out.has_magnitude = true;
        if (f.is_complex()) {
            out.phase_vector.resize(static_cast<std::size_t>(jet.dim));
            phase_vector_from_jet(jet, out.phase_vector.data());
        }
    }
    return out;
}

}  // namespace ckn
