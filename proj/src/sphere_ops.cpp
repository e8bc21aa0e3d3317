#include "ckn/sphere_ops.hpp"

#include <cmath>

namespace ckn {

Point snap_to_sphere(const Point& x) {
    double r2 = 0.0;
    for (double c : x.coords) r2 += c*c;
    const double r = std::sqrt(r2);
    if (std::abs(r - 1.0) > 1e-12)
        throw SpecError("point is off the unit sphere: |x| = " + std::to_string(r));
    Point snapped = x;
    for (double& c : snapped.coords) c /= r;
    return snapped;
}

std::vector<TangentVector> spherical_gradient(const FieldSpec& f, const Point& x) {
    if (f.domain.kind != DomainKind::SphereAmbient)
        throw SpecError("spherical_gradient needs a sphere-ambient field");
    const Point xs = snap_to_sphere(x);
    const FieldSpec rf = restrict_to_sphere(f);
    const Jet1 jet = eval_jet1(rf, xs);

    std::vector<TangentVector> out(static_cast<std::size_t>(jet.m));
    for (int c = 0; c < jet.m; ++c) {
        out[static_cast<std::size_t>(c)].base = xs;
        out[static_cast<std::size_t>(c)].components.assign(
            jet.grad[c].begin(), jet.grad[c].begin() + jet.dim);
    }
    return out;
}

double gamma_coordinate(int j, int k, const Point& x) {
    const int d = x.dim();
    if (j < 0 || j >= d || k < 0 || k >= d)
        throw SpecError("gamma_coordinate index out of range");
    const Point xs = snap_to_sphere(x);
    const double xj = xs.coords[static_cast<std::size_t>(j)];
    const double xk = xs.coords[static_cast<std::size_t>(k)];
    return j == k ? 1.0 - xj*xj : -xj*xk;
}

IbpCheck integration_by_parts_check(const FieldSpec& f, const FieldSpec& g, int j, const Budget& b) {
    if (f.domain.kind != DomainKind::SphereAmbient || g.domain.kind != DomainKind::SphereAmbient)
        throw SpecError("integration by parts needs sphere-ambient fields");
    if (f.domain.ambient_dim != g.domain.ambient_dim)
        throw SpecError("field dimension mismatch");
    if (f.components() != 1 || g.components() != 1)
        throw SpecError("integration by parts check takes real scalar fields");
    const int n = f.domain.ambient_dim - 1;
    if (j < 0 || j > n) throw SpecError("coordinate index out of range");

    const FieldSpec fr = restrict_to_sphere(f);
    const FieldSpec gr = restrict_to_sphere(g);

    auto integrand = [&](std::span<const double> x, std::span<double> out) {
        Point p;
        p.coords.assign(x.begin(), x.end());
        const Jet1 jf = eval_jet1(fr, p);
        const Jet1 jg = eval_jet1(gr, p);
        const double xj = x[static_cast<std::size_t>(j)];
        out[0] = jf.grad[0][j]*jg.value[0];   // (Γ_j f) g
        out[1] = xj*jf.value[0]*jg.value[0];  // x_j f g
        out[2] = jf.value[0]*jg.grad[0][j];   // f (Γ_j g)
    };
    const MultiEstimate est = integrate_sn_multi(integrand, n, 3, b);

    IbpCheck chk;
    chk.residual = std::abs(est.value[0] - n*est.value[1] + est.value[2]);
    chk.error_estimate = std::sqrt(est.error_estimate[0]*est.error_estimate[0] +
                                   static_cast<double>(n)*n*est.error_estimate[1]*est.error_estimate[1] +
                                   est.error_estimate[2]*est.error_estimate[2]);
    return chk;
}

double integration_by_parts_residual(const FieldSpec& f, const FieldSpec& g, int j, const Budget& b) {
    return integration_by_parts_check(f, g, j, b).residual;
}

}  // namespace ckn
