#pragma once

#include <vector>

#include "ckn/fields.hpp"
#include "ckn/quadrature.hpp"

namespace ckn {

struct TangentVector {
    Point base;                      // on S^n, |base| = 1
    std::vector<double> components;  // length n+1, base . components = 0
};

// Validates |x| = 1 within 1e-12 and returns the exactly renormalized point.
Point snap_to_sphere(const Point& x);

// Ambient gradient of the degree-0 homogeneous extension at x; one tangent
// vector per real component (complex fields give the (re, im) pair).
std::vector<TangentVector> spherical_gradient(const FieldSpec& f, const Point& x);

// Closed form: Gamma_j(x_k) = 1 - x_j^2 when j = k, else -x_j x_k.
double gamma_coordinate(int j, int k, const Point& x);

struct IbpCheck {
    double residual;
    double error_estimate;
};

// |∫(Γ_j f) g dσ - n ∫ x_j f g dσ + ∫ f (Γ_j g) dσ|, zero up to quadrature error.
IbpCheck integration_by_parts_check(const FieldSpec& f, const FieldSpec& g, int j, const Budget& b);
double integration_by_parts_residual(const FieldSpec& f, const FieldSpec& g, int j, const Budget& b);

}  // namespace ckn
