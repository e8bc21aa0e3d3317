#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ckn/fields.hpp"
#include "ckn/quadrature.hpp"

namespace ckn {

// Spherical statistics of a unit-energy field on S^n. The input field is
// renormalized internally; renorm_factor records the applied 1/sqrt(energy).
struct SphereStats {
    int n = 0;
    bool is_complex = false;
    std::vector<double> tau;               // spherical mean of x, length n+1
    double var_x = 0.0;                    // = 1 - |tau|^2 up to quadrature error
    std::vector<std::complex<double>> a;   // frequency mean (real entries for vector fields)
    std::vector<double> a_star;            // Im a(f); complex fields only (empty otherwise)
    double var_freq = 0.0;
    std::optional<double> var_freq_star;   // complex fields only
    double cov = 0.0;
    std::optional<double> cov_star;        // complex fields only
    double grad_energy = 0.0;              // ∫ |grad_S f|^2 dσ of the normalized field
    double energy = 1.0;                   // post-normalization
    double renorm_factor = 1.0;
    std::vector<double> quadrature_errors;

    // per-statistic error estimates, for downstream tolerance propagation
    struct ErrorEstimates {
        double energy = 0.0;
        double var_x = 0.0;
        double var_freq = 0.0;
        double var_freq_star = 0.0;
        double cov = 0.0;
        double cov_star = 0.0;
        double grad_energy = 0.0;
        std::vector<double> tau;
        std::vector<double> a_re, a_im;
    } err;

    double tau_norm_sq() const {
        double s = 0.0;
        for (double t : tau) s += t*t;
        return s;
    }
};

SphereStats compute_stats(const FieldSpec& f, int sphere_dim, const Budget& b);

struct DecompositionResiduals {
    double res1 = 0.0;                 // V decomposition
    std::optional<double> res2;        // V* decomposition, complex fields only
    double error_estimate1 = 0.0;
    double error_estimate2 = 0.0;
};

DecompositionResiduals variance_decomposition_residuals(const FieldSpec& f, int sphere_dim,
                                                        const Budget& b);

std::string stats_to_json(const SphereStats& s);

}  // namespace ckn
