#pragma once

#include <stdexcept>
#include <vector>

#include "ckn/fields.hpp"

namespace ckn {

enum class Setting { Euclidean, Sphere };

struct AmplitudeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhaseOptions {
    double eps_amp = 1e-12;  // relative amplitude threshold
    double amp_scale = 1.0;  // scale the threshold is relative to
    double threshold() const { return eps_amp*amp_scale; }
};

struct PhaseData {
    double magnitude = 0.0;            // |Phi'_f(x)|, meaningful when has_magnitude
    double amp_times_phase = 0.0;      // |f(x)| |Phi'_f(x)|, always defined
    bool has_magnitude = false;
    std::vector<double> phase_vector;  // complex fields: (u grad v - v grad u)/|f|^2; else empty
};

// Pointwise kernels on a first-order jet (the hot path for integrands).
double amp_norm(const Jet1& jet);                   // |f|
double grad_sq(const Jet1& jet);                    // |grad f|^2, Frobenius over components
double amp_grad_sq(const Jet1& jet);                // |grad |f||^2 = |grad(|f|^2)|^2/(4|f|^2); 0 at |f| = 0
double amp_times_phase_from_jet(const Jet1& jet);   // sqrt(max(0, grad_sq - amp_grad_sq)); exact 0 for m = 1
double direct_magnitude_from_jet(const Jet1& jet);  // the antisymmetric cross-term double sum
void phase_vector_from_jet(const Jet1& jet, double* out);

// Direct form of the generalized phase derivative; refuses |f| at or below the
// amplitude threshold (the split form is total).
PhaseData phase_derivative_direct(const FieldSpec& f, const Point& x, Setting setting,
                                  const PhaseOptions& opt = {});

// Amplitude-split form |f||Phi'| = sqrt(max(0, |grad f|^2 - |grad |f||^2)); total on smooth fields.
PhaseData amp_phase_split(const FieldSpec& f, const Point& x, Setting setting,
                          const PhaseOptions& opt = {});

}  // namespace ckn
