// Times the serial reference reduction against the OpenMP driver on the CKN
// integrand pass, and confirms both produce identical bits.

#include <chrono>
#include <cstdio>
#include <span>

#include "ckn/phase.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/reduce.hpp"

using namespace ckn;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct PassResult {
    double out[4];
    double ms;
};

PassResult run_pass(const FieldSpec& f, int radial, int angular, bool parallel) {
    const double p = 3.0, q = 1.0;
    auto integrand = [&](std::span<const double> x, double r, std::span<double> out) {
        Point pt;
        pt.coords.assign(x.begin(), x.end());
        const Jet1 jet = eval_jet1(f, pt);
        const double amp = amp_norm(jet);
        out[0] = grad_sq(jet);
        out[1] = std::pow(amp, 2.0*p - 2.0)*std::pow(r, -(2.0*q - 2.0));
        out[2] = std::pow(amp, p)*std::pow(r, -q);
        out[3] = std::pow(amp, p - 1.0)*std::pow(r, -(q - 1.0))*amp_times_phase_from_jet(jet);
    };
    PassResult res;
    const double t0 = now_ms();
    Budget b;
    b.radial_nodes = radial;
    b.angular_nodes = angular;
    b.refine_levels = 0;
    b.parallel = parallel;
    const MultiEstimate est = integrate_rn_multi(integrand, 3, 4, b);
    res.ms = now_ms() - t0;
    for (int k = 0; k < 4; ++k) res.out[k] = est.value[k];
    return res;
}

}  // namespace

int main() {
    FieldSpec f;
    f.domain = {DomainKind::Euclidean, 3};
    f.codomain = CodomainKind::Complex;
    f.family = ChirpedGaussian{{2.0, -1.0, 0.5}, 1.0};

    std::printf("threads=%d\n", thread_count());
    std::printf("%8s %8s %12s %12s %9s %s\n", "radial", "angular", "serial_ms", "openmp_ms",
                "speedup", "identical");
    for (int level = 0; level < 3; ++level) {
        const int radial = 32 << level;
        const int angular = 16 << level;
        run_pass(f, radial, angular, false);  // warm up
        const PassResult s = run_pass(f, radial, angular, false);
        const PassResult p = run_pass(f, radial, angular, true);
        bool same = true;
        for (int k = 0; k < 4; ++k) same = same && s.out[k] == p.out[k];
        std::printf("%8d %8d %12.2f %12.2f %9.2fx %s\n", radial, angular, s.ms, p.ms, s.ms/p.ms,
                    same ? "yes" : "NO");
        if (!same) return 1;
    }
    return 0;
}
