#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace ckn {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Worker count used by the parallel reduction driver. 0 = library default
// (CKN_LAB_THREADS env var if set, otherwise all logical cores).
void set_thread_count(int n);
int thread_count();

namespace detail {

inline constexpr std::size_t kReduceBlock = 256;

// in-place pairwise tree sum of a strided column
inline double pairwise_fold(double* a, std::size_t n, std::size_t stride) {
    if (n == 1) return a[0];
    if (n <= 8) {
        double s = a[0];
        for (std::size_t i = 1; i < n; ++i) s += a[i*stride];
        return s;
    }
    const std::size_t half = n/2;
    return pairwise_fold(a, half, stride) + pairwise_fold(a + half*stride, n - half, stride);
}

void run_blocks(std::size_t n_blocks, bool parallel,
                void (*body)(std::size_t block, void* ctx), void* ctx,
                std::vector<std::string>& errors);

}  // namespace detail

// Deterministic blocked pairwise reduction. eval(i, out) adds nothing: it
// *writes* n_out accumulands for item i into out. The block partition and the
// fold order are fixed, so the parallel and serial drivers produce identical
// bits for any thread count.
template <class Eval>
void blocked_sum(std::size_t count, int n_out, Eval&& eval, double* result, bool parallel) {
    const std::size_t width = static_cast<std::size_t>(n_out);
    if (count == 0) {
        for (std::size_t k = 0; k < width; ++k) result[k] = 0.0;
        return;
    }
    const std::size_t n_blocks = (count + detail::kReduceBlock - 1)/detail::kReduceBlock;
    std::vector<double> partials(n_blocks*width);
    std::vector<std::string> errors(n_blocks);

    using EvalT = std::remove_reference_t<Eval>;
    struct Ctx {
        std::size_t count;
        std::size_t width;
        EvalT* eval;
        double* partials;
        std::vector<std::string>* errors;
    } ctx{count, width, &eval, partials.data(), &errors};

    auto body = [](std::size_t b, void* vctx) {
        auto& c = *static_cast<Ctx*>(vctx);
        const std::size_t lo = b*detail::kReduceBlock;
        const std::size_t hi = lo + detail::kReduceBlock < c.count ? lo + detail::kReduceBlock : c.count;
        double buf[detail::kReduceBlock];
        std::vector<double> row(c.width);
        std::vector<double> cols((hi - lo)*c.width);
        try {
            for (std::size_t i = lo; i < hi; ++i) {
                (*c.eval)(i, row.data());
                for (std::size_t k = 0; k < c.width; ++k) cols[(i - lo)*c.width + k] = row[k];
            }
            for (std::size_t k = 0; k < c.width; ++k) {
                const std::size_t n = hi - lo;
                for (std::size_t i = 0; i < n; ++i) buf[i] = cols[i*c.width + k];
                c.partials[b*c.width + k] = detail::pairwise_fold(buf, n, 1);
            }
        } catch (const std::exception& e) {
            (*c.errors)[b] = e.what();
        } catch (...) {
            (*c.errors)[b] = "unknown evaluation error";
        }
    };

    detail::run_blocks(n_blocks, parallel, body, &ctx, errors);

    for (std::size_t k = 0; k < width; ++k)
        result[k] = detail::pairwise_fold(partials.data() + k, n_blocks, width);
}

}  // namespace ckn
