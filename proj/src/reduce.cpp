#include "ckn/reduce.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ckn {

namespace {

std::atomic<int> g_threads{0};

int default_threads() {
    if (const char* env = std::getenv("CKN_LAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace

void set_thread_count(int n) { g_threads.store(n > 0 ? n : 0); }

int thread_count() {
    const int n = g_threads.load();
    return n > 0 ? n : default_threads();
}

namespace detail {

void run_blocks(std::size_t n_blocks, bool parallel,
                void (*body)(std::size_t block, void* ctx), void* ctx,
                std::vector<std::string>& errors) {
#ifdef _OPENMP
    if (parallel && n_blocks > 1 && thread_count() > 1) {
        const auto nb = static_cast<long long>(n_blocks);
#pragma omp parallel for schedule(static) num_threads(thread_count())
        for (long long b = 0; b < nb; ++b) body(static_cast<std::size_t>(b), ctx);
    } else {
        for (std::size_t b = 0; b < n_blocks; ++b) body(b, ctx);
    }
#else
    (void)parallel;
    for (std::size_t b = 0; b < n_blocks; ++b) body(b, ctx);
#endif
    for (std::size_t b = 0; b < n_blocks; ++b)
        if (!errors[b].empty()) throw QuadratureError(errors[b]);
}

}  // namespace detail

}  // namespace ckn
