#include <doctest.h>

#include <cmath>
#include <vector>

#include "ckn/reduce.hpp"
#include "ckn/rng.hpp"

using namespace ckn;

TEST_CASE("parallel and serial blocked sums are bit-identical") {
    SplitMix64 rng(424242);
    std::vector<double> data(100001);
    for (auto& v : data) v = rng.uniform(-1.0, 1.0)*std::exp(rng.uniform(-8.0, 8.0));

    auto eval = [&](std::size_t i, double* out) {
        out[0] = data[i];
        out[1] = data[i]*data[i];
        out[2] = std::sin(data[i]);
    };
    double serial[3], parallel[3];
    blocked_sum(data.size(), 3, eval, serial, false);
    blocked_sum(data.size(), 3, eval, parallel, true);
    for (int k = 0; k < 3; ++k) CHECK(serial[k] == parallel[k]);
}

TEST_CASE("pairwise summation is exact on a long run of ones") {
    auto eval = [](std::size_t, double* out) { out[0] = 1.0; };
    double s;
    blocked_sum(1u << 20, 1, eval, &s, true);
    CHECK(s == static_cast<double>(1u << 20));
}

TEST_CASE("empty range sums to zero") {
    auto eval = [](std::size_t, double* out) { out[0] = 1.0; };
    double s = 99.0;
    blocked_sum(0, 1, eval, &s, true);
    CHECK(s == 0.0);
}

TEST_CASE("evaluation errors propagate deterministically") {
    auto eval = [](std::size_t i, double* out) {
        if (i == 1000) throw QuadratureError("bad node 1000");
        out[0] = 1.0;
    };
    double s;
    CHECK_THROWS_WITH_AS(blocked_sum(5000, 1, eval, &s, true), "bad node 1000", QuadratureError);
}
