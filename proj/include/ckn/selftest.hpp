#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ckn/quadrature.hpp"

namespace ckn {

struct SelftestRow {
    std::string name;
    double metric = 0.0;     // worst case observed
    double threshold = 0.0;  // pass iff metric <= threshold
    bool pass = false;
};

struct SelftestReport {
    std::vector<SelftestRow> rows;
    bool all_pass = false;
};

// Identity suite: AD vs finite differences, the Gamma closed form, integration
// by parts, the amplitude/phase identity, the variance decompositions and the
// frequency-mean identity. Deterministic given (n_max, seed, budget).
SelftestReport run_selftest(int n_max, std::uint64_t seed, const Budget& budget);

std::string selftest_to_text(const SelftestReport& rep);

}  // namespace ckn
