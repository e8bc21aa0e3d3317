#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ckn/inequalities.hpp"

namespace ckn {

struct FreeParam {
    std::string name;  // family parameter: "a", "b", "k0", "k1", ...
    double lo = 0.0;
    double hi = 1.0;
};

enum class ObjectiveKind { RatioClassical, RatioImproved };

struct SearchProblem {
    TheoremId theorem_id = TheoremId::Hpw;  // euclidean theorems only
    CknParams params;                        // n used for HPW; p, q ignored there
    FieldSpec family;                        // template whose named parameters vary
    std::vector<FreeParam> free_params;
    ObjectiveKind objective = ObjectiveKind::RatioClassical;
    Budget budget;
    int max_iterations = 200;
    int restarts = 3;
    std::uint64_t seed = 0;
};

enum class StopReason { SimplexDiameter, ObjectiveSpread, IterationCap, EvaluationFailures };

std::string stop_reason_name(StopReason s);

struct TraceEntry {
    int iteration;
    double best_value;
    double diameter;
};

struct SearchResult {
    std::vector<double> best_theta;
    double best_ratio = 0.0;
    std::vector<TraceEntry> trace;  // concatenated over restarts
    int evaluations = 0;
    StopReason stop = StopReason::IterationCap;  // stop of the best restart
    int restarts_run = 0;
};

// Returns a copy of the family with the named free parameters set to theta.
FieldSpec instantiate_family(const FieldSpec& family, const std::vector<FreeParam>& free_params,
                             std::span<const double> theta);

// lhs/rhs ratio of the problem's theorem at theta; the grid-scan oracle uses this too.
double evaluate_ratio(const SearchProblem& problem, std::span<const double> theta);

// Nelder-Mead with coefficients (1, 2, 0.5, 0.5) and seeded restarts.
SearchResult minimize_ratio(const SearchProblem& problem);

std::string search_result_to_json(const SearchResult& r);

// Parameter sweep over a (p, q) grid; inadmissible tuples are recorded, never dropped.
struct SweepCell {
    CknParams params;
    std::optional<InequalityReport> report;
    std::string skipped_reason;
};

std::vector<SweepCell> sweep(TheoremId id, const std::vector<double>& ps,
                             const std::vector<double>& qs, int n, const FieldSpec& f,
                             const Budget& b);

std::string sweep_to_csv(const std::vector<SweepCell>& cells);

}  // namespace ckn
