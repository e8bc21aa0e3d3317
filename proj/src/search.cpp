#include "ckn/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ckn/json_out.hpp"
#include "ckn/rng.hpp"

namespace ckn {

std::string stop_reason_name(StopReason s) {
    switch (s) {
        case StopReason::SimplexDiameter: return "simplex_diameter";
        case StopReason::ObjectiveSpread: return "objective_spread";
        case StopReason::IterationCap: return "iteration_cap";
        case StopReason::EvaluationFailures: return "evaluation_failures";
    }
    return "unknown";
}

FieldSpec instantiate_family(const FieldSpec& family, const std::vector<FreeParam>& free_params,
                             std::span<const double> theta) {
    if (theta.size() != free_params.size())
        throw SpecError("theta length does not match the free parameter list");
    FieldSpec f = family;
    for (std::size_t i = 0; i < free_params.size(); ++i) {
        const std::string& name = free_params[i].name;
        const double v = theta[i];
        bool set = false;
        if (auto* g = std::get_if<GaussianReal>(&f.family)) {
            if (name == "b") { g->inv_width = v; set = true; }
        } else if (auto* c = std::get_if<ChirpedGaussian>(&f.family)) {
            if (name == "b") { c->inv_width = v; set = true; }
            else if (name.size() == 2 && name[0] == 'k') {
                const int k = name[1] - '0';
                if (k >= 0 && k < static_cast<int>(c->wave.size())) { c->wave[static_cast<std::size_t>(k)] = v; set = true; }
            }
        } else if (auto* r = std::get_if<RadialPolyGaussian>(&f.family)) {
            if (name == "a") { r->radial_exp = v; set = true; }
            else if (name == "b") { r->decay = v; set = true; }
        } else if (auto* a = std::get_if<AffineHarmonic>(&f.family)) {
            if (name == "a") { a->offset = v; set = true; }
            else if (name == "b") { a->slope = v; set = true; }
        }
        if (!set)
            throw SpecError("family has no tunable parameter named '" + name + "'");
    }
    validate(f);
    return f;
}

double evaluate_ratio(const SearchProblem& problem, std::span<const double> theta) {
    const FieldSpec f = instantiate_family(problem.family, problem.free_params, theta);
    InequalityReport rep;
    switch (problem.theorem_id) {
        case TheoremId::Hpw:
            rep = check_hpw(problem.params.n, f, problem.budget);
            break;
        case TheoremId::CknComplex:
        case TheoremId::CknVector:
            rep = check_ckn_raw(problem.theorem_id, problem.params.n, problem.params.p,
                                problem.params.q, f, problem.budget);
            break;
        default:
            throw SpecError("minimize_ratio supports the euclidean theorems (hpw, ckn_complex, ckn_vector)");
    }
    const double denom = problem.objective == ObjectiveKind::RatioClassical ? rep.rhs_classical
                                                                            : rep.rhs_improved;
    if (denom <= 0.0) throw EvalError("non-positive denominator in ratio objective");
    return rep.lhs/denom;
}

namespace {

struct Vertex {
    std::vector<double> theta;
    double value;
};

double simplex_diameter(const std::vector<Vertex>& vx) {
    double dia = 0.0;
    for (std::size_t i = 0; i < vx.size(); ++i)
        for (std::size_t j = i + 1; j < vx.size(); ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < vx[i].theta.size(); ++k) {
                const double d = vx[i].theta[k] - vx[j].theta[k];
                d2 += d*d;
            }
            dia = std::max(dia, std::sqrt(d2));
        }
    return dia;
}

constexpr double kPenalty = 1e100;

}  // namespace

SearchResult minimize_ratio(const SearchProblem& problem) {
    const std::size_t dim = problem.free_params.size();
    if (dim == 0) throw SpecError("search needs at least one free parameter");
    for (const auto& fp : problem.free_params)
        if (!(std::isfinite(fp.lo) && std::isfinite(fp.hi) && fp.lo < fp.hi))
            throw SpecError("free parameter '" + fp.name + "' needs finite bounds with lo < hi");

    SearchResult result;
    result.best_ratio = kPenalty;

    int evaluations = 0;
    int failures_in_row = 0;

    auto objective = [&](const std::vector<double>& theta, bool& failed) -> double {
        for (std::size_t k = 0; k < dim; ++k)
            if (theta[k] < problem.free_params[k].lo || theta[k] > problem.free_params[k].hi)
                return kPenalty;  // outside the box: worst, not a failure
        ++evaluations;
        try {
            const double v = evaluate_ratio(problem, theta);
            if (!std::isfinite(v)) { failed = true; return kPenalty; }
            failures_in_row = 0;
            return v;
        } catch (const std::exception&) {
            failed = true;
            return kPenalty;
        }
    };

    for (int restart = 0; restart < std::max(1, problem.restarts); ++restart) {
        SplitMix64 rng(problem.seed*0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(restart) + 1);

        // initial simplex: random interior point plus axis steps of 10% range
        std::vector<Vertex> vx(dim + 1);
        vx[0].theta.resize(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            const auto& fp = problem.free_params[k];
            vx[0].theta[k] = fp.lo + (0.15 + 0.7*rng.unit())*(fp.hi - fp.lo);
        }
        for (std::size_t i = 1; i <= dim; ++i) {
            vx[i].theta = vx[0].theta;
            const auto& fp = problem.free_params[i - 1];
            double step = 0.1*(fp.hi - fp.lo);
            if (vx[i].theta[i - 1] + step > fp.hi) step = -step;
            vx[i].theta[i - 1] += step;
        }

        bool aborted = false;
        failures_in_row = 0;
        for (auto& v : vx) {
            bool failed = false;
            v.value = objective(v.theta, failed);
            if (failed && ++failures_in_row >= 5) { aborted = true; break; }
        }
        if (aborted) {
            if (result.trace.empty()) result.stop = StopReason::EvaluationFailures;
            continue;
        }

        StopReason stop = StopReason::IterationCap;
        int iter = 0;
        for (; iter < problem.max_iterations; ++iter) {
            std::sort(vx.begin(), vx.end(),
                      [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
            const double dia = simplex_diameter(vx);
            result.trace.push_back({iter, vx[0].value, dia});
            if (dia < 1e-6) { stop = StopReason::SimplexDiameter; break; }
            if (vx.back().value - vx.front().value < 1e-8) { stop = StopReason::ObjectiveSpread; break; }

            // centroid of all but the worst
            std::vector<double> centroid(dim, 0.0);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t k = 0; k < dim; ++k) centroid[k] += vx[i].theta[k]/static_cast<double>(dim);

            auto along = [&](double coef) {
                std::vector<double> t(dim);
                for (std::size_t k = 0; k < dim; ++k)
                    t[k] = centroid[k] + coef*(centroid[k] - vx.back().theta[k]);
                return t;
            };

            bool failed = false;
            bool did_shrink = false;
            const std::vector<double> refl = along(1.0);
            const double frefl = objective(refl, failed);
            if (failed && ++failures_in_row >= 5) { stop = StopReason::EvaluationFailures; aborted = true; break; }

            if (!failed && frefl < vx[0].value) {
                bool failed2 = false;
                const std::vector<double> expa = along(2.0);
                const double fexpa = objective(expa, failed2);
                if (!failed2 && fexpa < frefl) {
                    vx.back() = {expa, fexpa};
                } else {
                    vx.back() = {refl, frefl};
                }
            } else if (!failed && frefl < vx[dim - 1].value) {
                vx.back() = {refl, frefl};
            } else if (!failed) {
                bool failed3 = false;
                const std::vector<double> contr = along(-0.5);
                const double fcontr = objective(contr, failed3);
                if (!failed3 && fcontr < vx.back().value) {
                    vx.back() = {contr, fcontr};
                } else {
                    did_shrink = true;
                }
            } else {
                did_shrink = true;  // evaluation failure triggers a shrink step
            }

            if (did_shrink) {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t k = 0; k < dim; ++k)
                        vx[i].theta[k] = vx[0].theta[k] + 0.5*(vx[i].theta[k] - vx[0].theta[k]);
                    bool failed4 = false;
                    vx[i].value = objective(vx[i].theta, failed4);
                    if (failed4 && ++failures_in_row >= 5) { stop = StopReason::EvaluationFailures; aborted = true; break; }
                }
                if (aborted) break;
            }
        }

        std::sort(vx.begin(), vx.end(),
                  [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
        ++result.restarts_run;
        if (vx[0].value < result.best_ratio) {
            result.best_ratio = vx[0].value;
            result.best_theta = vx[0].theta;
            result.stop = stop;
        }
    }

    result.evaluations = evaluations;
    if (result.best_theta.empty())
        throw EvalError("search aborted: too many consecutive objective evaluation failures");
    return result;
}

std::string search_result_to_json(const SearchResult& r) {
    JsonWriter w;
    w.begin_object();
    w.field("best_ratio", r.best_ratio);
    w.field("best_theta", r.best_theta);
    w.field("evaluations", r.evaluations);
    w.field("restarts_run", r.restarts_run);
    w.field("stop", stop_reason_name(r.stop));
    w.key("trace");
    w.begin_array();
    for (const auto& t : r.trace) {
        w.begin_object();
        w.field("iteration", t.iteration);
        w.field("best_value", t.best_value);
        w.field("diameter", t.diameter);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

std::vector<SweepCell> sweep(TheoremId id, const std::vector<double>& ps,
                             const std::vector<double>& qs, int n, const FieldSpec& f,
                             const Budget& b) {
    std::vector<SweepCell> cells;
    for (double p : ps)
        for (double q : qs) {
            SweepCell cell;
            cell.params = {n, p, q};
            try {
                switch (id) {
                    case TheoremId::CknComplex:
                        cell.report = check_ckn_complex(cell.params, f, b);
                        break;
                    case TheoremId::CknVector:
                        cell.report = check_ckn_vector(cell.params, f, b);
                        break;
                    case TheoremId::SecondOrder:
                        cell.report = check_second_order(f, cell.params, b);
                        break;
                    case TheoremId::Hpw:
                        cell.report = check_hpw(n, f, b);
                        break;
                    default:
                        throw SpecError("sweep supports hpw, ckn_complex, ckn_vector, second_order");
                }
            } catch (const SpecError& e) {
                cell.skipped_reason = e.what();
            }
            cells.push_back(std::move(cell));
        }
    return cells;
}

std::string sweep_to_csv(const std::vector<SweepCell>& cells) {
    std::string out = "theorem_id,n,p,q,lhs,rhs_classical,cov_term,slack,relative_margin,holds,skipped_reason\n";
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& c : cells) {
        if (c.report) {
            const auto& r = *c.report;
            out += theorem_name(r.theorem_id) + "," + std::to_string(c.params.n) + "," +
                   num(c.params.p) + "," + num(c.params.q) + "," + num(r.lhs) + "," +
                   num(r.rhs_classical) + "," + num(r.cov_term) + "," + num(r.slack) + "," +
                   num(r.relative_margin) + "," + (r.holds ? "true" : "false") + ",\n";
        } else {
            std::string reason = c.skipped_reason;
            for (char& ch : reason)
                if (ch == ',' || ch == '\n') ch = ';';
            out += "," + std::to_string(c.params.n) + "," + num(c.params.p) + "," +
                   num(c.params.q) + ",,,,,,," + reason + "\n";
        }
    }
    return out;
}

}  // namespace ckn
