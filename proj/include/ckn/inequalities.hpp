#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ckn/fields.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/sphere_stats.hpp"

namespace ckn {

struct CknParams {
    int n = 3;
    double p = 3.0;
    double q = 1.0;
};

// Throws SpecError naming the violated constraint (0 < q < 2 < p, 2 < n < 2(p-q)/(p-2)).
void validate(const CknParams& params);

struct GeneralCknParams {
    int n = 3;
    double p = 3.0;
    double r = 4.0;
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0/6.0;
};

void validate(const GeneralCknParams& params);

enum class TheoremId {
    CknComplex,
    CknVector,
    Hpw,
    SecondOrder,
    CknGeneral,
    SphereComplex,
    SphereComplexStar,
    SphereCorollary,
    SphereVector,
    SphereVectorEnergy,
};

std::string theorem_name(TheoremId id);
TheoremId theorem_from_name(const std::string& name);

struct InequalityReport {
    TheoremId theorem_id = TheoremId::Hpw;
    double lhs = 0.0;
    double rhs_classical = 0.0;
    double cov_term = 0.0;  // the COV integral itself (>= 0); enters rhs as its square / p-th power
    double rhs_improved = 0.0;
    double slack = 0.0;             // lhs - rhs_improved
    double relative_margin = 0.0;   // slack/lhs (0 when lhs = 0)
    double check_tolerance = 0.0;   // 10x the propagated RSS of quadrature errors
    bool holds = false;             // slack >= -check_tolerance
    std::vector<double> quadrature_errors;
    std::map<std::string, double> extras;  // intermediate integrals, identity residuals
};

std::string report_to_json(const InequalityReport& r);

// Shared CKN/HPW integral engine over R^n; no codomain validation (callers validate).
InequalityReport check_ckn_raw(TheoremId id, int n, double p, double q, const FieldSpec& f,
                               const Budget& b);

InequalityReport check_ckn_complex(const CknParams& params, const FieldSpec& f, const Budget& b);
InequalityReport check_ckn_vector(const CknParams& params, const FieldSpec& f, const Budget& b);
InequalityReport check_hpw(int n, const FieldSpec& f, const Budget& b);
InequalityReport check_second_order(const FieldSpec& u, const CknParams& params, const Budget& b);
InequalityReport check_ckn_general(const GeneralCknParams& params, const FieldSpec& f, const Budget& b);

InequalityReport check_sphere_complex(const FieldSpec& f, int sphere_dim, const Budget& b);
InequalityReport check_sphere_complex_star(const FieldSpec& f, int sphere_dim, const Budget& b);
InequalityReport check_sphere_corollary(const FieldSpec& f, int sphere_dim, const Budget& b);
std::pair<InequalityReport, InequalityReport> check_sphere_vector(const FieldSpec& f, int sphere_dim,
                                                                  const Budget& b);

}  // namespace ckn
