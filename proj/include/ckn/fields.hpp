#pragma once

#include <array>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ckn/dual.hpp"

namespace ckn {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Point {
    std::vector<double> coords;
    int dim() const { return static_cast<int>(coords.size()); }
};

// Jets hold one row per real component; complex fields are the pair (re, im).
struct Jet1 {
    int dim = 0;
    int m = 0;
    std::array<double, kMaxComp> value{};
    std::array<std::array<double, kMaxDim>, kMaxComp> grad{};
};

struct Jet2 {
    int dim = 0;
    int m = 0;
    std::array<double, kMaxComp> value{};
    std::array<std::array<double, kMaxDim>, kMaxComp> grad{};
    std::array<std::array<std::array<double, kMaxDim>, kMaxDim>, kMaxComp> hess{};

    double laplacian(int comp) const {
        double t = 0.0;
        for (int i = 0; i < dim; ++i) t += hess[comp][i][i];
        return t;
    }
};

enum class DomainKind { Euclidean, SphereAmbient };

struct Domain {
    DomainKind kind = DomainKind::Euclidean;
    int ambient_dim = 0;  // n for euclidean(n), n+1 for sphere-ambient around S^n
};

enum class CodomainKind { Real, Complex, Vector };

// ---- Custom expression trees: +, *, pow, exp, sin, cos over coordinates ----

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Const, Coord, Add, Mul, Pow, Exp, Sin, Cos };
    Kind kind = Kind::Const;
    double cval = 0.0;            // Const value, or Pow exponent
    int coord_label = 0;          // as written: 1..n euclidean, 0..n sphere-ambient
    int coord_index = 0;          // resolved 0-based index
    std::vector<ExprPtr> args;
};

// Parses the parenthesized prefix form, e.g. "(mul (coord 1) (coord 2))".
// Coordinate labels are validated and resolved against the domain.
ExprPtr parse_expr(const std::string& src, const Domain& domain);
std::string expr_to_string(const Expr& e, const Domain& domain);

// ---- Field families ----

struct FieldSpec;

struct GaussianReal {                 // exp(-w|x-c|^2/2)
    std::vector<double> center;
    double inv_width = 1.0;
};
struct ChirpedGaussian {              // exp(-b|x|^2/2) e^{i k.x}
    std::vector<double> wave;
    double inv_width = 1.0;
};
struct RadialPolyGaussian {           // |x|^a exp(-b|x|^2)
    double radial_exp = 0.0;
    double decay = 1.0;
};
struct AffineHarmonic {               // a + b x_axis
    double offset = 0.0;
    double slope = 1.0;
    int axis = 0;
};
struct VectorOfFields {
    std::vector<FieldSpec> parts;     // all real scalar, same domain
};
struct CustomField {
    std::vector<ExprPtr> comps;       // 1 real, 2 complex (re, im), m vector
    std::vector<std::string> sources; // original prefix strings, kept for serialization
};

using Family = std::variant<GaussianReal, ChirpedGaussian, RadialPolyGaussian,
                            AffineHarmonic, VectorOfFields, CustomField>;

struct FieldSpec {
    Domain domain;
    CodomainKind codomain = CodomainKind::Real;
    Family family;
    bool homogeneous_extension = false;  // evaluate as F(x) = f(x/|x|)

    int components() const;
    bool is_complex() const { return codomain == CodomainKind::Complex; }
};

// Throws SpecError when invariants fail (non-finite params, decay <= 0, m < 2, ...).
void validate(const FieldSpec& f);

// Degree-0 homogeneous extension wrapper; requires a sphere-ambient domain.
FieldSpec restrict_to_sphere(const FieldSpec& f);

Jet1 eval_jet1(const FieldSpec& f, const Point& x);
Jet2 eval_jet2(const FieldSpec& f, const Point& x);

// JSON round-trip, e.g. {"family":"chirped_gaussian","k":[2,0,0],"b":0.5,"domain":{"euclidean":3}}
FieldSpec field_from_json(const std::string& json_text);
std::string field_to_json(const FieldSpec& f);

// ---- Generic evaluation over double / Dual1 / Dual2 ----

namespace detail {

template <class S>
S eval_expr_at(const Expr& e, std::span<const S> x) {
    using std::exp; using std::sin; using std::cos; using std::pow;
    switch (e.kind) {
        case Expr::Kind::Const: {
            S r = x[0]*0.0;  // keeps direction count
            r = r + e.cval;
            return r;
        }
        case Expr::Kind::Coord:
            return x[static_cast<std::size_t>(e.coord_index)];
        case Expr::Kind::Add: {
            S r = eval_expr_at(*e.args[0], x);
            for (std::size_t i = 1; i < e.args.size(); ++i) r = r + eval_expr_at(*e.args[i], x);
            return r;
        }
        case Expr::Kind::Mul: {
            S r = eval_expr_at(*e.args[0], x);
            for (std::size_t i = 1; i < e.args.size(); ++i) r = r*eval_expr_at(*e.args[i], x);
            return r;
        }
        case Expr::Kind::Pow:
            return pow(eval_expr_at(*e.args[0], x), e.cval);
        case Expr::Kind::Exp:
            return exp(eval_expr_at(*e.args[0], x));
        case Expr::Kind::Sin:
            return sin(eval_expr_at(*e.args[0], x));
        case Expr::Kind::Cos:
            return cos(eval_expr_at(*e.args[0], x));
    }
    throw EvalError("unreachable expression kind");
}

template <class S>
S radius_sq(std::span<const S> x) {
    S r2 = x[0]*x[0];
    for (std::size_t i = 1; i < x.size(); ++i) r2 = r2 + x[i]*x[i];
    return r2;
}

// component c of the (unrestricted) family at x
template <class S>
S eval_family_component(const FieldSpec& f, int c, std::span<const S> x) {
    using std::exp; using std::sin; using std::cos; using std::pow; using std::log;
    if (const auto* g = std::get_if<GaussianReal>(&f.family)) {
        S q = (x[0] - g->center[0])*(x[0] - g->center[0]);
        for (std::size_t i = 1; i < x.size(); ++i) q = q + (x[i] - g->center[i])*(x[i] - g->center[i]);
        return exp(q*(-0.5*g->inv_width));
    }
    if (const auto* ch = std::get_if<ChirpedGaussian>(&f.family)) {
        S q = radius_sq(x);
        S phase = x[0]*ch->wave[0];
        for (std::size_t i = 1; i < x.size(); ++i) phase = phase + x[i]*ch->wave[i];
        S amp = exp(q*(-0.5*ch->inv_width));
        return c == 0 ? amp*cos(phase) : amp*sin(phase);
    }
    if (const auto* rp = std::get_if<RadialPolyGaussian>(&f.family)) {
        S q = radius_sq(x);
        S e = exp(q*(-rp->decay));
        if (rp->radial_exp == 0.0) return e;
        // |x|^a = exp((a/2) log |x|^2); undefined at the origin, surfaces as non-finite
        return exp(log(q)*(0.5*rp->radial_exp))*e;
    }
    if (const auto* ah = std::get_if<AffineHarmonic>(&f.family)) {
        return x[static_cast<std::size_t>(ah->axis)]*ah->slope + ah->offset;
    }
    if (const auto* vf = std::get_if<VectorOfFields>(&f.family)) {
        return eval_family_component(vf->parts[static_cast<std::size_t>(c)], 0, x);
    }
    const auto& cf = std::get<CustomField>(f.family);
    return eval_expr_at(*cf.comps[static_cast<std::size_t>(c)], x);
}

// component c of the field, applying the homogeneous extension when set
template <class S>
S eval_component(const FieldSpec& f, int c, std::span<const S> x) {
    using std::sqrt;
    if (!f.homogeneous_extension) return eval_family_component(f, c, x);
    S r2 = radius_sq(x);
    if (value_of(r2) <= 0.0)
        throw EvalError("homogeneous extension undefined at the origin");
    S inv_r = 1.0/sqrt(r2);
    std::array<S, kMaxDim> y;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i]*inv_r;
    return eval_family_component(f, c, std::span<const S>(y.data(), x.size()));
}

}  // namespace detail

}  // namespace ckn
