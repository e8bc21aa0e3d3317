#include "ckn/fields.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace ckn {

int FieldSpec::components() const {
    switch (codomain) {
        case CodomainKind::Real: return 1;
        case CodomainKind::Complex: return 2;
        case CodomainKind::Vector:
            if (const auto* vf = std::get_if<VectorOfFields>(&family))
                return static_cast<int>(vf->parts.size());
            return static_cast<int>(std::get<CustomField>(family).comps.size());
    }
    return 0;
}

namespace {

std::string point_str(std::span<const double> x) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    return os.str();
}

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw SpecError(msg);
}

}  // namespace

void validate(const FieldSpec& f) {
    const int d = f.domain.ambient_dim;
    require(d >= 1 && d <= kMaxDim, "domain dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    if (f.domain.kind == DomainKind::SphereAmbient)
        require(d >= 2, "sphere-ambient domain needs ambient dimension >= 2");

    if (const auto* g = std::get_if<GaussianReal>(&f.family)) {
        require(f.codomain == CodomainKind::Real, "gaussian is real-valued");
        require(static_cast<int>(g->center.size()) == d, "gaussian center length != domain dimension");
        require(all_finite(g->center), "gaussian center must be finite");
        require(std::isfinite(g->inv_width) && g->inv_width > 0.0, "gaussian inverse width must be > 0");
    } else if (const auto* ch = std::get_if<ChirpedGaussian>(&f.family)) {
        require(f.codomain == CodomainKind::Complex, "chirped gaussian is complex-valued");
        require(static_cast<int>(ch->wave.size()) == d, "wave vector length != domain dimension");
        require(all_finite(ch->wave), "wave vector must be finite");
        require(std::isfinite(ch->inv_width) && ch->inv_width > 0.0, "chirped gaussian inverse width must be > 0");
    } else if (const auto* rp = std::get_if<RadialPolyGaussian>(&f.family)) {
        require(f.codomain == CodomainKind::Real, "radial poly gaussian is real-valued");
        require(std::isfinite(rp->radial_exp) && rp->radial_exp >= 0.0, "radial exponent must be >= 0");
        require(std::isfinite(rp->decay) && rp->decay > 0.0, "decay must be > 0");
    } else if (const auto* ah = std::get_if<AffineHarmonic>(&f.family)) {
        require(f.codomain == CodomainKind::Real, "affine harmonic is real-valued");
        require(std::isfinite(ah->offset) && std::isfinite(ah->slope), "affine coefficients must be finite");
        require(ah->axis >= 0 && ah->axis < d, "affine axis out of range");
    } else if (const auto* vf = std::get_if<VectorOfFields>(&f.family)) {
        require(f.codomain == CodomainKind::Vector, "vector-of-fields needs vector codomain");
        require(vf->parts.size() >= 2, "vector fields need m >= 2 components");
        require(vf->parts.size() <= kMaxComp, "too many vector components");
        for (const auto& p : vf->parts) {
            require(p.codomain == CodomainKind::Real, "vector components must be real scalar fields");
            require(p.domain.kind == f.domain.kind && p.domain.ambient_dim == d,
                    "vector component domain mismatch");
            require(!p.homogeneous_extension, "vector components must not carry their own extension");
            validate(p);
        }
    } else {
        const auto& cf = std::get<CustomField>(f.family);
        const std::size_t want = f.codomain == CodomainKind::Real      ? 1u
                               : f.codomain == CodomainKind::Complex   ? 2u
                                                                       : cf.comps.size();
        require(cf.comps.size() == want && !cf.comps.empty(), "custom component count mismatch");
        if (f.codomain == CodomainKind::Vector)
            require(cf.comps.size() >= 2 && cf.comps.size() <= kMaxComp, "custom vector needs 2..8 components");
        for (const auto& e : cf.comps) require(e != nullptr, "custom expression missing");
    }
}

FieldSpec restrict_to_sphere(const FieldSpec& f) {
    if (f.domain.kind != DomainKind::SphereAmbient)
        throw SpecError("restrict_to_sphere needs a sphere-ambient field");
    FieldSpec r = f;
    r.homogeneous_extension = true;
    return r;
}

namespace {

template <class D>
void seed_and_check(const FieldSpec& f, const Point& x, int m, D* seeds) {
    if (x.dim() != f.domain.ambient_dim)
        throw SpecError("dimension mismatch: point has dim " + std::to_string(x.dim()) +
                        ", field domain has dim " + std::to_string(f.domain.ambient_dim));
    (void)m;
    for (int i = 0; i < x.dim(); ++i) {
        if (!std::isfinite(x.coords[static_cast<std::size_t>(i)]))
            throw SpecError("non-finite coordinate " + std::to_string(i) + " in evaluation point");
        seeds[i] = D::variable(x.coords[static_cast<std::size_t>(i)], i, x.dim());
    }
}

}  // namespace

Jet1 eval_jet1(const FieldSpec& f, const Point& x) {
    const int m = f.components();
    std::array<Dual1, kMaxDim> seeds;
    seed_and_check(f, x, m, seeds.data());
    std::span<const Dual1> xs(seeds.data(), static_cast<std::size_t>(x.dim()));

    Jet1 jet;
    jet.dim = x.dim();
    jet.m = m;
    for (int c = 0; c < m; ++c) {
        Dual1 r = detail::eval_component(f, c, xs);
        bool ok = std::isfinite(r.v);
        for (int i = 0; i < jet.dim && ok; ++i) ok = std::isfinite(r.g[i]);
        if (!ok)
            throw EvalError("non-finite value for component " + std::to_string(c) +
                            " at " + point_str(x.coords));
        jet.value[c] = r.v;
        for (int i = 0; i < jet.dim; ++i) jet.grad[c][i] = r.g[i];
    }
    return jet;
}

Jet2 eval_jet2(const FieldSpec& f, const Point& x) {
    const int m = f.components();
    std::array<Dual2, kMaxDim> seeds;
    seed_and_check(f, x, m, seeds.data());
    std::span<const Dual2> xs(seeds.data(), static_cast<std::size_t>(x.dim()));

    Jet2 jet;
    jet.dim = x.dim();
    jet.m = m;
    for (int c = 0; c < m; ++c) {
        Dual2 r = detail::eval_component(f, c, xs);
        bool ok = std::isfinite(r.v);
        for (int i = 0; i < jet.dim && ok; ++i) ok = std::isfinite(r.g[i]);
        for (int i = 0; i < jet.dim && ok; ++i)
            for (int j = 0; j <= i && ok; ++j) ok = std::isfinite(r.hess(i, j));
        if (!ok)
            throw EvalError("non-finite value for component " + std::to_string(c) +
                            " at " + point_str(x.coords));
        jet.value[c] = r.v;
        for (int i = 0; i < jet.dim; ++i) jet.grad[c][i] = r.g[i];
        for (int i = 0; i < jet.dim; ++i)
            for (int j = 0; j <= i; ++j) {
                const double h = r.hess(i, j);   // same stored double on both sides
                jet.hess[c][i][j] = h;
                jet.hess[c][j][i] = h;
            }
    }
    return jet;
}

// ---- expression parser ----

namespace {

struct Tokenizer {
    const std::string& s;
    std::size_t pos = 0;

    explicit Tokenizer(const std::string& src) : s(src) {}

    std::string next() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos >= s.size()) return {};
        if (s[pos] == '(' || s[pos] == ')') return std::string(1, s[pos++]);
        std::size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
               s[pos] != '(' && s[pos] != ')')
            ++pos;
        return s.substr(start, pos - start);
    }
};

bool parse_number(const std::string& tok, double& out) {
    if (tok.empty()) return false;
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size();
}

int resolve_coord(int label, const Domain& domain) {
    if (domain.kind == DomainKind::Euclidean) {
        if (label < 1 || label > domain.ambient_dim)
            throw SpecError("coordinate label " + std::to_string(label) +
                            " out of range 1.." + std::to_string(domain.ambient_dim) + " for euclidean domain");
        return label - 1;
    }
    if (label < 0 || label >= domain.ambient_dim)
        throw SpecError("coordinate label " + std::to_string(label) +
                        " out of range 0.." + std::to_string(domain.ambient_dim - 1) + " for sphere-ambient domain");
    return label;
}

ExprPtr parse_node(Tokenizer& tz, const Domain& domain);

ExprPtr parse_list(Tokenizer& tz, const Domain& domain) {
    std::string head = tz.next();
    auto node = std::make_shared<Expr>();
    if (head == "add" || head == "mul") {
        node->kind = head == "add" ? Expr::Kind::Add : Expr::Kind::Mul;
        std::string tok;
        for (;;) {
            std::size_t mark = tz.pos;
            tok = tz.next();
            if (tok == ")") break;
            if (tok.empty()) throw SpecError("unterminated (" + head + " ...)");
            tz.pos = mark;
            node->args.push_back(parse_node(tz, domain));
        }
        if (node->args.size() < 2) throw SpecError("(" + head + " ...) needs at least two arguments");
        return node;
    }
    if (head == "pow") {
        node->kind = Expr::Kind::Pow;
        node->args.push_back(parse_node(tz, domain));
        std::string etok = tz.next();
        double e;
        if (!parse_number(etok, e)) throw SpecError("(pow base exponent) needs a numeric exponent");
        node->cval = e;
        if (tz.next() != ")") throw SpecError("(pow ...) takes exactly two arguments");
        return node;
    }
    if (head == "exp" || head == "sin" || head == "cos") {
        node->kind = head == "exp" ? Expr::Kind::Exp : head == "sin" ? Expr::Kind::Sin : Expr::Kind::Cos;
        node->args.push_back(parse_node(tz, domain));
        if (tz.next() != ")") throw SpecError("(" + head + " ...) takes exactly one argument");
        return node;
    }
    if (head == "coord") {
        std::string itok = tz.next();
        double lbl;
        if (!parse_number(itok, lbl) || lbl != std::floor(lbl))
            throw SpecError("(coord i) needs an integer label");
        node->kind = Expr::Kind::Coord;
        node->coord_label = static_cast<int>(lbl);
        node->coord_index = resolve_coord(node->coord_label, domain);
        if (tz.next() != ")") throw SpecError("(coord i) takes exactly one argument");
        return node;
    }
    throw SpecError("unknown operator '" + head + "' in custom expression (allowed: add mul pow exp sin cos coord)");
}

ExprPtr parse_node(Tokenizer& tz, const Domain& domain) {
    std::string tok = tz.next();
    if (tok == "(") return parse_list(tz, domain);
    double v;
    if (parse_number(tok, v)) {
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::Const;
        node->cval = v;
        return node;
    }
    throw SpecError("unexpected token '" + tok + "' in custom expression");
}

}  // namespace

ExprPtr parse_expr(const std::string& src, const Domain& domain) {
    Tokenizer tz(src);
    ExprPtr root = parse_node(tz, domain);
    std::string rest = tz.next();
    if (!rest.empty()) throw SpecError("trailing input '" + rest + "' after custom expression");
    return root;
}

std::string expr_to_string(const Expr& e, const Domain& domain) {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    switch (e.kind) {
        case Expr::Kind::Const: return num(e.cval);
        case Expr::Kind::Coord: return "(coord " + std::to_string(e.coord_label) + ")";
        case Expr::Kind::Pow:   return "(pow " + expr_to_string(*e.args[0], domain) + " " + num(e.cval) + ")";
        case Expr::Kind::Exp:   return "(exp " + expr_to_string(*e.args[0], domain) + ")";
        case Expr::Kind::Sin:   return "(sin " + expr_to_string(*e.args[0], domain) + ")";
        case Expr::Kind::Cos:   return "(cos " + expr_to_string(*e.args[0], domain) + ")";
        case Expr::Kind::Add:
        case Expr::Kind::Mul: {
            std::string out = e.kind == Expr::Kind::Add ? "(add" : "(mul";
            for (const auto& a : e.args) out += " " + expr_to_string(*a, domain);
            return out + ")";
        }
    }
    return {};
}

// ---- JSON ----

namespace {

using nlohmann::json;

Domain domain_from_json(const json& j) {
    Domain d;
    if (j.contains("euclidean")) {
        d.kind = DomainKind::Euclidean;
        d.ambient_dim = j.at("euclidean").get<int>();
    } else if (j.contains("sphere_ambient")) {
        d.kind = DomainKind::SphereAmbient;
        d.ambient_dim = j.at("sphere_ambient").get<int>();
    } else {
        throw SpecError("domain must be {\"euclidean\": n} or {\"sphere_ambient\": n+1}");
    }
    return d;
}

json domain_to_json(const Domain& d) {
    json j;
    if (d.kind == DomainKind::Euclidean) j["euclidean"] = d.ambient_dim;
    else j["sphere_ambient"] = d.ambient_dim;
    return j;
}

FieldSpec field_from_json_obj(const json& j);

FieldSpec parse_family(const json& j, const Domain& dom) {
    FieldSpec f;
    f.domain = dom;
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "gaussian") {
        GaussianReal g;
        g.center = j.contains("center") ? j.at("center").get<std::vector<double>>()
                                        : std::vector<double>(static_cast<std::size_t>(dom.ambient_dim), 0.0);
        g.inv_width = j.value("b", 1.0);
        f.codomain = CodomainKind::Real;
        f.family = std::move(g);
    } else if (fam == "chirped_gaussian") {
        ChirpedGaussian c;
        c.wave = j.at("k").get<std::vector<double>>();
        c.inv_width = j.value("b", 1.0);
        f.codomain = CodomainKind::Complex;
        f.family = std::move(c);
    } else if (fam == "radial_poly_gaussian") {
        RadialPolyGaussian r;
        r.radial_exp = j.value("a", 0.0);
        r.decay = j.value("b", 1.0);
        f.codomain = CodomainKind::Real;
        f.family = r;
    } else if (fam == "affine_harmonic") {
        AffineHarmonic a;
        a.offset = j.value("a", 0.0);
        a.slope = j.value("b", 1.0);
        a.axis = j.value("axis", 0);
        f.codomain = CodomainKind::Real;
        f.family = a;
    } else if (fam == "vector") {
        VectorOfFields v;
        for (const auto& cj : j.at("components")) {
            json sub = cj;
            if (!sub.contains("domain")) sub["domain"] = domain_to_json(dom);
            v.parts.push_back(field_from_json_obj(sub));
        }
        f.codomain = CodomainKind::Vector;
        f.family = std::move(v);
    } else if (fam == "custom") {
        CustomField c;
        if (j.contains("expr")) {
            c.sources = {j.at("expr").get<std::string>()};
            f.codomain = CodomainKind::Real;
        } else if (j.contains("re") && j.contains("im")) {
            c.sources = {j.at("re").get<std::string>(), j.at("im").get<std::string>()};
            f.codomain = CodomainKind::Complex;
        } else if (j.contains("exprs")) {
            c.sources = j.at("exprs").get<std::vector<std::string>>();
            f.codomain = CodomainKind::Vector;
        } else {
            throw SpecError("custom field needs \"expr\", \"re\"+\"im\", or \"exprs\"");
        }
        for (const auto& s : c.sources) c.comps.push_back(parse_expr(s, dom));
        f.family = std::move(c);
    } else {
        throw SpecError("unknown field family '" + fam + "'");
    }
    return f;
}

FieldSpec field_from_json_obj(const json& j) {
    Domain dom = domain_from_json(j.at("domain"));
    FieldSpec f = parse_family(j, dom);
    f.homogeneous_extension = j.value("restricted", false);
    if (f.homogeneous_extension && f.domain.kind != DomainKind::SphereAmbient)
        throw SpecError("\"restricted\": true needs a sphere-ambient domain");
    validate(f);
    return f;
}

}  // namespace

FieldSpec field_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("field JSON parse error: ") + e.what());
    }
    return field_from_json_obj(j);
}

std::string field_to_json(const FieldSpec& f) {
    json j;
    j["domain"] = domain_to_json(f.domain);
    if (f.homogeneous_extension) j["restricted"] = true;
    if (const auto* g = std::get_if<GaussianReal>(&f.family)) {
        j["family"] = "gaussian";
        j["center"] = g->center;
        j["b"] = g->inv_width;
    } else if (const auto* c = std::get_if<ChirpedGaussian>(&f.family)) {
        j["family"] = "chirped_gaussian";
        j["k"] = c->wave;
        j["b"] = c->inv_width;
    } else if (const auto* r = std::get_if<RadialPolyGaussian>(&f.family)) {
        j["family"] = "radial_poly_gaussian";
        j["a"] = r->radial_exp;
        j["b"] = r->decay;
    } else if (const auto* a = std::get_if<AffineHarmonic>(&f.family)) {
        j["family"] = "affine_harmonic";
        j["a"] = a->offset;
        j["b"] = a->slope;
        j["axis"] = a->axis;
    } else if (const auto* v = std::get_if<VectorOfFields>(&f.family)) {
        j["family"] = "vector";
        json comps = json::array();
        for (const auto& p : v->parts) comps.push_back(json::parse(field_to_json(p)));
        j["components"] = comps;
    } else {
        const auto& c = std::get<CustomField>(f.family);
        j["family"] = "custom";
        if (f.codomain == CodomainKind::Real) j["expr"] = c.sources[0];
        else if (f.codomain == CodomainKind::Complex) { j["re"] = c.sources[0]; j["im"] = c.sources[1]; }
        else j["exprs"] = c.sources;
    }
    return j.dump();
}

}  // namespace ckn
