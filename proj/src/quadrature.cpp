#include "ckn/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ckn {

namespace {
constexpr double kPi = std::numbers::pi;
}

Rule1D gauss_legendre(int k) {
    if (k < 1) throw SpecError("gauss_legendre needs k >= 1");
    Rule1D rule;
    rule.x.resize(static_cast<std::size_t>(k));
    rule.w.resize(static_cast<std::size_t>(k));
    const int half = (k + 1)/2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi*(i + 0.75)/(k + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence for P_k and P'_k
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= k; ++j) {
                const double p2 = ((2*j - 1)*x*p1 - (j - 1)*p0)/j;
                p0 = p1;
                p1 = p2;
            }
            dp = k*(x*p1 - p0)/(x*x - 1.0);
            const double dx = p1/dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.x[static_cast<std::size_t>(i)] = -x;
        rule.x[static_cast<std::size_t>(k - 1 - i)] = x;
        const double w = 2.0/((1.0 - x*x)*dp*dp);
        rule.w[static_cast<std::size_t>(i)] = w;
        rule.w[static_cast<std::size_t>(k - 1 - i)] = w;
    }
    return rule;
}

Rule1D gauss_chebyshev2(int k) {
    if (k < 1) throw SpecError("gauss_chebyshev2 needs k >= 1");
    Rule1D rule;
    rule.x.resize(static_cast<std::size_t>(k));
    rule.w.resize(static_cast<std::size_t>(k));
    for (int j = 1; j <= k; ++j) {
        const double th = kPi*j/(k + 1);
        const double s = std::sin(th);
        rule.x[static_cast<std::size_t>(k - j)] = std::cos(th);
        rule.w[static_cast<std::size_t>(k - j)] = kPi/(k + 1)*s*s;
    }
    return rule;
}

Rule1D radial_rule(int k, int n, double s) {
    const Rule1D gl = gauss_legendre(k);
    Rule1D rule;
    rule.x.resize(static_cast<std::size_t>(k));
    rule.w.resize(static_cast<std::size_t>(k));
    const double expo = n - 1 - s;
    for (int i = 0; i < k; ++i) {
        const double t = 0.5*(gl.x[static_cast<std::size_t>(i)] + 1.0);
        const double omt = 1.0 - t;
        const double r = t/omt;
        rule.x[static_cast<std::size_t>(i)] = r;
        rule.w[static_cast<std::size_t>(i)] =
            0.5*gl.w[static_cast<std::size_t>(i)]*std::pow(r, expo)/(omt*omt);
    }
    return rule;
}

double sphere_area(int d) {
    // |S^d| = 2 pi^{(d+1)/2} / Gamma((d+1)/2)
    return 2.0*std::pow(kPi, 0.5*(d + 1))/std::tgamma(0.5*(d + 1));
}

SphereRule::SphereRule(int d, int nodes_per_angle) : d_(d), per_angle_(nodes_per_angle) {
    if (d < 0) throw SpecError("sphere dimension must be >= 0");
    if (d > 0 && nodes_per_angle < 1) throw SpecError("sphere rule needs at least one node per angle");
    if (d == 0) {
        count_ = 2;
        return;
    }
    count_ = 1;
    for (int i = 1; i <= d_ - 1; ++i) {
        const int e = d_ - i;  // sin^e(theta_i) Jacobian
        Rule1D r;
        if (e % 2 == 1) {
            r = gauss_legendre(per_angle_);
            const int half = (e - 1)/2;
            for (std::size_t j = 0; j < r.x.size(); ++j)
                r.w[j] *= std::pow(1.0 - r.x[j]*r.x[j], half);
        } else {
            r = gauss_chebyshev2(per_angle_);
            const int half = (e - 2)/2;
            for (std::size_t j = 0; j < r.x.size(); ++j)
                r.w[j] *= std::pow(1.0 - r.x[j]*r.x[j], half);
        }
        polar_.push_back(std::move(r));
        count_ *= static_cast<std::size_t>(per_angle_);
    }
    count_ *= static_cast<std::size_t>(per_angle_);  // azimuth

    double total = 1.0;
    for (const auto& r : polar_) {
        std::vector<double> ws = r.w;
        total *= detail::pairwise_fold(ws.data(), ws.size(), 1);
    }
    norm_ = 1.0/total;  // azimuth weights 1/per_angle_ already sum to 1
}

void SphereRule::node(std::size_t idx, double* x, double& w) const {
    if (d_ == 0) {
        x[0] = idx == 0 ? 1.0 : -1.0;
        w = 0.5;
        return;
    }
    const auto A = static_cast<std::size_t>(per_angle_);
    w = norm_/per_angle_;
    const std::size_t jphi = idx % A;
    std::size_t rest = idx/A;
    double ts[kMaxDim];
    for (int i = d_ - 2; i >= 0; --i) {
        const std::size_t j = rest % A;
        rest /= A;
        ts[i] = polar_[static_cast<std::size_t>(i)].x[j];
        w *= polar_[static_cast<std::size_t>(i)].w[j];
    }
    // x_0 = cos t_1, x_i = sin t_1 ... sin t_i cos t_{i+1}, last pair carries the azimuth
    double sprod = 1.0;
    for (int i = 0; i <= d_ - 2; ++i) {
        x[i] = sprod*ts[i];
        sprod *= std::sqrt(1.0 - ts[i]*ts[i]);
    }
    const double phi = 2.0*kPi*static_cast<double>(jphi)/per_angle_;
    x[d_ - 1] = sprod*std::cos(phi);
    x[d_] = sprod*std::sin(phi);
}

QuadratureGrid build_sphere_grid(int sphere_dim, int nodes_per_angle) {
    SphereRule rule(sphere_dim, nodes_per_angle);
    QuadratureGrid grid;
    grid.kind = QuadratureGrid::Kind::SphereProduct;
    grid.dim = sphere_dim + 1;
    grid.radial_nodes = 0;
    grid.angular_nodes = nodes_per_angle;
    grid.nodes.reserve(rule.count());
    for (std::size_t i = 0; i < rule.count(); ++i) {
        Point p;
        p.coords.resize(static_cast<std::size_t>(sphere_dim + 1));
        double w;
        rule.node(i, p.coords.data(), w);
        grid.nodes.emplace_back(std::move(p), w);
    }
    return grid;
}

QuadratureGrid build_rn_grid(int n, int radial_nodes, int nodes_per_angle, double s) {
    if (s >= n) throw SpecError("weight exponent must satisfy s < n for integrability");
    const Rule1D rad = radial_rule(radial_nodes, n, s);
    const SphereRule sph(n - 1, nodes_per_angle);
    const double area = sphere_area(n - 1);
    QuadratureGrid grid;
    grid.kind = QuadratureGrid::Kind::EuclideanSphericalRadial;
    grid.dim = n;
    grid.radial_nodes = radial_nodes;
    grid.angular_nodes = nodes_per_angle;
    grid.nodes.reserve(static_cast<std::size_t>(radial_nodes)*sph.count());
    for (int ir = 0; ir < radial_nodes; ++ir)
        for (std::size_t is = 0; is < sph.count(); ++is) {
            double omega[kMaxDim];
            double ws;
            sph.node(is, omega, ws);
            Point p;
            p.coords.resize(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k)
                p.coords[static_cast<std::size_t>(k)] = rad.x[static_cast<std::size_t>(ir)]*omega[k];
            grid.nodes.emplace_back(std::move(p), rad.w[static_cast<std::size_t>(ir)]*ws*area);
        }
    return grid;
}

namespace detail {

std::string node_str(const double* x, int n) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < n; ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    return os.str();
}

}  // namespace detail

}  // namespace ckn
