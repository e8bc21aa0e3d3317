#pragma once

#include <array>
#include <cmath>

namespace ckn {

inline constexpr int kMaxDim = 8;   // largest ambient dimension jets are taken in
inline constexpr int kMaxComp = 8;  // largest number of real field components

// First-order forward jet: value plus gradient along up to kMaxDim seed directions.
struct Dual1 {
    double v = 0.0;
    int n = 0;
    std::array<double, kMaxDim> g{};

    Dual1() = default;
    Dual1(double value, int dirs) : v(value), n(dirs) {}

    static Dual1 variable(double value, int index, int dirs) {
        Dual1 d(value, dirs);
        d.g[static_cast<std::size_t>(index)] = 1.0;
        return d;
    }
};

// Second-order forward jet: adds the Hessian, stored as a packed lower triangle.
struct Dual2 {
    double v = 0.0;
    int n = 0;
    std::array<double, kMaxDim> g{};
    std::array<double, kMaxDim*(kMaxDim + 1)/2> h{};

    Dual2() = default;
    Dual2(double value, int dirs) : v(value), n(dirs) {}

    static Dual2 variable(double value, int index, int dirs) {
        Dual2 d(value, dirs);
        d.g[static_cast<std::size_t>(index)] = 1.0;
        return d;
    }

    static constexpr int tri(int i, int j) { return i*(i + 1)/2 + j; }  // j <= i
    double hess(int i, int j) const { return i >= j ? h[static_cast<std::size_t>(tri(i, j))] : h[static_cast<std::size_t>(tri(j, i))]; }
};

inline double value_of(double x) { return x; }
inline double value_of(const Dual1& x) { return x.v; }
inline double value_of(const Dual2& x) { return x.v; }

// ---- Dual1 arithmetic ----

inline Dual1 operator+(const Dual1& a, const Dual1& b) {
    Dual1 r(a.v + b.v, a.n);
    for (int i = 0; i < r.n; ++i) r.g[i] = a.g[i] + b.g[i];
    return r;
}
inline Dual1 operator-(const Dual1& a, const Dual1& b) {
    Dual1 r(a.v - b.v, a.n);
    for (int i = 0; i < r.n; ++i) r.g[i] = a.g[i] - b.g[i];
    return r;
}
inline Dual1 operator-(const Dual1& a) {
    Dual1 r(-a.v, a.n);
    for (int i = 0; i < r.n; ++i) r.g[i] = -a.g[i];
    return r;
}
inline Dual1 operator*(const Dual1& a, const Dual1& b) {
    Dual1 r(a.v*b.v, a.n);
    for (int i = 0; i < r.n; ++i) r.g[i] = a.g[i]*b.v + a.v*b.g[i];
    return r;
}
inline Dual1 operator+(const Dual1& a, double c) { Dual1 r = a; r.v += c; return r; }
inline Dual1 operator+(double c, const Dual1& a) { return a + c; }
inline Dual1 operator-(const Dual1& a, double c) { return a + (-c); }
inline Dual1 operator-(double c, const Dual1& a) { return (-a) + c; }
inline Dual1 operator*(const Dual1& a, double c) {
    Dual1 r(a.v*c, a.n);
    for (int i = 0; i < r.n; ++i) r.g[i] = a.g[i]*c;
    return r;
}
inline Dual1 operator*(double c, const Dual1& a) { return a*c; }

// chain rule for f(u) given f(u.v) and f'(u.v)
inline Dual1 chain1(const Dual1& u, double f0, double f1) {
    Dual1 r(f0, u.n);
    for (int i = 0; i < r.n; ++i) r.g[i] = f1*u.g[i];
    return r;
}

inline Dual1 recip(const Dual1& u) { const double iv = 1.0/u.v; return chain1(u, iv, -iv*iv); }
inline Dual1 operator/(const Dual1& a, const Dual1& b) { return a*recip(b); }
inline Dual1 operator/(const Dual1& a, double c) { return a*(1.0/c); }
inline Dual1 operator/(double c, const Dual1& b) { return recip(b)*c; }

inline Dual1 exp(const Dual1& u)  { const double e = std::exp(u.v); return chain1(u, e, e); }
inline Dual1 log(const Dual1& u)  { return chain1(u, std::log(u.v), 1.0/u.v); }
inline Dual1 sin(const Dual1& u)  { return chain1(u, std::sin(u.v), std::cos(u.v)); }
inline Dual1 cos(const Dual1& u)  { return chain1(u, std::cos(u.v), -std::sin(u.v)); }
inline Dual1 sqrt(const Dual1& u) { const double s = std::sqrt(u.v); return chain1(u, s, 0.5/s); }
inline Dual1 pow(const Dual1& u, double c) {
    if (c == 0.0) return Dual1(1.0, u.n);
    const double p = std::pow(u.v, c);
    return chain1(u, p, c*std::pow(u.v, c - 1.0));
}

// ---- Dual2 arithmetic ----

namespace detail {
inline int d2len(int n) { return n*(n + 1)/2; }
}

inline Dual2 operator+(const Dual2& a, const Dual2& b) {
    Dual2 r(a.v + b.v, a.n);
    for (int i = 0; i < r.n; ++i) r.g[i] = a.g[i] + b.g[i];
    const int L = detail::d2len(r.n);
    for (int k = 0; k < L; ++k) r.h[k] = a.h[k] + b.h[k];
    return r;
}
inline Dual2 operator-(const Dual2& a, const Dual2& b) {
    Dual2 r(a.v - b.v, a.n);
    for (int i = 0; i < r.n; ++i) r.g[i] = a.g[i] - b.g[i];
    const int L = detail::d2len(r.n);
    for (int k = 0; k < L; ++k) r.h[k] = a.h[k] - b.h[k];
    return r;
}
inline Dual2 operator-(const Dual2& a) {
    Dual2 r(-a.v, a.n);
    for (int i = 0; i < r.n; ++i) r.g[i] = -a.g[i];
    const int L = detail::d2len(r.n);
    for (int k = 0; k < L; ++k) r.h[k] = -a.h[k];
    return r;
}
inline Dual2 operator*(const Dual2& a, const Dual2& b) {
    Dual2 r(a.v*b.v, a.n);
    for (int i = 0; i < r.n; ++i) r.g[i] = a.g[i]*b.v + a.v*b.g[i];
    for (int i = 0, k = 0; i < r.n; ++i)
        for (int j = 0; j <= i; ++j, ++k)
            r.h[k] = a.h[k]*b.v + a.v*b.h[k] + a.g[i]*b.g[j] + a.g[j]*b.g[i];
    return r;
}
inline Dual2 operator+(const Dual2& a, double c) { Dual2 r = a; r.v += c; return r; }
inline Dual2 operator+(double c, const Dual2& a) { return a + c; }
inline Dual2 operator-(const Dual2& a, double c) { return a + (-c); }
inline Dual2 operator-(double c, const Dual2& a) { return (-a) + c; }
inline Dual2 operator*(const Dual2& a, double c) {
    Dual2 r(a.v*c, a.n);
    for (int i = 0; i < r.n; ++i) r.g[i] = a.g[i]*c;
    const int L = detail::d2len(r.n);
    for (int k = 0; k < L; ++k) r.h[k] = a.h[k]*c;
    return r;
}
inline Dual2 operator*(double c, const Dual2& a) { return a*c; }

inline Dual2 chain2(const Dual2& u, double f0, double f1, double f2) {
    Dual2 r(f0, u.n);
    for (int i = 0; i < r.n; ++i) r.g[i] = f1*u.g[i];
    for (int i = 0, k = 0; i < r.n; ++i)
        for (int j = 0; j <= i; ++j, ++k)
            r.h[k] = f1*u.h[k] + f2*u.g[i]*u.g[j];
    return r;
}

inline Dual2 recip(const Dual2& u) {
    const double iv = 1.0/u.v;
    return chain2(u, iv, -iv*iv, 2.0*iv*iv*iv);
}
inline Dual2 operator/(const Dual2& a, const Dual2& b) { return a*recip(b); }
inline Dual2 operator/(const Dual2& a, double c) { return a*(1.0/c); }
inline Dual2 operator/(double c, const Dual2& b) { return recip(b)*c; }

inline Dual2 exp(const Dual2& u)  { const double e = std::exp(u.v); return chain2(u, e, e, e); }
inline Dual2 log(const Dual2& u)  { const double iv = 1.0/u.v; return chain2(u, std::log(u.v), iv, -iv*iv); }
inline Dual2 sin(const Dual2& u)  { const double s = std::sin(u.v), c = std::cos(u.v); return chain2(u, s, c, -s); }
inline Dual2 cos(const Dual2& u)  { const double s = std::sin(u.v), c = std::cos(u.v); return chain2(u, c, -s, -c); }
inline Dual2 sqrt(const Dual2& u) {
    const double s = std::sqrt(u.v);
    return chain2(u, s, 0.5/s, -0.25/(s*u.v));
}
inline Dual2 pow(const Dual2& u, double c) {
    if (c == 0.0) return Dual2(1.0, u.n);
    const double p = std::pow(u.v, c);
    return chain2(u, p, c*std::pow(u.v, c - 1.0), c*(c - 1.0)*std::pow(u.v, c - 2.0));
}

}  // namespace ckn
