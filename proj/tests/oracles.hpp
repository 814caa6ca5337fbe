#pragma once

// Test-side reference computations.  Deliberately independent of the library:
// plain bisection, composite Simpson, and closed forms for f(u) = e^u.

#include <cmath>
#include <functional>

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200)
{
    double fa = f(a);
    for (int i = 0; i < iters; ++i) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000)
{
    if (n % 2) ++n;
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

inline double golden_max(const std::function<double(double)>& f, double a, double b, double tol = 1e-12)
{
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol * (1.0 + std::fabs(a))) {
        if (fc > fd) {
            b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Dirichlet problem, f = e^u, F = e^u - 1: full interval length at energy C.
inline double gelfand_dirichlet_length(double C, double lambda)
{
    return 2.0 / std::sqrt(lambda) * std::sqrt(2.0 / (C + 1.0)) * std::atanh(std::sqrt(C / (C + 1.0)));
}

// Largest lambda with a Dirichlet solution on [0, L0]: maximise lambda(C) = (len(C;1)/L0)^2.
inline double gelfand_dirichlet_fold(double L0 = 1.0)
{
    auto lam = [&](double logC) {
        double l = gelfand_dirichlet_length(std::exp(logC), 1.0) / L0;
        return l * l;
    };
    double t = golden_max(lam, std::log(1e-2), std::log(1e3), 1e-14);
    return lam(t);
}

// F = e^u (from -inf).  x-length of a monotone arc of the orbit v^2/2 + e^u = C
// between heights ua and ub: sqrt(2/C)/sqrt(lambda) * |atanh w(ua) - atanh w(ub)|.
inline double gelfand_w(double C, double u)
{
    return std::sqrt(std::max(0.0, -std::expm1(u - std::log(C))));
}

// atanh w(u) = ln(1 + w) - (u - ln C) / 2, which stays accurate as w -> 1.
inline double gelfand_atanh_w(double C, double u)
{
    return std::log1p(gelfand_w(C, u)) - 0.5 * (u - std::log(C));
}

inline double gelfand_arc(double C, double lambda, double ua, double ub)
{
    return std::sqrt(2.0 / C) / std::sqrt(lambda) * std::fabs(gelfand_atanh_w(C, ua) - gelfand_atanh_w(C, ub));
}

// Boundary heights on u = gamma v: roots of 2C - (u/gamma)^2 = 2 e^u, u1 < u2.
struct Heights {
    int count = 0;
    double u1 = 0.0;
    double u2 = 0.0;
};

inline Heights gelfand_heights(double gamma, double C)
{
    auto h = [&](double u) { return 2.0 * C - (u / gamma) * (u / gamma) - 2.0 * std::exp(u); };
    // h is concave; its maximum is where -2u/gamma^2 = 2e^u.
    double top = bisect([&](double u) { return -u / (gamma * gamma) - std::exp(u); }, -1e3, 0.0);
    Heights r;
    if (h(top) <= 0.0) return r;
    double lo = top - 1.0;
    while (h(lo) > 0.0) lo = top + 2.0 * (lo - top);
    double hi = top + 1.0;
    while (h(hi) > 0.0) hi = top + 2.0 * (hi - top);
    r.count = 2;
    r.u1 = bisect(h, lo, top);
    r.u2 = bisect(h, top, hi);
    return r;
}

// Symmetric lengths through the apex u = ln C, and the monotone asymmetric one.
inline double gelfand_L1(double gamma, double lambda, double C)
{
    Heights r = gelfand_heights(gamma, C);
    return 2.0 * gelfand_arc(C, lambda, r.u1, std::log(C));
}

inline double gelfand_L2(double gamma, double lambda, double C)
{
    Heights r = gelfand_heights(gamma, C);
    return 2.0 * gelfand_arc(C, lambda, r.u2, std::log(C));
}

inline double gelfand_L12_monotone(double gamma, double lambda, double C)
{
    Heights r = gelfand_heights(gamma, C);
    return gelfand_arc(C, lambda, r.u1, r.u2);
}

// Tangency for f = e^u: v solves gamma e^{gamma v} + v = 0, v > 0.
inline double gelfand_tangency_v(double gamma)
{
    return bisect([&](double v) { return gamma * std::exp(gamma * v) + v; }, 0.0, 50.0);
}

// Classical RK4 for u' = sqrt(l) v, v' = -sqrt(l) e^u; returns (u(L), v(L)).
inline std::pair<double, double> rk4_gelfand(double lambda, double u, double v, double L, int n)
{
    double s = std::sqrt(lambda), h = L / n;
    auto fu = [&](double, double vv) { return s * vv; };
    auto fv = [&](double uu, double) { return -s * std::exp(uu); };
    for (int i = 0; i < n; ++i) {
        double k1u = fu(u, v), k1v = fv(u, v);
        double k2u = fu(u + 0.5 * h * k1u, v + 0.5 * h * k1v), k2v = fv(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
        double k3u = fu(u + 0.5 * h * k2u, v + 0.5 * h * k2v), k3v = fv(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
        double k4u = fu(u + h * k3u, v + h * k3v), k4v = fv(u + h * k3u, v + h * k3v);
        u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
    return {u, v};
}

}  // namespace oracle
