#include "nep/phase.hpp"

#include <cmath>
#include <sstream>

#include "nep/errors.hpp"
#include "nep/quadrature.hpp"

namespace nep {

double curve_height(const Potential& pot, double C, double v)
{
    double s = C - 0.5 * v * v;
    if (!(s > pot.range_lower()) || (pot.convention() == Convention::from_zero && s < 0.0)) {
        std::ostringstream os;
        os << "energy C=" << C << " does not reach v=" << v;
        throw Error(ErrorCode::domain, os.str());
    }
    return pot.inverse(s);
}

namespace {

// Tangency in u: f(u) + u / gamma*^2 = 0 (increasing in u).
double tangency_u(const Potential& pot, double gamma_star)
{
    const double k = 1.0 / (gamma_star * gamma_star);
    auto h = [&](double u) { return pot.f(u) + u * k; };
    double hi = 0.0;
    double lo = -1.0;
    double hlo = h(lo);
    while (hlo >= 0.0) {
        hi = lo;
        lo *= 2.0;
        if (lo < -1e12) {
            throw Error(ErrorCode::tangency_not_found,
                        "no tangency between K_C and the boundary line (f does not satisfy the growth assumptions)");
        }
        hlo = h(lo);
    }
    return quad::find_root(h, lo, hi, hlo, h(hi), 0.0, 4e-16);
}

}  // namespace

Tangency tangency(const Potential& pot, double gamma_star)
{
    if (!(gamma_star < 0.0)) {
        throw Error(ErrorCode::domain, "tangency requires gamma* < 0");
    }
    Tangency t;
    t.u1 = tangency_u(pot, gamma_star);
    t.v1 = t.u1 / gamma_star;
    t.C_tilde = pot(t.u1) + 0.5 * t.v1 * t.v1;
    return t;
}

bool at_tangency(double C, double C_tilde)
{
    return std::fabs(C - C_tilde) <= 1e-10 * std::max(1.0, std::fabs(C_tilde));
}

PhaseGeometry intersections(const Potential& pot, double gamma_star, double C)
{
    if (gamma_star == 0.0 || !std::isfinite(gamma_star)) {
        throw Error(ErrorCode::domain, "gamma* must be finite and nonzero");
    }
    PhaseGeometry g;
    g.gamma_star = gamma_star;
    g.s0 = pot.s0();
    g.C = C;
    const double k = 1.0 / (gamma_star * gamma_star);
    // Intersections are the roots of the convex function G(u) = F(u) + u^2 k / 2 - C.
    auto G = [&](double u) { return pot(u) + 0.5 * u * u * k - C; };
    auto add = [&](double u) {
        double v = u / gamma_star;
        g.plus.push_back({v, u});
        g.minus.push_back({-v, u});
    };

    if (gamma_star > 0.0) {
        if (!(C > 0.0)) {
            return g;
        }
        double hi = pot.inverse(C);
        add(quad::find_root(G, 0.0, hi, -C, G(hi), 0.0, 4e-16));
        return g;
    }

    Tangency t = tangency(pot, gamma_star);
    g.C_tilde = t.C_tilde;
    if (at_tangency(C, t.C_tilde)) {
        g.tangent = true;
        add(t.u1);
        return g;
    }
    if (C < t.C_tilde) {
        return g;
    }
    // Left root: G > 0 once u^2 k / 2 >= C since F > 0.
    // Rounding in C can hide F(lo) when it underflows; widen until positive.
    double lo = -std::fabs(gamma_star) * std::sqrt(2.0 * C);
    double Glo = G(lo);
    for (double widen = 1e-12; Glo <= 0.0 && widen < 1.0; widen *= 10.0) {
        lo = -std::fabs(gamma_star) * std::sqrt(2.0 * C) * (1.0 + widen);
        Glo = G(lo);
    }
    double u1 = lo < t.u1 ? quad::find_root(G, lo, t.u1, Glo, G(t.u1), 0.0, 4e-16) : t.u1;
    double hi = pot.inverse(C);
    double u2 = quad::find_root(G, t.u1, hi, G(t.u1), G(hi), 0.0, 4e-16);
    add(u1);
    add(u2);
    return g;
}

PhaseGeometry dirichlet_geometry(const Potential& pot, double C)
{
    PhaseGeometry g;
    g.s0 = pot.s0();
    g.C = C;
    if (C > 0.0) {
        double v = std::sqrt(2.0 * C);
        g.plus.push_back({v, 0.0});
        g.minus.push_back({-v, 0.0});
    }
    return g;
}

std::vector<TrajectoryClass> classify(const PhaseGeometry& geom)
{
    std::vector<TrajectoryClass> out;
    const auto& P = geom.plus;
    const auto& M = geom.minus;
    if (P.empty()) {
        return out;
    }
    auto row = [&](SolutionType t, int a, int b, bool boundary = false) {
        TrajectoryClass c;
        c.type = t;
        c.start = P[a];
        c.end = M[b];
        c.boundary_case = boundary;
        c.label = "P" + std::to_string(a + 1) + "+P" + std::to_string(b + 1) + "-";
        out.push_back(c);
    };
    if (P.size() == 1) {
        row(SolutionType::s, 0, 0);
        return out;
    }
    // Two points: v1 > v2.  The sign of v2 decides the regime.
    double scale = std::max(1.0, std::fabs(geom.C));
    bool at_s0 = std::fabs(geom.C - geom.s0) <= 1e-12 * scale;
    if (geom.C < geom.s0 && !at_s0) {
        row(SolutionType::s, 0, 0);
        row(SolutionType::s, 1, 1);
        row(SolutionType::c, 0, 1);
        row(SolutionType::c, 1, 0);
    } else {
        row(SolutionType::s, 0, 0);
        row(SolutionType::i, 0, 1, at_s0);
        row(SolutionType::d, 1, 0, at_s0);
    }
    return out;
}

}  // namespace nep
