#include "nep/shoot.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "nep/errors.hpp"
#include "nep/quadrature.hpp"

namespace nep {

namespace {

constexpr double kBlowup = 1e8;

struct State {
    double u;
    double v;
};

// Classical RK4; `visit(k, state)` sees every node.
template <class Visit>
State rk4(const Potential& pot, double lambda, State y, double L, int n, Visit&& visit)
{
    const double r = std::sqrt(lambda);
    const double h = L / n;
    auto rhs = [&](State s) { return State{r * s.v, -r * pot.f(s.u)}; };
    visit(0, y);
    for (int k = 0; k < n; ++k) {
        State k1 = rhs(y);
        State k2 = rhs({y.u + 0.5 * h * k1.u, y.v + 0.5 * h * k1.v});
        State k3 = rhs({y.u + 0.5 * h * k2.u, y.v + 0.5 * h * k2.v});
        State k4 = rhs({y.u + h * k3.u, y.v + h * k3.v});
        y.u += h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
        y.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        if (!(std::fabs(y.u) <= kBlowup) || !std::isfinite(y.v)) {
            double x = h * (k + 1);
            std::ostringstream os;
            os << "solution left the representable range at x=" << x;
            throw BlowupError(x, os.str());
        }
        visit(k + 1, y);
    }
    return y;
}

State initial_state(const ProblemSpec& problem, double s)
{
    if (problem.bc.is_dirichlet()) {
        return {0.0, s / std::sqrt(problem.lambda)};
    }
    return {s, problem.bc.alpha * s / std::sqrt(problem.lambda)};
}

double mismatch(const ProblemSpec& problem, State end)
{
    if (problem.bc.is_dirichlet()) {
        return end.u;
    }
    return std::sqrt(problem.lambda) * end.v + problem.bc.alpha * end.u;
}

}  // namespace

SolutionProfile integrate_ivp(const Potential& pot, double lambda, double u0, double v0, double L, int n)
{
    if (n < 16) {
        throw Error(ErrorCode::domain, "integrate_ivp needs n >= 16");
    }
    SolutionProfile p;
    p.x.resize(n + 1);
    p.u.resize(n + 1);
    p.v.resize(n + 1);
    p.lambda = lambda;
    p.model_name = pot.model().name;
    p.energy = 0.5 * v0 * v0 + pot(u0);
    const double h = L / n;
    rk4(pot, lambda, {u0, v0}, L, n, [&](int k, State s) {
        p.x[k] = h * k;
        p.u[k] = s.u;
        p.v[k] = s.v;
    });
    p.x[n] = L;
    return p;
}

double energy_drift(const Potential& pot, const SolutionProfile& p)
{
    double d = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        d = std::max(d, std::fabs(0.5 * p.v[k] * p.v[k] + pot(p.u[k]) - p.energy));
    }
    return d;
}

double shooting_residual(const ProblemSpec& problem, double s, int n)
{
    State end = rk4(problem.pot, problem.lambda, initial_state(problem, s), problem.length, n, [](int, State) {});
    return mismatch(problem, end);
}

SolutionType classify_profile(const SolutionProfile& p)
{
    double scale = 1.0;
    for (double u : p.u) {
        scale = std::max(scale, std::fabs(u));
    }
    double v0 = p.v.front();
    double vL = p.v.back();
    if (std::fabs(p.u.front() - p.u.back()) <= 1e-6 * scale && std::fabs(v0 + vL) <= 1e-6 * scale) {
        return SolutionType::s;
    }
    if (v0 > 0.0 && vL > 0.0) {
        return SolutionType::i;
    }
    if (v0 < 0.0 && vL < 0.0) {
        return SolutionType::d;
    }
    return SolutionType::c;
}

ShootResult shoot(const ProblemSpec& problem, const ShootOptions& options)
{
    problem.validate();
    if (options.n_scan < 2 || !(options.s_max > options.s_min)) {
        throw Error(ErrorCode::domain, "shooting scan needs n_scan >= 2 and s_max > s_min");
    }
    const int m = options.n_scan;
    const double ds = (options.s_max - options.s_min) / (m - 1);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto safe_residual = [&](double s) {
        try {
            return shooting_residual(problem, s, options.n);
        } catch (const BlowupError&) {
            return nan;
        }
    };

    std::vector<double> s(m);
    std::vector<double> r(m);
    for (int k = 0; k < m; ++k) {
        s[k] = options.s_min + ds * k;
    }
    if (options.exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int k = 0; k < m; ++k) {
            r[k] = safe_residual(s[k]);
        }
    } else {
        for (int k = 0; k < m; ++k) {
            r[k] = safe_residual(s[k]);
        }
    }

    ShootResult out;
    for (int k = 0; k < m; ++k) {
        if (std::isnan(r[k])) {
            out.blowups.push_back(s[k]);
        }
    }

    auto residual = [&](double x) { return shooting_residual(problem, x, options.n); };
    std::vector<double> roots;
    auto brackets = [&](const std::vector<double>& xs, const std::vector<double>& rs) {
        for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
            if (std::isnan(rs[k]) || std::isnan(rs[k + 1])) {
                continue;
            }
            if (rs[k] == 0.0) {
                roots.push_back(xs[k]);
            } else if ((rs[k] < 0.0) != (rs[k + 1] < 0.0) && rs[k + 1] != 0.0) {
                roots.push_back(quad::find_root(residual, xs[k], xs[k + 1], rs[k], rs[k + 1], 1e-15, 1e-15));
            }
        }
        if (!xs.empty() && rs.back() == 0.0) {
            roots.push_back(xs.back());
        }
    };
    brackets(s, r);

    // Second pass at quarter spacing around every root catches close pairs.
    std::vector<double> first = roots;
    for (double s0 : first) {
        std::vector<double> xs(9);
        std::vector<double> rs(9);
        for (int k = 0; k < 9; ++k) {
            xs[k] = s0 + ds * (k - 4) / 4.0;
            rs[k] = safe_residual(xs[k]);
        }
        brackets(xs, rs);
    }
    std::sort(roots.begin(), roots.end());

    for (double s0 : roots) {
        State y0 = initial_state(problem, s0);
        SolutionProfile p;
        try {
            p = integrate_ivp(problem.pot, problem.lambda, y0.u, y0.v, problem.length, options.n);
        } catch (const BlowupError&) {
            continue;
        }
        p.bc = problem.bc;
        p.type = classify_profile(p);
        bool dup = std::any_of(out.profiles.begin(), out.profiles.end(),
                               [&](const SolutionProfile& q) { return sup_distance(q, p) < 1e-6; });
        if (!dup) {
            out.profiles.push_back(std::move(p));
            out.parameters.push_back(s0);
        }
    }
    return out;
}

namespace {

enum class Piece { u_rising, v_middle, u_falling };

struct Segment {
    Piece kind;
    double p0;
    double p1;
    double length = 0.0;
};

}  // namespace

SolutionProfile reconstruct_from_energy(const ProblemSpec& problem, double C, const TrajectoryClass& cls, int n)
{
    if (n < 16) {
        throw Error(ErrorCode::domain, "reconstruct_from_energy needs n >= 16");
    }
    const PhasePoint a = cls.start;
    const PhasePoint b = cls.end;
    if (cls.type == SolutionType::none || a.v < b.v) {
        throw Error(ErrorCode::regime, "trajectory does not run towards decreasing v at this energy");
    }
    const Potential& pot = problem.pot;
    const double root_lambda = std::sqrt(problem.lambda);
    const double vs = std::sqrt(std::max(C, 0.0));

    auto speed = [&](double u) { return std::sqrt(2.0 * (C - pot(u))); };
    auto dxdp = [&](Piece k, double p) {
        switch (k) {
        case Piece::u_rising: return 1.0 / (root_lambda * speed(p));
        case Piece::u_falling: return 1.0 / (root_lambda * speed(-p));
        case Piece::v_middle: return 1.0 / (root_lambda * pot.f(pot.inverse(C - 0.5 * p * p)));
        }
        return 0.0;
    };
    auto state = [&](Piece k, double p) -> State {
        switch (k) {
        case Piece::u_rising: return {p, speed(p)};
        case Piece::u_falling: return {-p, -speed(-p)};
        case Piece::v_middle: return {pot.inverse(C - 0.5 * p * p), -p};
        }
        return {0.0, 0.0};
    };

    std::vector<Segment> segs;
    double us = 0.0;
    if (a.v > vs || b.v < -vs) {
        us = pot.inverse(0.5 * C);
    }
    if (a.v > vs) {
        double end = b.v >= vs ? b.u : us;
        if (end > a.u) {
            segs.push_back({Piece::u_rising, a.u, end});
        }
    }
    double hi_v = std::min(a.v, vs);
    double lo_v = std::max(b.v, -vs);
    if (hi_v > lo_v) {
        segs.push_back({Piece::v_middle, -hi_v, -lo_v});
    }
    if (b.v < -vs) {
        double start = a.v <= -vs ? a.u : us;
        if (start > b.u) {
            segs.push_back({Piece::u_falling, -start, -b.u});
        }
    }
    if (segs.empty()) {
        throw Error(ErrorCode::regime, "degenerate trajectory");
    }
    double total = 0.0;
    for (auto& sg : segs) {
        Piece k = sg.kind;
        sg.length = quad::integrate([&](double p) { return dxdp(k, p); }, sg.p0, sg.p1, 1e-13);
        total += sg.length;
    }

    SolutionProfile prof;
    prof.x.resize(n + 1);
    prof.u.resize(n + 1);
    prof.v.resize(n + 1);
    prof.energy = C;
    prof.type = cls.type;
    prof.boundary_case = cls.boundary_case;
    prof.lambda = problem.lambda;
    prof.bc = problem.bc;
    prof.model_name = pot.model().name;

    std::size_t seg = 0;
    double seg_x = 0.0;  // x at the start of the current segment
    double p_cur = segs[0].p0;
    double x_cur = 0.0;
    for (int j = 0; j <= n; ++j) {
        double xj = total * j / n;
        prof.x[j] = xj;
        if (j == n) {
            State e = state(segs.back().kind, segs.back().p1);
            prof.u[j] = e.u;
            prof.v[j] = e.v;
            break;
        }
        while (seg + 1 < segs.size() && xj > seg_x + segs[seg].length) {
            seg_x += segs[seg].length;
            ++seg;
            p_cur = segs[seg].p0;
            x_cur = seg_x;
        }
        const Segment& sg = segs[seg];
        auto g = [&](double p) { return dxdp(sg.kind, p); };
        double target = xj - x_cur;
        double lo = p_cur;
        double hi = sg.p1;
        double p = std::clamp(p_cur + target / g(p_cur), lo, hi);
        for (int it = 0; it < 60 && target > 0.0; ++it) {
            double err = quad::kronrod15(g, p_cur, p) - target;
            if (std::fabs(err) <= 1e-15 * total) {
                break;
            }
            if (err < 0.0) {
                lo = p;
            } else {
                hi = p;
            }
            double next = p - err / g(p);
            if (!(next > lo && next < hi)) {
                next = 0.5 * (lo + hi);
            }
            if (next == p) {
                break;
            }
            p = next;
        }
        State st = state(sg.kind, p);
        prof.u[j] = st.u;
        prof.v[j] = st.v;
        p_cur = p;
        x_cur = xj;
    }
    return prof;
}

SolutionProfile reconstruct_from_energy(const ProblemSpec& problem, double C, SolutionType type, int variant, int n)
{
    PhaseGeometry g = problem.bc.is_dirichlet() ? dirichlet_geometry(problem.pot, C)
                                                : intersections(problem.pot, problem.gamma_star(), C);
    int seen = 0;
    for (const auto& row : classify(g)) {
        if (row.type == type && seen++ == variant) {
            return reconstruct_from_energy(problem, C, row, n);
        }
    }
    std::ostringstream os;
    os << "no " << to_string(type) << "-trajectory #" << variant << " at C=" << C;
    throw Error(ErrorCode::regime, os.str());
}

}  // namespace nep
