#include "nep/timemap.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "nep/errors.hpp"
#include "nep/quadrature.hpp"

namespace nep {

namespace {

constexpr double kQuadTol = 1e-12;

bool near(double a, double b, double rel)
{
    return std::fabs(a - b) <= rel * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

TimeMapSample invalid(double C, TimeMapBranch b)
{
    TimeMapSample s;
    s.C = C;
    s.branch = b;
    return s;
}

// Integral of du / sqrt(2 (C - F(u))) between two heights on the same side of v = 0.
double u_form(const Potential& pot, double C, double ua, double ub)
{
    auto g = [&](double u) { return 1.0 / std::sqrt(2.0 * (C - pot(u))); };
    return std::fabs(quad::integrate(g, std::min(ua, ub), std::max(ua, ub), kQuadTol));
}

}  // namespace

const char* to_string(TimeMapBranch b)
{
    switch (b) {
    case TimeMapBranch::dirichlet: return "dirichlet";
    case TimeMapBranch::sym1: return "sym1";
    case TimeMapBranch::sym2: return "sym2";
    case TimeMapBranch::asym_monotone: return "asym_monotone";
    case TimeMapBranch::asym_nonmonotone: return "asym_nonmonotone";
    }
    return "sym1";
}

TimeMapBranch time_map_branch_from_string(std::string_view s)
{
    if (s == "dirichlet") return TimeMapBranch::dirichlet;
    if (s == "sym1") return TimeMapBranch::sym1;
    if (s == "sym2") return TimeMapBranch::sym2;
    if (s == "asym_monotone") return TimeMapBranch::asym_monotone;
    if (s == "asym_nonmonotone") return TimeMapBranch::asym_nonmonotone;
    throw Error(ErrorCode::parse, "unknown branch '" + std::string(s) + "'");
}

double path_length(const Potential& pot, double lambda, double C, PhasePoint from, PhasePoint to)
{
    if (from.v < to.v) {
        throw Error(ErrorCode::domain, "path must run towards decreasing v");
    }
    if (from.v == to.v) {
        return 0.0;
    }
    const double vs = std::sqrt(std::max(C, 0.0));
    double total = 0.0;

    double a = std::max(to.v, -vs);
    double b = std::min(from.v, vs);
    if (b > a) {
        auto g = [&](double v) { return 1.0 / pot.f(pot.inverse(C - 0.5 * v * v)); };
        total += quad::integrate(g, a, b, kQuadTol);
    }
    if (from.v > vs) {
        double u_end = to.v >= vs ? to.u : pot.inverse(0.5 * C);
        total += u_form(pot, C, from.u, u_end);
    }
    if (to.v < -vs) {
        double u_end = from.v <= -vs ? from.u : pot.inverse(0.5 * C);
        total += u_form(pot, C, to.u, u_end);
    }
    return total / std::sqrt(lambda);
}

double dirichlet_length(const Potential& pot, double lambda, double C)
{
    if (!(C > 0.0)) {
        return 0.0;
    }
    const double r = std::sqrt(2.0 * C);
    auto g = [&](double t) { return r / pot.f(pot.inverse(C * (1.0 - t * t))); };
    return 2.0 / std::sqrt(lambda) * quad::integrate(g, 0.0, 1.0, kQuadTol);
}

double uniqueness_indicator(const Potential& pot, double u)
{
    double f = pot.f(u);
    return f * f - 2.0 * pot.f_prime(u) * pot(u);
}

TimeMapSample symmetric_length(const Potential& pot, double lambda, double gamma_star, double C, int index)
{
    TimeMapBranch br = index == 2 ? TimeMapBranch::sym2 : TimeMapBranch::sym1;
    TimeMapSample s = invalid(C, br);
    if (index != 1 && index != 2) {
        return s;
    }
    PhaseGeometry g = intersections(pot, gamma_star, C);
    if (g.plus.empty()) {
        return s;
    }
    std::size_t i = 0;
    if (index == 2) {
        if (gamma_star > 0.0) {
            return s;
        }
        i = g.plus.size() - 1;
        bool at_s0 = near(C, pot.s0(), 1e-12);
        if (C > pot.s0() && !at_s0) {
            return s;
        }
        if (at_s0) {
            s.length = 0.0;
            s.valid = true;
            return s;
        }
    }
    PhasePoint p = g.plus[i];
    if (p.v < 0.0) {
        return s;
    }
    s.length = path_length(pot, lambda, C, p, g.minus[i]);
    s.valid = true;
    return s;
}

TimeMapSample asymmetric_length(const Potential& pot, double lambda, double gamma_star, double C)
{
    TimeMapSample s = invalid(C, C < pot.s0() ? TimeMapBranch::asym_nonmonotone : TimeMapBranch::asym_monotone);
    if (!(gamma_star < 0.0)) {
        return s;
    }
    PhaseGeometry g = intersections(pot, gamma_star, C);
    if (g.plus.empty()) {
        return s;
    }
    PhasePoint a = g.plus.front();
    PhasePoint b = g.minus.back();
    if (a.v < b.v) {
        return s;
    }
    s.length = path_length(pot, lambda, C, a, b);
    s.valid = true;
    return s;
}

TimeMapSample asymmetric_monotone_length(const Potential& pot, double lambda, double gamma_star, double C)
{
    TimeMapSample s = invalid(C, TimeMapBranch::asym_monotone);
    if (!(gamma_star < 0.0)) {
        return s;
    }
    bool at_s0 = near(C, pot.s0(), 1e-12);
    if (C < pot.s0() && !at_s0) {
        return s;
    }
    PhaseGeometry g = intersections(pot, gamma_star, C);
    if (g.plus.size() != 2) {
        return s;
    }
    PhasePoint p1 = g.plus[0];
    PhasePoint p2m = g.minus[1];
    PhasePoint p0{std::sqrt(2.0 * std::max(C - pot.s0(), 0.0)), 0.0};
    if (at_s0) {
        p2m = p0;
    }
    s.length = path_length(pot, lambda, C, p1, p2m);
    s.length_10 = path_length(pot, lambda, C, p1, p0);
    s.length_02 = at_s0 ? 0.0 : path_length(pot, lambda, C, p0, p2m);
    s.valid = true;
    return s;
}

TimeMapSample asymmetric_nonmonotone_length(const Potential& pot, double lambda, double gamma_star, double C)
{
    TimeMapSample s = invalid(C, TimeMapBranch::asym_nonmonotone);
    if (!(gamma_star < 0.0)) {
        return s;
    }
    TimeMapSample l1 = symmetric_length(pot, lambda, gamma_star, C, 1);
    TimeMapSample l2 = symmetric_length(pot, lambda, gamma_star, C, 2);
    if (!l1.valid || !l2.valid || C > pot.s0()) {
        return s;
    }
    s.length = 0.5 * (l1.length + l2.length);
    s.length_direct = asymmetric_length(pot, lambda, gamma_star, C).length;
    s.valid = true;
    return s;
}

double length_derivative(const Potential& pot, double lambda, double gamma_star, double C, TimeMapBranch branch)
{
    if (branch != TimeMapBranch::sym1 && branch != TimeMapBranch::sym2) {
        throw Error(ErrorCode::domain, "length_derivative supports sym1 and sym2");
    }
    PhaseGeometry g = intersections(pot, gamma_star, C);
    if (g.C_tilde && std::fabs(C - *g.C_tilde) <= 1e-8 * std::max(1.0, std::fabs(*g.C_tilde))) {
        throw Error(ErrorCode::derivative_singular, "dL/dC is unbounded at the tangency energy");
    }
    if (g.plus.empty()) {
        throw Error(ErrorCode::regime, "no trajectory at this energy");
    }
    std::size_t i = 0;
    if (branch == TimeMapBranch::sym2) {
        if (g.plus.size() != 2 || C >= pot.s0()) {
            throw Error(ErrorCode::regime, "sym2 exists only for C_tilde < C < s0");
        }
        i = 1;
    }
    double v = g.plus[i].v;
    double fu = pot.f(g.plus[i].u);
    double boundary = 2.0 / (fu * (v + gamma_star * fu));
    auto h = [&](double w) {
        double u = pot.inverse(C - 0.5 * w * w);
        double f = pot.f(u);
        return pot.f_prime(u) / (f * f * f);
    };
    double interior = 2.0 * quad::integrate(h, 0.0, v, kQuadTol);
    return (boundary - interior) / std::sqrt(lambda);
}

TimeMapSample length_sample(const Potential& pot, double lambda, double gamma_star, TimeMapBranch branch, double C)
{
    switch (branch) {
    case TimeMapBranch::dirichlet: {
        TimeMapSample s = invalid(C, branch);
        if (C > 0.0) {
            s.length = dirichlet_length(pot, lambda, C);
            s.valid = true;
        }
        return s;
    }
    case TimeMapBranch::sym1: return symmetric_length(pot, lambda, gamma_star, C, 1);
    case TimeMapBranch::sym2: return symmetric_length(pot, lambda, gamma_star, C, 2);
    case TimeMapBranch::asym_monotone: return asymmetric_monotone_length(pot, lambda, gamma_star, C);
    case TimeMapBranch::asym_nonmonotone: return asymmetric_nonmonotone_length(pot, lambda, gamma_star, C);
    }
    return invalid(C, branch);
}

namespace {

template <class Fn>
std::vector<TimeMapSample> sample_all(const std::vector<double>& Cs, TimeMapBranch branch, Fn fn, Execution exec)
{
    const long n = static_cast<long>(Cs.size());
    std::vector<TimeMapSample> out(n);
    auto one = [&](long k) {
        try {
            out[k] = fn(Cs[k]);
        } catch (const Error&) {
            out[k] = invalid(Cs[k], branch);
        }
    };
    if (exec == Execution::serial) {
        for (long k = 0; k < n; ++k) {
            one(k);
        }
        return out;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < n; ++k) {
        try {
            one(k);
        } catch (...) {
#pragma omp critical(nep_sweep_failure)
            failure = std::current_exception();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

}  // namespace

std::vector<TimeMapSample> sweep(const Potential& pot, double lambda, double gamma_star, TimeMapBranch branch,
                                 const std::vector<double>& Cs, Execution exec)
{
    return sample_all(
        Cs, branch, [&](double C) { return length_sample(pot, lambda, gamma_star, branch, C); }, exec);
}

std::vector<double> log_space(double lo, double hi, int n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    double a = std::log(lo);
    double b = std::log(hi);
    for (int k = 0; k < n; ++k) {
        out[k] = std::exp(a + (b - a) * k / (n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

int SolutionCount::count(SolutionType t) const
{
    return static_cast<int>(std::count_if(roots.begin(), roots.end(),
                                          [t](const SolutionRoot& r) { return r.trajectory.type == t; }));
}

namespace {

struct BranchRoot {
    double C;
    bool tangent;
};

// Roots of L(C) - L on a sampled branch: sign changes, exact hits, and
// near-zero local extrema (which may also hide a close pair of roots).
std::vector<BranchRoot> branch_roots(const std::vector<TimeMapSample>& s, double L,
                                     const std::function<double(double)>& length)
{
    std::vector<BranchRoot> roots;
    auto g = [&](double C) { return length(C) - L; };
    auto push = [&](double C, bool tangent) {
        for (const auto& r : roots) {
            if (near(r.C, C, 1e-10)) {
                return;
            }
        }
        roots.push_back({C, tangent});
    };
    const std::size_t n = s.size();
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) {
        d[k] = s[k].valid ? s[k].length - L : std::numeric_limits<double>::quiet_NaN();
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (std::isnan(d[k]) || std::isnan(d[k + 1])) {
            continue;
        }
        if (d[k] == 0.0) {
            push(s[k].C, false);
            continue;
        }
        if ((d[k] < 0.0) != (d[k + 1] < 0.0) && d[k + 1] != 0.0) {
            push(quad::find_root(g, s[k].C, s[k + 1].C, d[k], d[k + 1], 0.0, 1e-12), false);
        }
    }
    if (n > 0 && d[n - 1] == 0.0) {
        push(s[n - 1].C, false);
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (std::isnan(d[k - 1]) || std::isnan(d[k]) || std::isnan(d[k + 1])) {
            continue;
        }
        bool same = (d[k - 1] > 0.0) == (d[k] > 0.0) && (d[k] > 0.0) == (d[k + 1] > 0.0);
        if (!same || !(std::fabs(d[k]) < std::fabs(d[k - 1]) && std::fabs(d[k]) < std::fabs(d[k + 1]))) {
            continue;
        }
        double sign = d[k] > 0.0 ? -1.0 : 1.0;
        double a = s[k - 1].C;
        double b = s[k + 1].C;
        double c = quad::golden_max([&](double C) { return sign * g(C); }, a, b, 1e-13 * b);
        double gc = g(c);
        if ((gc > 0.0) != (d[k] > 0.0)) {
            push(quad::find_root(g, a, c, d[k - 1], gc, 0.0, 1e-12), false);
            push(quad::find_root(g, c, b, gc, d[k + 1], 0.0, 1e-12), false);
        } else if (std::fabs(gc) <= 1e-9 * std::max(1.0, L)) {
            push(c, true);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const BranchRoot& x, const BranchRoot& y) { return x.C < y.C; });
    return roots;
}

}  // namespace

SolutionCount count_solutions(const ProblemSpec& problem, const CountOptions& options)
{
    problem.validate();
    const Potential& pot = problem.pot;
    const double lambda = problem.lambda;
    const double L = problem.length;
    const int n = std::max(options.samples, 16);
    SolutionCount out;

    auto emit = [&](double C, TimeMapBranch br, bool tangent, const std::vector<TrajectoryClass>& rows) {
        for (const auto& t : rows) {
            out.roots.push_back({C, br, t, tangent});
        }
    };

    if (problem.bc.is_dirichlet() || problem.bc.alpha > 0.0) {
        bool dir = problem.bc.is_dirichlet();
        double gs = dir ? 0.0 : problem.gamma_star();
        TimeMapBranch br = dir ? TimeMapBranch::dirichlet : TimeMapBranch::sym1;
        auto Cs = log_space(1e-8, 1e8, n);
        auto samples = sweep(pot, lambda, gs, br, Cs, options.exec);
        auto length = [&](double C) { return length_sample(pot, lambda, gs, br, C).length; };
        for (const auto& r : branch_roots(samples, L, length)) {
            PhaseGeometry g = dir ? dirichlet_geometry(pot, r.C) : intersections(pot, gs, r.C);
            emit(r.C, br, r.tangent, classify(g));
        }
        return out;
    }

    const double gs = problem.gamma_star();
    const double s0 = pot.s0();
    const double Ct = tangency(pot, gs).C_tilde;
    const double dmin = 1e-9 * std::max(1.0, Ct);
    const double dmax = 1e7 * std::max(1.0, s0);

    auto shifted = [&](std::vector<double> d) {
        for (double& x : d) {
            x += Ct;
        }
        return d;
    };
    auto pick = [](const std::vector<TrajectoryClass>& rows, SolutionType t, const std::string& label = "") {
        std::vector<TrajectoryClass> r;
        for (const auto& row : rows) {
            if (row.type == t && (label.empty() || row.label == label)) {
                r.push_back(row);
            }
        }
        return r;
    };

    // Symmetric solutions through P1 and P2.
    auto C1 = shifted(log_space(dmin, dmax, n));
    auto s1 = sweep(pot, lambda, gs, TimeMapBranch::sym1, C1, options.exec);
    auto l1 = [&](double C) { return symmetric_length(pot, lambda, gs, C, 1).length; };
    auto r1 = branch_roots(s1, L, l1);
    for (const auto& r : r1) {
        emit(r.C, TimeMapBranch::sym1, r.tangent, pick(classify(intersections(pot, gs, r.C)), SolutionType::s, "P1+P1-"));
    }
    if (s0 - Ct > dmin) {
        auto C2 = shifted(log_space(dmin, s0 - Ct, n));
        C2.back() = s0;
        auto s2 = sweep(pot, lambda, gs, TimeMapBranch::sym2, C2, options.exec);
        auto l2 = [&](double C) { return symmetric_length(pot, lambda, gs, C, 2).length; };
        for (const auto& r : branch_roots(s2, L, l2)) {
            bool dup = std::any_of(r1.begin(), r1.end(), [&](const BranchRoot& q) {
                return near(q.C, r.C, 1e-9) && near(r.C, Ct, 1e-8);
            });
            if (dup || near(r.C, s0, 1e-12)) {
                continue;
            }
            emit(r.C, TimeMapBranch::sym2, r.tangent,
                 pick(classify(intersections(pot, gs, r.C)), SolutionType::s, "P2+P2-"));
        }
    }

    // Asymmetric solutions: P1+ -> P2- over the whole range, split at s0.
    auto C3 = shifted(log_space(dmin, dmax, n));
    if (s0 > Ct) {
        C3.push_back(s0);
        std::sort(C3.begin(), C3.end());
    }
    auto s3 = sample_all(
        C3, TimeMapBranch::asym_monotone, [&](double C) { return asymmetric_length(pot, lambda, gs, C); },
        options.exec);
    auto l3 = [&](double C) { return asymmetric_length(pot, lambda, gs, C).length; };
    for (const auto& r : branch_roots(s3, L, l3)) {
        if (at_tangency(r.C, Ct)) {
            continue;  // coincides with the symmetric tangent trajectory
        }
        auto rows = classify(intersections(pot, gs, r.C));
        bool below = r.C < s0 && !near(r.C, s0, 1e-12);
        TimeMapBranch br = below ? TimeMapBranch::asym_nonmonotone : TimeMapBranch::asym_monotone;
        for (SolutionType t : below ? std::vector<SolutionType>{SolutionType::c}
                                    : std::vector<SolutionType>{SolutionType::i, SolutionType::d}) {
            emit(r.C, br, r.tangent, pick(rows, t));
        }
    }
    std::stable_sort(out.roots.begin(), out.roots.end(),
                     [](const SolutionRoot& a, const SolutionRoot& b) { return a.C < b.C; });
    return out;
}

double lambda_of_C(const Potential& pot, const BoundaryCondition& bc, double L0, double C)
{
    if (!(C > 0.0) || !(L0 > 0.0)) {
        throw Error(ErrorCode::domain, "lambda_of_C needs C > 0 and L0 > 0");
    }
    if (bc.is_dirichlet()) {
        double r = dirichlet_length(pot, 1.0, C) / L0;
        return r * r;
    }
    if (!(bc.alpha > 0.0)) {
        throw Error(ErrorCode::domain, "lambda_of_C is defined for alpha > 0 or Dirichlet");
    }
    auto h = [&](double log_lambda) {
        double lambda = std::exp(log_lambda);
        return symmetric_length(pot, lambda, std::sqrt(lambda) / bc.alpha, C, 1).length - L0;
    };
    double a = 0.0;
    double ha = h(a);
    double b = a;
    double hb = ha;
    double step = ha > 0.0 ? 1.0 : -1.0;
    for (int it = 0; it < 200 && (ha > 0.0) == (hb > 0.0); ++it) {
        a = b;
        ha = hb;
        b += step;
        if (std::fabs(b) > 700.0) {
            break;
        }
        hb = h(b);
        if (!std::isfinite(hb)) {
            break;
        }
    }
    if ((ha > 0.0) == (hb > 0.0) || !std::isfinite(hb)) {
        std::ostringstream os;
        os << "no lambda bracket for C=" << C << ", L0=" << L0;
        throw Error(ErrorCode::out_of_range, os.str());
    }
    return std::exp(quad::find_root(h, std::min(a, b), std::max(a, b), a < b ? ha : hb, a < b ? hb : ha, 0.0, 1e-15));
}

}  // namespace nep
