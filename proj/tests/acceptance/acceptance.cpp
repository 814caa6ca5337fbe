// One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nep/continuation.hpp"
#include "nep/eig.hpp"
#include "nep/errors.hpp"
#include "nep/greens.hpp"
#include "nep/shoot.hpp"
#include "nep/timemap.hpp"
#include "oracles.hpp"
#include "shape.hpp"

using namespace nep;

namespace tol {
constexpr double timemap_rel = 1e-8;
constexpr double timemap_seconds = 1.0;
constexpr double fold_abs = 1e-3;
constexpr double fold_seconds = 10.0;
constexpr double count_seconds = 5.0;
constexpr double limit_rel = 0.05;
constexpr double limit_energy = 1e6;
constexpr double l2_at_s0 = 1e-6;
constexpr double asymmetry = 1e-6;
constexpr double spectral_margin_factor = 10.0;
constexpr double drift = 1e-10;
constexpr double order = 4.0;
constexpr double order_band = 0.3;
constexpr double profile_sup = 1e-5;
constexpr double residual_factor = 10.0;
constexpr double steklov = 1e-6;
}  // namespace tol

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b)
{
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

const NonlinearModel& gelfand()
{
    static NonlinearModel m = builtin_model("gelfand");
    return m;
}

ProblemSpec robin(double alpha, double lambda)
{
    return ProblemSpec(1.0, BoundaryCondition::robin(alpha), lambda, gelfand());
}

Outcome dirichlet_time_map()
{
    auto t0 = Clock::now();
    Potential pot(gelfand(), Convention::from_zero);
    double worst = 0.0;
    for (double C : log_space(1e-3, 1e3, 50)) {
        // The closed form is the full length at lambda = 4.
        double exact = std::sqrt(2.0 / (C + 1.0)) * std::atanh(std::sqrt(C / (C + 1.0)));
        worst = std::max(worst, std::fabs(dirichlet_length(pot, 4.0, C) - exact) / exact);
    }
    double dt = seconds_since(t0);
    return {worst <= tol::timemap_rel && dt < tol::timemap_seconds,
            fmt("max rel err %.3g, %.3f s", worst, dt)};
}

Outcome dirichlet_fold()
{
    auto t0 = Clock::now();
    FemProblem fem;
    fem.bc = BoundaryCondition::dirichlet();
    fem.model = gelfand();
    fem.N = 400;
    ContinuationOptions o;
    o.steps = 60;
    o.stability_every = 0;
    Branch br = trace_branch(fem, trivial_state(fem), o);
    double dt = seconds_since(t0);
    if (br.turning_points.empty()) return {false, "no turning point"};
    double lam = br.points[br.turning_points.front()].state.lambda;
    double ref = oracle::gelfand_dirichlet_fold();
    return {std::fabs(lam - ref) <= tol::fold_abs && dt < tol::fold_seconds,
            fmt("lambda* %.8f vs %.8f", lam, ref) + fmt(", %.2f s", dt)};
}

Outcome solution_counts()
{
    std::string detail;
    bool ok = true;
    for (auto [alpha, lambda, expected] : {std::tuple{-1.1, 100.0, 5}, std::tuple{-1.0, 250.0, 3}}) {
        auto prob = robin(alpha, lambda);
        auto t0 = Clock::now();
        auto n = count_solutions(prob);
        double t_count = seconds_since(t0);
        t0 = Clock::now();
        auto r = shoot(prob);
        double t_shoot = seconds_since(t0);
        std::map<SolutionType, int> a, b;
        for (const auto& root : n.roots) ++a[root.trajectory.type];
        for (const auto& p : r.profiles) ++b[p.type];
        bool here = n.total() == expected && static_cast<int>(r.profiles.size()) == expected && a == b &&
                    t_count < tol::count_seconds && t_shoot < tol::count_seconds;
        ok = ok && here;
        detail += fmt("lambda=%g: count %g", lambda, n.total()) + fmt(" shoot %g (%.2f s); ", r.profiles.size(),
                                                                        t_count + t_shoot);
    }
    return {ok, detail};
}

Outcome limit_laws()
{
    auto prob = robin(-1.0, 1.0);
    const Potential& pot = prob.pot;
    double gs = prob.gamma_star();
    double L1 = symmetric_length(pot, 1.0, gs, tol::limit_energy, 1).length;
    double L12 = asymmetric_monotone_length(pot, 1.0, gs, tol::limit_energy).length;
    double s0 = pot.s0();
    auto l2s0 = symmetric_length(pot, 1.0, gs, s0, 2);
    double Ct = tangency(pot, gs).C_tilde;
    bool decreasing = true;
    double prev = INFINITY;
    for (int k = 1; k <= 100; ++k) {
        double C = Ct + (s0 - Ct) * k / 101.0;
        auto s = symmetric_length(pot, 1.0, gs, C, 2);
        if (!s.valid || !(s.length < prev)) decreasing = false;
        prev = s.length;
    }
    bool ok = std::fabs(L1 - 2.0) <= tol::limit_rel * 2.0 && std::fabs(L12 - 1.0) <= tol::limit_rel &&
              l2s0.valid && std::fabs(l2s0.length) <= tol::l2_at_s0 && decreasing;
    return {ok, fmt("L1=%.4f L12=%.4f", L1, L12) + fmt(" L2(s0)=%.2g decreasing=%g", l2s0.length, decreasing)};
}

Outcome shape_laws()
{
    int checked = 0;
    bool ok = true;
    for (auto [alpha, lambda] : {std::pair{0.5, 0.3}, std::pair{1.0, 0.5}, std::pair{2.0, 0.6}, std::pair{1.0, 0.1}}) {
        for (const auto& p : shoot(robin(alpha, lambda)).profiles) {
            ++checked;
            ok = ok && shape::positive(p) && shape::asymmetry(p) <= tol::asymmetry;
        }
    }
    for (auto [alpha, lambda] : {std::pair{-1.1, 100.0}, std::pair{-1.0, 250.0}, std::pair{-0.8, 60.0},
                                 std::pair{-1.5, 30.0}}) {
        auto r = shoot(robin(alpha, lambda));
        for (const auto& p : r.profiles) {
            ++checked;
            ok = ok && shape::negative_alpha_pattern(p) != shape::Pattern::none;
        }
        for (std::size_t i = 0; i < r.profiles.size(); ++i)
            for (std::size_t j = i + 1; j < r.profiles.size(); ++j)
                ok = ok && shape::intersect(r.profiles[i], r.profiles[j]);
    }
    return {ok && checked > 0, fmt("%g solutions checked", checked)};
}

Outcome spectral_ordering()
{
    bool ok = true;
    double worst = INFINITY;
    auto margin = [&](double gap, double err) {
        double m = gap / (tol::spectral_margin_factor * std::max(err, 1e-300));
        worst = std::min(worst, m);
        return gap > tol::spectral_margin_factor * err;
    };
    for (auto [alpha, lambda] : {std::pair{-1.1, 100.0}, std::pair{-1.0, 250.0}}) {
        auto prob = robin(alpha, lambda);
        for (const auto& p : shoot(prob).profiles) {
            auto s = linearized_spectrum(prob, p, 1);
            ok = ok && s.mu[0] < 0.0 && margin(-s.mu[0], s.error[0]);
        }
    }
    for (auto [alpha, lambda] : {std::pair{1.0, 0.5}, std::pair{2.0, 0.6}}) {
        auto prob = robin(alpha, lambda);
        auto r = shoot(prob);
        if (r.profiles.size() != 2) return {false, "expected two positive-alpha solutions"};
        auto& lo = r.profiles[0].u_max() < r.profiles[1].u_max() ? r.profiles[0] : r.profiles[1];
        auto& hi = &lo == &r.profiles[0] ? r.profiles[1] : r.profiles[0];
        auto smin = linearized_spectrum(prob, lo, 1);
        auto smax = linearized_spectrum(prob, hi, 1);
        ok = ok && margin(smin.mu[0] - lambda, smin.error[0]) && margin(lambda - smax.mu[0], smax.error[0]);
    }
    return {ok, fmt("smallest gap / (10 x error) = %.3g", worst)};
}

Outcome energy_and_order()
{
    Potential pot(gelfand(), Convention::from_minus_infinity);
    double drift = energy_drift(pot, integrate_ivp(pot, 10.0, 0.2, 1.0, 1.0, 1024));
    double e1 = energy_drift(pot, integrate_ivp(pot, 10.0, 0.2, 1.0, 1.0, 64));
    double e2 = energy_drift(pot, integrate_ivp(pot, 10.0, 0.2, 1.0, 1.0, 128));
    double order = std::log2(e1 / e2);
    bool ok = drift <= tol::drift && std::fabs(order - tol::order) <= tol::order_band;
    return {ok, fmt("drift %.3g, order %.3f", drift, order)};
}

Outcome cross_oracle()
{
    std::mt19937 rng(20261019);
    std::uniform_real_distribution<double> pick_alpha(-1.5, -0.7);
    std::uniform_real_distribution<double> pick_pos(0.5, 2.0);
    std::uniform_real_distribution<double> pick_log_lambda(std::log(10.0), std::log(300.0));
    std::uniform_real_distribution<double> pick_frac(0.1, 0.95);
    const int n = 2048;
    const double h = 1.0 / n;
    int cases = 0, attempts = 0;
    double worst_sup = 0.0, worst_res = 0.0;
    while (cases < 10 && attempts < 200) {
        ++attempts;
        ProblemSpec prob = robin(1.0, 1.0);
        // Classes in rotation so that s, i, d and c all appear.
        const SolutionType want[] = {SolutionType::s, SolutionType::i, SolutionType::c, SolutionType::d,
                                     SolutionType::s};
        SolutionType target = want[cases % 5];
        if (cases % 5 == 4) {
            double a = pick_pos(rng);
            // Below the fold of the positive-alpha branch there are two solutions.
            prob = robin(a, pick_frac(rng) * 0.6);
        } else {
            prob = robin(pick_alpha(rng), std::exp(pick_log_lambda(rng)));
        }
        auto counted = count_solutions(prob);
        if (counted.total() == 0) continue;
        std::vector<const SolutionRoot*> of_type;
        for (const auto& r : counted.roots)
            if (r.trajectory.type == target) of_type.push_back(&r);
        if (of_type.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick_root(0, of_type.size() - 1);
        const auto& root = *of_type[pick_root(rng)];
        if (root.tangent || root.trajectory.boundary_case) continue;
        SolutionProfile rec;
        try {
            rec = reconstruct_from_energy(prob, root.C, root.trajectory, n);
        } catch (const Error&) {
            continue;
        }
        // Admissible: the profile stays inside the default shooting window.
        ShootOptions window;
        auto [lo, hi] = std::minmax_element(rec.u.begin(), rec.u.end());
        if (*lo < window.s_min || *hi > window.s_max) continue;
        auto shot = shoot(prob, window);
        double best = INFINITY;
        const SolutionProfile* match = nullptr;
        for (const auto& q : shot.profiles) {
            double d = sup_distance(rec, q);
            if (d < best) {
                best = d;
                match = &q;
            }
        }
        if (match == nullptr) return {false, "shooting found nothing where the time map found a root"};
        double res = std::max(integral_residual(prob, rec), integral_residual(prob, *match));
        if (std::getenv("NEP_ACCEPT_DEBUG"))
            std::fprintf(stderr, "alpha=%g lambda=%g C=%g type=%s label=%s sup=%g res=%g,%g\n", prob.bc.alpha,
                         prob.lambda, root.C, to_string(root.trajectory.type), root.trajectory.label.c_str(), best,
                         integral_residual(prob, rec), integral_residual(prob, *match));
        worst_sup = std::max(worst_sup, best);
        worst_res = std::max(worst_res, res);
        ++cases;
    }
    bool ok = cases == 10 && worst_sup <= tol::profile_sup && worst_res <= tol::residual_factor * h * h;
    return {ok, fmt("%g cases, sup %.3g", cases, worst_sup) + fmt(", residual %.3g (tol %.3g)", worst_res,
                                                                   tol::residual_factor * h * h)};
}

Outcome nonconvex_slice()
{
    FemProblem fem;
    fem.bc = BoundaryCondition::dirichlet();
    fem.model = builtin_model("nonconvex5");
    fem.N = 400;
    ContinuationOptions o;
    o.steps = 400;
    o.stability_every = 0;
    o.lambda_max = 1e4;
    o.ds_max = 0.2;
    Branch br = trace_branch(fem, trivial_state(fem), o);
    int best = 0;
    double at = NAN;
    for (int k = 0; k <= 80; ++k) {
        double lam = 1.2 + 0.4 * k / 80.0;
        int c = static_cast<int>(distinct_solutions(slice_branch(fem, br, lam), false).size());
        if (c == 4 && best != 4) at = lam;
        best = c == 4 ? 4 : std::max(best, std::min(c, 3));
    }
    return {best == 4, fmt("max crossings %g, first 4-crossing at lambda %.3f", best, at)};
}

Outcome steklov()
{
    auto s = steklov_reference(1.0);
    double e = std::max(std::fabs(s.mu1), std::fabs(s.mu2 - 2.0));
    return {e <= tol::steklov, fmt("mu1=%.3g mu2=%.12g", s.mu1, s.mu2)};
}

}  // namespace

int main()
{
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"dirichlet time map vs closed form", dirichlet_time_map},
        {"dirichlet fold location", dirichlet_fold},
        {"solution counts 5 and 3", solution_counts},
        {"time-map limit laws", limit_laws},
        {"shape laws", shape_laws},
        {"spectral ordering", spectral_ordering},
        {"IVP energy conservation and order", energy_and_order},
        {"reconstruction vs shooting", cross_oracle},
        {"non-convex four-crossing slice", nonconvex_slice},
        {"steklov reference", steklov},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
