#include "nep/continuation.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nep/eig.hpp"
#include "nep/errors.hpp"

namespace nep {

namespace {

using Vec = Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

double tolerance(double lambda)
{
    return 1e-10 * (1.0 + std::fabs(lambda));
}

Vec as_vec(const std::vector<double>& u)
{
    return Eigen::Map<const Vec>(u.data(), static_cast<Eigen::Index>(u.size()));
}

double max_abs(const Vec& v)
{
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

bool finite(const Vec& v)
{
    return v.allFinite();
}

double weighted_dot(double h, const Vec& a, double al, const Vec& b, double bl)
{
    return h * a.dot(b) + al * bl;
}

Tangent normalised(double h, Tangent t)
{
    double n = std::sqrt(weighted_dot(h, t.du, t.dlambda, t.du, t.dlambda));
    t.du /= n;
    t.dlambda /= n;
    return t;
}

Tangent difference(double h, const DiscreteState& b, const DiscreteState& a)
{
    Tangent t;
    t.du = as_vec(b.u) - as_vec(a.u);
    t.dlambda = b.lambda - a.lambda;
    return normalised(h, t);
}

double distance(double h, const DiscreteState& a, const DiscreteState& b)
{
    Vec d = as_vec(a.u) - as_vec(b.u);
    double dl = a.lambda - b.lambda;
    return std::sqrt(weighted_dot(h, d, dl, d, dl));
}

// [J, G_lambda; h t_u^T, t_lambda] as a sparse matrix.
Eigen::SparseMatrix<double> bordered(const FemProblem& fem, const Assembly& a, const Vec& row_u, double row_l)
{
    const Eigen::Index n = a.residual.size();
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(a.jacobian.nonZeros() + 2 * n + 1));
    for (Eigen::Index k = 0; k < a.jacobian.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(a.jacobian, k); it; ++it) {
            trip.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (a.d_lambda[i] != 0.0) {
            trip.emplace_back(i, n, a.d_lambda[i]);
        }
        trip.emplace_back(n, i, fem.h() * row_u[i]);
    }
    trip.emplace_back(n, n, row_l);
    Eigen::SparseMatrix<double> M(n + 1, n + 1);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

bool solve_sparse(const Eigen::SparseMatrix<double>& M, const Vec& rhs, Vec& x)
{
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success) {
        return false;
    }
    x = lu.solve(rhs);
    return lu.info() == Eigen::Success && finite(x);
}

}  // namespace

Assembly residual_and_jacobian(const FemProblem& fem, const DiscreteState& state)
{
    const int N = fem.N;
    if (N < 32) {
        throw Error(ErrorCode::domain, "the mesh needs at least 32 elements");
    }
    if (static_cast<int>(state.u.size()) != N + 1) {
        throw Error(ErrorCode::domain, "state size does not match the mesh");
    }
    const double h = fem.h();
    const double lambda = state.lambda;
    const bool dirichlet = fem.bc.is_dirichlet();
    const double g = 0.5 / std::sqrt(3.0);
    const double xi[2] = {0.5 - g, 0.5 + g};
    const double w = 0.5 * h;

    Assembly a;
    a.residual = Vec::Zero(N + 1);
    a.d_lambda = Vec::Zero(N + 1);
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(4 * N + 4));
    auto free_row = [&](int i) { return !dirichlet || (i != 0 && i != N); };

    for (int e = 0; e < N; ++e) {
        const int nodes[2] = {e, e + 1};
        double ke[2][2] = {{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}};
        double load[2] = {0.0, 0.0};
        for (double q : xi) {
            double phi[2] = {1.0 - q, q};
            double ug = state.u[e] * phi[0] + state.u[e + 1] * phi[1];
            double f = fem.model.f(ug);
            double fp = fem.model.f_prime(ug);
            for (int i = 0; i < 2; ++i) {
                load[i] += f * phi[i] * w;
                for (int j = 0; j < 2; ++j) {
                    ke[i][j] -= lambda * fp * phi[i] * phi[j] * w;
                }
            }
        }
        for (int i = 0; i < 2; ++i) {
            int r = nodes[i];
            if (!free_row(r)) {
                continue;
            }
            a.residual[r] += (state.u[nodes[0]] - state.u[nodes[1]]) * (i == 0 ? 1.0 : -1.0) / h;
            a.residual[r] -= lambda * load[i];
            a.d_lambda[r] -= load[i];
            for (int j = 0; j < 2; ++j) {
                trip.emplace_back(r, nodes[j], ke[i][j]);
            }
        }
    }
    if (dirichlet) {
        a.residual[0] = state.u[0];
        a.residual[N] = state.u[N];
        trip.emplace_back(0, 0, 1.0);
        trip.emplace_back(N, N, 1.0);
    } else {
        const double alpha = fem.bc.alpha;
        a.residual[0] += alpha * state.u[0];
        a.residual[N] += alpha * state.u[N];
        trip.emplace_back(0, 0, alpha);
        trip.emplace_back(N, N, alpha);
    }
    a.jacobian.resize(N + 1, N + 1);
    a.jacobian.setFromTriplets(trip.begin(), trip.end());
    return a;
}

double residual_norm(const FemProblem& fem, const DiscreteState& state)
{
    return max_abs(residual_and_jacobian(fem, state).residual);
}

NewtonReport newton_fixed_lambda(const FemProblem& fem, DiscreteState& state, int max_iter)
{
    NewtonReport rep;
    for (int it = 0;; ++it) {
        Assembly a = residual_and_jacobian(fem, state);
        rep.residual = max_abs(a.residual);
        if (!std::isfinite(rep.residual)) {
            return rep;
        }
        if (rep.residual <= tolerance(state.lambda)) {
            rep.converged = true;
            return rep;
        }
        if (it == max_iter) {
            return rep;
        }
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(a.jacobian);
        if (lu.info() != Eigen::Success) {
            return rep;
        }
        Vec du = lu.solve(-a.residual);
        if (!finite(du)) {
            return rep;
        }
        for (int i = 0; i <= fem.N; ++i) {
            state.u[i] += du[i];
        }
        rep.iterations = it + 1;
        if (max_abs(du) <= 1e-14 * (1.0 + max_abs(as_vec(state.u)))) {
            rep.residual = residual_norm(fem, state);
            rep.converged = std::isfinite(rep.residual) && rep.residual <= 1e3 * tolerance(state.lambda);
            return rep;
        }
    }
}

NewtonReport newton_bordered(const FemProblem& fem, DiscreteState& state, const DiscreteState& anchor,
                             const Tangent& t, double ds, int max_iter)
{
    NewtonReport rep;
    const double h = fem.h();
    const Vec u0 = as_vec(anchor.u);
    for (int it = 0;; ++it) {
        Assembly a = residual_and_jacobian(fem, state);
        Vec du = as_vec(state.u) - u0;
        double constraint = weighted_dot(h, t.du, t.dlambda, du, state.lambda - anchor.lambda) - ds;
        rep.residual = max_abs(a.residual);
        if (!std::isfinite(rep.residual)) {
            return rep;
        }
        if (rep.residual <= tolerance(state.lambda) && std::fabs(constraint) <= 1e-10 * (1.0 + std::fabs(ds))) {
            rep.converged = true;
            return rep;
        }
        if (it == max_iter) {
            return rep;
        }
        Eigen::SparseMatrix<double> M = bordered(fem, a, t.du, t.dlambda);
        Vec rhs(fem.N + 2);
        rhs.head(fem.N + 1) = -a.residual;
        rhs[fem.N + 1] = -constraint;
        Vec step;
        if (!solve_sparse(M, rhs, step)) {
            return rep;
        }
        for (int i = 0; i <= fem.N; ++i) {
            state.u[i] += step[i];
        }
        state.lambda += step[fem.N + 1];
        rep.iterations = it + 1;
        double scale = 1.0 + max_abs(as_vec(state.u)) + std::fabs(state.lambda);
        if (max_abs(step) <= 1e-14 * scale) {
            rep.residual = residual_norm(fem, state);
            rep.converged = std::isfinite(rep.residual) && rep.residual <= 1e3 * tolerance(state.lambda);
            return rep;
        }
    }
}

Tangent jacobian_tangent(const FemProblem& fem, const DiscreteState& state, const Tangent* orient)
{
    Assembly a = residual_and_jacobian(fem, state);
    Vec row_u = Vec::Zero(fem.N + 1);
    double row_l = 1.0;
    if (orient != nullptr) {
        row_u = orient->du;
        row_l = orient->dlambda;
    }
    Eigen::SparseMatrix<double> M = bordered(fem, a, row_u, row_l);
    Vec rhs = Vec::Zero(fem.N + 2);
    rhs[fem.N + 1] = 1.0;
    Vec z;
    if (!solve_sparse(M, rhs, z)) {
        throw Error(ErrorCode::step_rejected, "singular bordered system while computing the tangent");
    }
    Tangent t;
    t.du = z.head(fem.N + 1);
    t.dlambda = z[fem.N + 1];
    t = normalised(fem.h(), t);
    if (orient != nullptr && weighted_dot(fem.h(), t.du, t.dlambda, orient->du, orient->dlambda) < 0.0) {
        t.du = -t.du;
        t.dlambda = -t.dlambda;
    }
    return t;
}

DiscreteState trivial_state(const FemProblem& fem)
{
    DiscreteState s;
    s.u.assign(fem.N + 1, 0.0);
    return s;
}

double lowest_linearized(const FemProblem& fem, const DiscreteState& state)
{
    try {
        ProblemSpec spec(fem.length, fem.bc, std::max(state.lambda, 1e-300), Potential(fem.model, Convention::from_zero));
        return lowest_eigenvalue(spec, profile_from_state(fem, state), std::max(64, fem.N));
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

int mu1_sign(const FemProblem& fem, const DiscreteState& state)
{
    double mu = lowest_linearized(fem, state);
    return mu > 0.0 ? 1 : (mu < 0.0 ? -1 : 0);
}

namespace {

BranchPoint make_point(const DiscreteState& s, int iterations)
{
    BranchPoint p;
    p.state = s;
    p.u_max = *std::max_element(s.u.begin(), s.u.end());
    p.newton_iterations = iterations;
    return p;
}

// Corrected point at arclength sigma along the chord direction d from a.
bool point_along(const FemProblem& fem, const DiscreteState& a, const Tangent& d, double sigma, DiscreteState& out)
{
    out = a;
    for (int i = 0; i <= fem.N; ++i) {
        out.u[i] += sigma * d.du[i];
    }
    out.lambda += sigma * d.dlambda;
    NewtonReport r = newton_bordered(fem, out, a, d, sigma);
    out.s = a.s + sigma;
    return r.converged;
}

// Locates the fold between a and b by bisection on the sign of the
// lambda-component of the Jacobian tangent.
bool refine_fold(const FemProblem& fem, const DiscreteState& a, const DiscreteState& b, DiscreteState& fold)
{
    Tangent d = difference(fem.h(), b, a);
    double len = distance(fem.h(), a, b);
    double ta = jacobian_tangent(fem, a, &d).dlambda;
    double tb = jacobian_tangent(fem, b, &d).dlambda;
    if ((ta > 0.0) == (tb > 0.0)) {
        return false;
    }
    double lo = 0.0;
    double hi = len;
    DiscreteState mid;
    for (int it = 0; it < 80 && hi - lo > 1e-13 * (1.0 + len); ++it) {
        double sigma = 0.5 * (lo + hi);
        if (!point_along(fem, a, d, sigma, mid)) {
            return false;
        }
        double tm = jacobian_tangent(fem, mid, &d).dlambda;
        if ((tm > 0.0) == (ta > 0.0)) {
            lo = sigma;
        } else {
            hi = sigma;
        }
    }
    return point_along(fem, a, d, 0.5 * (lo + hi), fold);
}

}  // namespace

Branch trace_branch(const FemProblem& fem, const DiscreteState& start, const ContinuationOptions& options)
{
    const double h = fem.h();
    Branch br;
    DiscreteState z = start;
    if (residual_norm(fem, z) > 1e3 * tolerance(z.lambda)) {
        throw Error(ErrorCode::seed_rejected, "start state does not satisfy the residual tolerance");
    }
    br.points.push_back(make_point(z, 0));
    Tangent t = jacobian_tangent(fem, z);
    if ((t.dlambda < 0.0) != (options.direction < 0)) {
        t.du = -t.du;
        t.dlambda = -t.dlambda;
    }
    double ds = options.ds;
    int accepted = 0;
    br.stop_reason = "step budget";
    while (accepted < options.steps) {
        DiscreteState next = z;
        for (int i = 0; i <= fem.N; ++i) {
            next.u[i] += ds * t.du[i];
        }
        next.lambda += ds * t.dlambda;
        NewtonReport rep = newton_bordered(fem, next, z, t, ds);
        if (!rep.converged || distance(h, next, z) > 3.0 * ds) {
            ds *= 0.5;
            if (ds < options.ds_min) {
                br.stalled = true;
                br.stop_reason = "stalled";
                break;
            }
            continue;
        }
        next.s = z.s + distance(h, next, z);
        Tangent secant = difference(h, next, z);
        ++accepted;

        if ((secant.dlambda > 0.0) != (t.dlambda > 0.0) && br.points.size() >= 1) {
            // Fold somewhere between the previous point and `next`.
            const DiscreteState& m = z;
            const DiscreteState& a = br.points.size() >= 2 ? br.points[br.points.size() - 2].state : z;
            DiscreteState fold;
            bool placed = false;
            if (options.refine_turning) {
                if (br.points.size() >= 2 && refine_fold(fem, a, m, fold)) {
                    br.points.insert(br.points.end() - 1, make_point(fold, 0));
                    br.points[br.points.size() - 2].turning = true;
                    placed = true;
                } else if (refine_fold(fem, m, next, fold)) {
                    br.points.push_back(make_point(fold, 0));
                    br.points.back().turning = true;
                    placed = true;
                }
            }
            if (!placed) {
                br.points.back().turning = true;
            }
        }
        br.points.push_back(make_point(next, rep.iterations));
        z = next;
        t = secant;
        if (rep.iterations <= 4) {
            ds = std::min(1.3 * ds, options.ds_max);
        }
        if (z.lambda <= 0.0) {
            br.stop_reason = "lambda <= 0";
            break;
        }
        if (max_abs(as_vec(z.u)) > options.u_limit) {
            br.stop_reason = "|u| limit";
            break;
        }
        if (z.lambda > options.lambda_max) {
            br.stop_reason = "lambda limit";
            break;
        }
    }
    for (std::size_t k = 0; k < br.points.size(); ++k) {
        if (br.points[k].turning) {
            br.turning_points.push_back(k);
        }
        if (options.stability_every > 0 && k % static_cast<std::size_t>(options.stability_every) == 0) {
            double mu = lowest_linearized(fem, br.points[k].state);
            br.points[k].mu1 = mu;
            br.points[k].mu1_sign = mu > 0.0 ? 1 : (mu < 0.0 ? -1 : 0);
        }
    }
    return br;
}

DiscreteState seed_from_profile(const FemProblem& fem, const SolutionProfile& profile, int* iterations)
{
    DiscreteState s;
    s.u.resize(fem.N + 1);
    s.lambda = profile.lambda;
    const double x0 = profile.x.front();
    const double scale = profile.length() / fem.length;
    for (int i = 0; i <= fem.N; ++i) {
        s.u[i] = interpolate(profile.x, profile.u, x0 + scale * fem.h() * i);
    }
    NewtonReport rep = newton_fixed_lambda(fem, s, 12);
    if (iterations != nullptr) {
        *iterations = rep.iterations;
    }
    if (!rep.converged) {
        std::ostringstream os;
        os << "Newton polish of the seed did not converge (residual " << rep.residual << ")";
        throw Error(ErrorCode::seed_rejected, os.str());
    }
    return s;
}

std::vector<DiscreteState> slice_branch(const FemProblem& fem, const Branch& branch, double lambda)
{
    std::vector<DiscreteState> out;
    const auto& P = branch.points;
    for (std::size_t k = 0; k + 1 < P.size(); ++k) {
        double a = P[k].state.lambda - lambda;
        double b = P[k + 1].state.lambda - lambda;
        if (a * b > 0.0 || (a == 0.0 && b == 0.0)) {
            continue;
        }
        double theta = a == b ? 0.0 : a / (a - b);
        DiscreteState s;
        s.lambda = lambda;
        s.s = P[k].state.s + theta * (P[k + 1].state.s - P[k].state.s);
        s.u.resize(fem.N + 1);
        for (int i = 0; i <= fem.N; ++i) {
            s.u[i] = (1.0 - theta) * P[k].state.u[i] + theta * P[k + 1].state.u[i];
        }
        if (newton_fixed_lambda(fem, s, 20).converged) {
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<DiscreteState> distinct_solutions(const std::vector<DiscreteState>& states, bool add_reflections)
{
    std::vector<DiscreteState> out;
    auto add = [&](const DiscreteState& s) {
        for (const auto& q : out) {
            if (q.u.size() != s.u.size()) {
                continue;
            }
            double d = 0.0;
            for (std::size_t i = 0; i < s.u.size(); ++i) {
                d = std::max(d, std::fabs(q.u[i] - s.u[i]));
            }
            if (d < 1e-6) {
                return;
            }
        }
        out.push_back(s);
    };
    for (const auto& s : states) {
        add(s);
        if (add_reflections) {
            DiscreteState r = s;
            std::reverse(r.u.begin(), r.u.end());
            add(r);
        }
    }
    return out;
}

SolutionProfile profile_from_state(const FemProblem& fem, const DiscreteState& state)
{
    const int N = fem.N;
    const double h = fem.h();
    SolutionProfile p;
    p.x.resize(N + 1);
    p.u = state.u;
    p.v.resize(N + 1);
    p.lambda = state.lambda;
    p.bc = fem.bc;
    p.model_name = fem.model.name;
    double r = state.lambda > 0.0 ? 1.0 / std::sqrt(state.lambda) : 0.0;
    for (int i = 0; i <= N; ++i) {
        p.x[i] = h * i;
        double d;
        if (i == 0) {
            d = (-3.0 * state.u[0] + 4.0 * state.u[1] - state.u[2]) / (2.0 * h);
        } else if (i == N) {
            d = (3.0 * state.u[N] - 4.0 * state.u[N - 1] + state.u[N - 2]) / (2.0 * h);
        } else {
            d = (state.u[i + 1] - state.u[i - 1]) / (2.0 * h);
        }
        p.v[i] = d * r;
    }
    return p;
}

}  // namespace nep
