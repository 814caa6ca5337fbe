#include "nep/eig.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nep/errors.hpp"

namespace nep {

namespace {

// Stiffness diagonal/off-diagonal plus lumped weighted mass on the full node set.
struct Discretisation {
    std::vector<double> x;
    Eigen::VectorXd diag;
    Eigen::VectorXd off;
    Eigen::VectorXd mass;
};

Discretisation assemble(const ProblemSpec& problem, const SolutionProfile& profile, int N)
{
    const double L = profile.length();
    const double x0 = profile.x.front();
    const double h = L / N;
    const auto& model = problem.model();
    Discretisation d;
    d.x.resize(N + 1);
    d.diag = Eigen::VectorXd::Zero(N + 1);
    d.off = Eigen::VectorXd::Constant(N, -1.0 / h);
    d.mass.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
        d.x[i] = x0 + h * i;
        double w = model.f_prime(interpolate(profile.x, profile.u, d.x[i]));
        if (!(w > 0.0)) {
            std::ostringstream os;
            os << "weight f'(u) = " << w << " is not positive at x = " << d.x[i];
            throw Error(ErrorCode::weight, os.str());
        }
        d.mass[i] = w * ((i == 0 || i == N) ? 0.5 * h : h);
        d.diag[i] = (i == 0 || i == N) ? 1.0 / h : 2.0 / h;
    }
    if (problem.bc.is_robin()) {
        d.diag[0] += problem.bc.alpha;
        d.diag[N] += problem.bc.alpha;
    }
    return d;
}

struct Solved {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;  // in the original (unscaled) variables
    int first = 0;            // index of the first free node
};

Solved solve(const ProblemSpec& problem, const Discretisation& d, bool vectors = true)
{
    const int n = static_cast<int>(d.diag.size());
    int lo = 0;
    int hi = n;
    if (problem.bc.is_dirichlet()) {
        lo = 1;
        hi = n - 1;
    }
    const int m = hi - lo;
    Eigen::VectorXd a(m);
    Eigen::VectorXd b(std::max(m - 1, 0));
    Eigen::VectorXd s(m);
    for (int i = 0; i < m; ++i) {
        s[i] = 1.0 / std::sqrt(d.mass[lo + i]);
        a[i] = d.diag[lo + i] * s[i] * s[i];
    }
    for (int i = 0; i + 1 < m; ++i) {
        b[i] = d.off[lo + i] * s[i] * s[i + 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(a, b, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw Error(ErrorCode::domain, "tridiagonal eigen-solver did not converge");
    }
    Solved out;
    out.values = es.eigenvalues();
    if (vectors) {
        out.vectors = s.asDiagonal() * es.eigenvectors();
    }
    out.first = lo;
    return out;
}

}  // namespace

SpectrumResult linearized_spectrum(const ProblemSpec& problem, const SolutionProfile& profile, int k, int grid)
{
    if (grid < 64) {
        throw Error(ErrorCode::domain, "linearized_spectrum needs at least 64 elements");
    }
    if (k < 1) {
        throw Error(ErrorCode::domain, "k must be positive");
    }
    Discretisation fine = assemble(problem, profile, grid);
    Solved f = solve(problem, fine);
    Discretisation coarse = assemble(problem, profile, grid / 2);
    Solved c = solve(problem, coarse, false);
    int kk = std::min<int>(k, static_cast<int>(c.values.size()));

    SpectrumResult r;
    r.grid = grid;
    r.x = fine.x;
    for (int i = 0; i < kk; ++i) {
        r.mu.push_back(f.values[i]);
        r.error.push_back(std::fabs(f.values[i] - c.values[i]) / 3.0);
        std::vector<double> mode(fine.x.size(), 0.0);
        for (int j = 0; j < f.vectors.rows(); ++j) {
            mode[f.first + j] = f.vectors(j, i);
        }
        r.modes.push_back(std::move(mode));
    }
    return r;
}

double lowest_eigenvalue(const ProblemSpec& problem, const SolutionProfile& profile, int grid)
{
    if (grid < 64) {
        throw Error(ErrorCode::domain, "lowest_eigenvalue needs at least 64 elements");
    }
    return solve(problem, assemble(problem, profile, grid), false).values[0];
}

double rayleigh_quotient(const ProblemSpec& problem, const SolutionProfile& profile, const std::vector<double>& psi)
{
    if (psi.size() < 65) {
        throw Error(ErrorCode::domain, "rayleigh_quotient needs at least 64 elements");
    }
    int N = static_cast<int>(psi.size()) - 1;
    Discretisation d = assemble(problem, profile, N);
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i <= N; ++i) {
        num += d.diag[i] * psi[i] * psi[i];
        if (i < N) {
            num += 2.0 * d.off[i] * psi[i] * psi[i + 1];
        }
        den += d.mass[i] * psi[i] * psi[i];
    }
    return num / den;
}

SteklovResult steklov_reference(double L, int grid)
{
    if (!(L > 0.0) || grid < 2) {
        throw Error(ErrorCode::domain, "steklov_reference needs L > 0 and grid >= 2");
    }
    const int N = grid;
    const double h = L / N;
    // Interior nodes are harmonic; eliminate them to a 2x2 boundary operator.
    const int m = N - 1;
    Eigen::MatrixXd Kii = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        Kii(i, i) = 2.0 / h;
        if (i + 1 < m) {
            Kii(i, i + 1) = Kii(i + 1, i) = -1.0 / h;
        }
    }
    Eigen::MatrixXd Kib = Eigen::MatrixXd::Zero(m, 2);
    Kib(0, 0) = -1.0 / h;
    Kib(m - 1, 1) = -1.0 / h;
    Eigen::Matrix2d Kbb = Eigen::Matrix2d::Identity() / h;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Kii);
    Eigen::MatrixXd ext = -ldlt.solve(Kib);
    Eigen::Matrix2d S = Kbb + Kib.transpose() * ext;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);

    SteklovResult r;
    r.mu1 = es.eigenvalues()[0];
    r.mu2 = es.eigenvalues()[1];
    Eigen::Vector2d pb = es.eigenvectors().col(1);
    Eigen::VectorXd pi = ext * pb;
    r.x.resize(N + 1);
    r.mode2.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
        r.x[i] = h * i;
    }
    r.mode2[0] = pb[0];
    r.mode2[N] = pb[1];
    for (int i = 0; i < m; ++i) {
        r.mode2[i + 1] = pi[i];
    }
    return r;
}

}  // namespace nep
