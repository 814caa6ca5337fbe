#pragma once

#include <Eigen/Sparse>

#include <limits>
#include <string>
#include <vector>

#include "nep/problem.hpp"

namespace nep {

/// Family G(u, lambda) = 0 on a uniform P1 mesh of N elements.
struct FemProblem {
    double length = 1.0;
    BoundaryCondition bc;
    NonlinearModel model;
    int N = 400;

    double h() const { return length / N; }
};

struct DiscreteState {
    std::vector<double> u;  // N + 1 nodal values
    double lambda = 0.0;
    double s = 0.0;         // arclength from the start of the branch
};

struct Assembly {
    Eigen::VectorXd residual;
    Eigen::SparseMatrix<double> jacobian;  // dG/du
    Eigen::VectorXd d_lambda;              // dG/dlambda
};

/// Weak form with 2-point Gauss quadrature per element and the Robin terms
/// alpha u at both end rows.  Dirichlet rows are replaced by u = 0.
Assembly residual_and_jacobian(const FemProblem& fem, const DiscreteState& state);

/// max-norm of the residual.
double residual_norm(const FemProblem& fem, const DiscreteState& state);

struct NewtonReport {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};

/// Newton at fixed lambda.  At most max_iter iterations; never throws on divergence.
NewtonReport newton_fixed_lambda(const FemProblem& fem, DiscreteState& state, int max_iter = 12);

/// Tangent (du, dlambda) in the weighted norm h |du|^2 + dlambda^2.
struct Tangent {
    Eigen::VectorXd du;
    double dlambda = 0.0;
};

/// Bordered Newton: G = 0 plus <t, z - anchor> = ds in the weighted inner product.
NewtonReport newton_bordered(const FemProblem& fem, DiscreteState& state, const DiscreteState& anchor,
                             const Tangent& t, double ds, int max_iter = 12);

/// Null direction of [J, G_lambda] at a state, oriented to have positive
/// inner product with `orient` (if given).
Tangent jacobian_tangent(const FemProblem& fem, const DiscreteState& state, const Tangent* orient = nullptr);

struct BranchPoint {
    DiscreteState state;
    double u_max = 0.0;
    bool turning = false;
    int mu1_sign = 0;  // 0 when not computed
    double mu1 = std::numeric_limits<double>::quiet_NaN();
    int newton_iterations = 0;
};

struct Branch {
    std::vector<BranchPoint> points;
    std::vector<std::size_t> turning_points;
    bool stalled = false;
    std::string stop_reason;
};

struct ContinuationOptions {
    int steps = 400;
    double ds = 0.05;
    double ds_max = 0.5;
    double ds_min = 1e-12;
    double u_limit = 1e6;
    double lambda_max = 1e12;
    int direction = 1;          // sign of dlambda at the start
    int stability_every = 10;   // 0 disables the mu_1 tags
    bool refine_turning = true;
};

/// Pseudo-arclength continuation from a converged state.
Branch trace_branch(const FemProblem& fem, const DiscreteState& start, const ContinuationOptions& options = {});

/// Trivial state u = 0 at lambda = 0.
DiscreteState trivial_state(const FemProblem& fem);

/// Interpolates a profile onto the mesh and polishes with fixed-lambda Newton.
/// Throws seed_rejected if Newton does not converge.
DiscreteState seed_from_profile(const FemProblem& fem, const SolutionProfile& profile, int* iterations = nullptr);

/// Converged states where the branch crosses lambda.
std::vector<DiscreteState> slice_branch(const FemProblem& fem, const Branch& branch, double lambda);

/// Distinct states (sup-norm 1e-6), counting mirror images u(L - x) as
/// separate solutions when they differ.
std::vector<DiscreteState> distinct_solutions(const std::vector<DiscreteState>& states, bool add_reflections);

/// State as a sampled profile; v from centred differences.
SolutionProfile profile_from_state(const FemProblem& fem, const DiscreteState& state);

/// Smallest linearised eigenvalue at a state; NaN if the weight is not positive.
double lowest_linearized(const FemProblem& fem, const DiscreteState& state);

/// Sign of lowest_linearized (0 when it is NaN).
int mu1_sign(const FemProblem& fem, const DiscreteState& state);

}  // namespace nep
