#pragma once

#include <limits>
#include <vector>

#include "nep/execution.hpp"
#include "nep/phase.hpp"
#include "nep/problem.hpp"

namespace nep {

enum class TimeMapBranch { dirichlet, sym1, sym2, asym_monotone, asym_nonmonotone };

const char* to_string(TimeMapBranch b);
TimeMapBranch time_map_branch_from_string(std::string_view s);

struct TimeMapSample {
    double C = 0.0;
    TimeMapBranch branch = TimeMapBranch::sym1;
    double length = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;
    // Monotone asymmetric branch: the pieces either side of the u = 0 crossing.
    double length_10 = std::numeric_limits<double>::quiet_NaN();
    double length_02 = std::numeric_limits<double>::quiet_NaN();
    // Non-monotone asymmetric branch: the direct two-piece integral.
    double length_direct = std::numeric_limits<double>::quiet_NaN();
};

/// x-length of the arc of K_C from `from` down to `to` (from.v >= to.v).
/// |v| <= sqrt(C) is integrated in v, the rest in u, so neither form sees an
/// endpoint singularity or underflow.
double path_length(const Potential& pot, double lambda, double C, PhasePoint from, PhasePoint to);

/// Dirichlet time map in the t-form (relative tolerance 1e-10).
double dirichlet_length(const Potential& pot, double lambda, double C);

/// f(u)^2 - 2 f'(u) F(u).
double uniqueness_indicator(const Potential& pot, double u);

TimeMapSample symmetric_length(const Potential& pot, double lambda, double gamma_star, double C, int index);
TimeMapSample asymmetric_monotone_length(const Potential& pot, double lambda, double gamma_star, double C);
TimeMapSample asymmetric_nonmonotone_length(const Potential& pot, double lambda, double gamma_star, double C);

/// Length of P1+ -> P2- for any C > C_tilde; equals the monotone L12 above s0
/// and the non-monotone one below.
TimeMapSample asymmetric_length(const Potential& pot, double lambda, double gamma_star, double C);

/// dL/dC for sym1 / sym2.  derivative_singular within 1e-8 of C_tilde.
double length_derivative(const Potential& pot, double lambda, double gamma_star, double C, TimeMapBranch branch);

/// Dispatch on branch; gamma_star is ignored for Dirichlet.
TimeMapSample length_sample(const Potential& pot, double lambda, double gamma_star, TimeMapBranch branch, double C);

/// Samples of one branch at the given energies, in input order.
std::vector<TimeMapSample> sweep(const Potential& pot, double lambda, double gamma_star, TimeMapBranch branch,
                                 const std::vector<double>& Cs, Execution exec = Execution::parallel);

/// n log-spaced points in [lo, hi].
std::vector<double> log_space(double lo, double hi, int n);

struct SolutionRoot {
    double C = 0.0;
    TimeMapBranch branch = TimeMapBranch::sym1;
    TrajectoryClass trajectory;
    /// Root found at a local extremum of the branch (double root).
    bool tangent = false;
};

struct SolutionCount {
    /// One entry per solution; asymmetric roots contribute both orientations.
    std::vector<SolutionRoot> roots;

    int total() const { return static_cast<int>(roots.size()); }
    int count(SolutionType t) const;
};

struct CountOptions {
    int samples = 400;
    Execution exec = Execution::parallel;
};

/// All energies whose trajectory has length problem.length.
SolutionCount count_solutions(const ProblemSpec& problem, const CountOptions& options = {});

/// lambda > 0 with L(C; lambda) = L0.  Dirichlet scales exactly; alpha > 0 is
/// solved by bracketing (L decreases in lambda).  out_of_range if no bracket.
double lambda_of_C(const Potential& pot, const BoundaryCondition& bc, double L0, double C);

}  // namespace nep
