#pragma once

#include <vector>

#include "nep/execution.hpp"
#include "nep/phase.hpp"
#include "nep/problem.hpp"

namespace nep {

/// RK4 for u' = sqrt(lambda) v, v' = -sqrt(lambda) f(u) on [0, L] with n
/// fixed steps.  Throws BlowupError when |u| exceeds 1e8.
SolutionProfile integrate_ivp(const Potential& pot, double lambda, double u0, double v0, double L, int n);

/// max_j |v_j^2/2 + F(u_j) - C|.
double energy_drift(const Potential& pot, const SolutionProfile& p);

struct ShootOptions {
    double s_min = -30.0;
    double s_max = 30.0;
    int n_scan = 512;
    int n = 2048;
    Execution exec = Execution::parallel;
};

struct ShootResult {
    std::vector<SolutionProfile> profiles;  // ordered by shooting parameter
    std::vector<double> parameters;
    std::vector<double> blowups;  // scan parameters skipped after blow-up
};

/// Boundary mismatch at x = L for shooting parameter s: u(0) = s,
/// u'(0) = alpha s for Robin; u(0) = 0, u'(0) = s for Dirichlet.
double shooting_residual(const ProblemSpec& problem, double s, int n);

/// Scan, bracket, refine, and deduplicate every root of the shooting residual.
ShootResult shoot(const ProblemSpec& problem, const ShootOptions& options = {});

/// Type from the profile shape: s if u(0) = u(L), otherwise by the signs of v at the ends.
SolutionType classify_profile(const SolutionProfile& p);

/// Profile along the trajectory `cls` of K_C, on n uniform steps over the
/// trajectory's own length.  Regime error if the trajectory runs towards increasing v.
SolutionProfile reconstruct_from_energy(const ProblemSpec& problem, double C, const TrajectoryClass& cls, int n = 2048);

/// Same, picking the `variant`-th trajectory of `type` at this energy.
SolutionProfile reconstruct_from_energy(const ProblemSpec& problem, double C, SolutionType type, int variant = 0,
                                        int n = 2048);

}  // namespace nep
