#pragma once

#include <functional>
#include <vector>

#include "nep/problem.hpp"

namespace nep {

/// Green's function of -d^2/dx^2 with u'(0) = alpha u(0), u'(L) = -alpha u(L).
/// Throws greens_nonexistent when 2 + alpha L = 0 or alpha = 0.
double greens_value(double alpha, double L, double x, double xi);

/// lambda \int_0^L g(x_j, xi) f(u(xi)) dxi at every grid node, and its x-derivative.
struct IntegralImage {
    std::vector<double> value;
    std::vector<double> slope;
};

/// Factorised O(n) evaluation: the kernel separates on either side of x, so
/// both pieces are running sums.  Trapezoid rule on the profile grid with the
/// first Euler–Maclaurin end correction (slopes of f(u) come from the stored v).
IntegralImage integral_image(const ProblemSpec& problem, const SolutionProfile& profile);

/// O(n^2) reference: evaluates greens_value at every (x_j, xi_k) pair and applies
/// the same corrected trapezoid rule.
IntegralImage integral_image_reference(const ProblemSpec& problem, const SolutionProfile& profile);

/// max_j |u(x_j) - lambda \int g(x_j, xi) f(u(xi)) dxi|.
double integral_residual(const ProblemSpec& problem, const SolutionProfile& profile);

struct PicardOptions {
    double tol = 1e-12;
    int max_iter = 10000;
    int grid = 2048;
    double blowup = 1e6;
    /// Called with (iteration, iterate) after every update.
    std::function<void(int, const std::vector<double>&)> observer;
};

/// Minimal solution for alpha > 0 by u_0 = 0, u_n = lambda \int g f(u_{n-1}).
/// Throws no_minimal_solution when the iterates grow past `blowup` or the
/// budget runs out while the update norm is still growing.
SolutionProfile picard_minimal(const ProblemSpec& problem, const PicardOptions& options = {});

/// \int_0^L (x - L/2) f(u(x)) dx by the trapezoid rule on the profile grid.
double compatibility_defect(const NonlinearModel& model, const SolutionProfile& profile, double L);

}  // namespace nep
