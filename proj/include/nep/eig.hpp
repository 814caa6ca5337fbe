#pragma once

#include <vector>

#include "nep/problem.hpp"

namespace nep {

struct SpectrumResult {
    std::vector<double> mu;          // ascending
    std::vector<double> error;       // |mu(h) - mu(2h)| / 3 per eigenvalue
    std::vector<std::vector<double>> modes;  // nodal values, normalised in the weighted norm
    std::vector<double> x;           // grid nodes
    int grid = 0;                    // number of elements
};

/// phi'' + mu f'(u) phi = 0 with the problem's boundary conditions, by P1
/// elements with lumped weighted mass on `grid` uniform elements (>= 64).
/// Throws `weight` if f'(u) <= 0 at a node.
SpectrumResult linearized_spectrum(const ProblemSpec& problem, const SolutionProfile& profile, int k,
                                   int grid = 512);

/// mu_1 alone on `grid` elements, eigenvalues only.
double lowest_eigenvalue(const ProblemSpec& problem, const SolutionProfile& profile, int grid = 512);

/// Discrete Rayleigh quotient (phi' ^2 + boundary terms) / (weighted mass) of
/// nodal values psi on the same discretisation.
double rayleigh_quotient(const ProblemSpec& problem, const SolutionProfile& profile, const std::vector<double>& psi);

struct SteklovResult {
    double mu1 = 0.0;
    double mu2 = 0.0;
    std::vector<double> x;
    std::vector<double> mode2;  // eigenfunction of mu2 at the nodes
};

/// phi'' = 0 on (0, L), -phi'(0) = mu phi(0), phi'(L) = mu phi(L).
SteklovResult steklov_reference(double L, int grid = 64);

}  // namespace nep
