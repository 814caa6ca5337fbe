#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nep/nonlin.hpp"

namespace nep {

/// u'(0) = alpha u(0), u'(L) = -alpha u(L), or u(0) = u(L) = 0.
struct BoundaryCondition {
    enum class Kind { robin, dirichlet };

    Kind kind = Kind::dirichlet;
    double alpha = 0.0;

    static BoundaryCondition robin(double alpha) { return {Kind::robin, alpha}; }
    static BoundaryCondition dirichlet() { return {Kind::dirichlet, 0.0}; }

    bool is_robin() const noexcept { return kind == Kind::robin; }
    bool is_dirichlet() const noexcept { return kind == Kind::dirichlet; }
};

/// from_zero for alpha > 0 and Dirichlet, from_minus_infinity for alpha < 0.
Convention default_convention(const BoundaryCondition& bc);

/// u'' + lambda f(u) = 0 on (0, L) with the given boundary condition.
struct ProblemSpec {
    double length = 1.0;
    BoundaryCondition bc;
    double lambda = 1.0;
    Potential pot;

    ProblemSpec(double length, BoundaryCondition bc, double lambda, const NonlinearModel& model);
    ProblemSpec(double length, BoundaryCondition bc, double lambda, Potential pot);

    /// sqrt(lambda) / alpha (Robin only).
    double gamma_star() const;
    const NonlinearModel& model() const noexcept { return pot.model(); }

    /// Throws domain/model_definition on lambda <= 0, L <= 0, alpha == 0, or a
    /// model that is only admissible for u >= 0 paired with alpha < 0.
    void validate() const;
};

enum class SolutionType { s, i, d, c, none };

const char* to_string(SolutionType t);
SolutionType solution_type_from_string(std::string_view s);

/// Sampled solution (x, u, v = u'/sqrt(lambda)) plus metadata.
struct SolutionProfile {
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> v;
    double energy = 0.0;
    SolutionType type = SolutionType::none;
    bool boundary_case = false;
    double lambda = 0.0;
    BoundaryCondition bc;
    std::string model_name;

    std::size_t size() const noexcept { return x.size(); }
    double length() const { return x.empty() ? 0.0 : x.back() - x.front(); }
    double u_max() const;
    /// u'(x) = sqrt(lambda) v(x).
    double slope(std::size_t i) const;
};

/// u(L - x) with v negated; the mirror image of a solution is a solution.
SolutionProfile reflect(const SolutionProfile& p);

/// Sup-norm distance after linear interpolation of `b` onto the grid of `a`.
double sup_distance(const SolutionProfile& a, const SolutionProfile& b);

/// Linear interpolation of (x, y) at xq; x increasing.
double interpolate(const std::vector<double>& x, const std::vector<double>& y, double xq);

}  // namespace nep
