#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nep/nonlin.hpp"
#include "nep/problem.hpp"

namespace nep {

/// A point of the (v, u) phase plane.
struct PhasePoint {
    double v = 0.0;
    double u = 0.0;
};

/// Energy curve K_C against the boundary lines u = gamma* v (x = 0) and
/// u = -gamma* v (x = L).
struct PhaseGeometry {
    double gamma_star = 0.0;
    double s0 = 0.0;
    double C = 0.0;
    /// Points on u = gamma* v, ordered v descending (so u ascending for gamma* < 0).
    std::vector<PhasePoint> plus;
    /// Mirror images (-v, u) on u = -gamma* v, same order as `plus`.
    std::vector<PhasePoint> minus;
    /// Tangency constant; alpha < 0 only.
    std::optional<double> C_tilde;
    /// Set when C is within tolerance of C_tilde (one double point).
    bool tangent = false;
};

/// One row of the trajectory table: a path along K_C from `start` (x = 0) to `end` (x = L).
struct TrajectoryClass {
    SolutionType type = SolutionType::none;
    PhasePoint start;
    PhasePoint end;
    /// Endpoint sits on the u = 0 axis at C = s0.
    bool boundary_case = false;
    /// P1/P2 label of the start and end points, e.g. "P1+P2-".
    std::string label;
};

/// u on K_C at abscissa v, i.e. F^{-1}(C - v^2 / 2).  Domain error when
/// C - v^2/2 is outside the range of F.
double curve_height(const Potential& pot, double C, double v);

struct Tangency {
    double C_tilde = 0.0;
    double v1 = 0.0;
    double u1 = 0.0;  // gamma* v1
};

/// Energy at which u = gamma* v touches K_C, for gamma* < 0.
Tangency tangency(const Potential& pot, double gamma_star);

/// |C - C_tilde| <= 1e-10 max(1, |C_tilde|).
bool at_tangency(double C, double C_tilde);

/// Intersections of K_C with the boundary lines (Robin).
PhaseGeometry intersections(const Potential& pot, double gamma_star, double C);

/// Dirichlet: the trajectory runs between (sqrt(2C), 0) and (-sqrt(2C), 0).
PhaseGeometry dirichlet_geometry(const Potential& pot, double C);

/// Admissible trajectories at this energy.
std::vector<TrajectoryClass> classify(const PhaseGeometry& geom);

}  // namespace nep
