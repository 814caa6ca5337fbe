#pragma once

#include <functional>

namespace nep::quad {

using Integrand = std::function<double(double)>;

/// Adaptive Gauss–Kronrod (21-point, GSL QAG) on a finite interval.
/// Returns the best estimate even when the tolerance is unattainable.
double integrate(const Integrand& f, double a, double b, double rel_tol = 1e-12);

/// Integral over (-inf, b] for integrands decaying at -inf (GSL QAGIL).
double integrate_lower_tail(const Integrand& f, double b, double rel_tol = 1e-12);

/// Single 15-point Kronrod rule; for short panels where adaptivity is wasted.
double kronrod15(const Integrand& f, double a, double b);

/// Root of a continuous function on [a, b] with fa * fb <= 0 (TOMS 748).
/// Stops when the bracket is narrower than abs_tol + rel_tol * |x|.
double find_root(const Integrand& fn, double a, double b,
                 double abs_tol = 0.0, double rel_tol = 4e-16);

/// Same as find_root with known endpoint values.
double find_root(const Integrand& fn, double a, double b, double fa, double fb,
                 double abs_tol, double rel_tol);

/// Golden-section maximisation of a unimodal function on [a, b].
/// Returns the abscissa of the maximum.
double golden_max(const Integrand& fn, double a, double b, double x_tol);

}  // namespace nep::quad
