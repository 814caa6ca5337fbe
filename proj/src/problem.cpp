#include "nep/problem.hpp"

#include <algorithm>
#include <cmath>

#include "nep/errors.hpp"

namespace nep {

Convention default_convention(const BoundaryCondition& bc)
{
    if (bc.is_robin() && bc.alpha < 0.0) {
        return Convention::from_minus_infinity;
    }
    return Convention::from_zero;
}

ProblemSpec::ProblemSpec(double length, BoundaryCondition bc, double lambda, const NonlinearModel& model)
    : length(length), bc(bc), lambda(lambda), pot(model, default_convention(bc))
{
}

ProblemSpec::ProblemSpec(double length, BoundaryCondition bc, double lambda, Potential pot)
    : length(length), bc(bc), lambda(lambda), pot(std::move(pot))
{
}

double ProblemSpec::gamma_star() const
{
    if (!bc.is_robin()) {
        throw Error(ErrorCode::domain, "gamma* is defined for Robin conditions only");
    }
    return std::sqrt(lambda) / bc.alpha;
}

void ProblemSpec::validate() const
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::domain, "lambda must be positive");
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw Error(ErrorCode::domain, "L must be positive");
    }
    if (bc.is_robin() && bc.alpha == 0.0) {
        throw Error(ErrorCode::domain, "Robin coefficient alpha must be nonzero");
    }
    if (bc.is_robin() && bc.alpha < 0.0 && !model().valid_for_sign_changing()) {
        throw Error(ErrorCode::model_definition,
                    model().name + " is only admissible for u >= 0 and cannot be used with alpha < 0");
    }
}

const char* to_string(SolutionType t)
{
    switch (t) {
    case SolutionType::s: return "s";
    case SolutionType::i: return "i";
    case SolutionType::d: return "d";
    case SolutionType::c: return "c";
    case SolutionType::none: return "none";
    }
    return "none";
}

SolutionType solution_type_from_string(std::string_view s)
{
    if (s == "s") return SolutionType::s;
    if (s == "i") return SolutionType::i;
    if (s == "d") return SolutionType::d;
    if (s == "c") return SolutionType::c;
    if (s == "none") return SolutionType::none;
    throw Error(ErrorCode::parse, "unknown solution type '" + std::string(s) + "'");
}

double SolutionProfile::u_max() const
{
    return u.empty() ? 0.0 : *std::max_element(u.begin(), u.end());
}

double SolutionProfile::slope(std::size_t i) const
{
    return std::sqrt(lambda) * v[i];
}

SolutionProfile reflect(const SolutionProfile& p)
{
    SolutionProfile r = p;
    std::size_t n = p.size();
    double x0 = p.x.front();
    double x1 = p.x.back();
    for (std::size_t i = 0; i < n; ++i) {
        r.x[i] = x0 + (x1 - p.x[n - 1 - i]);
        r.u[i] = p.u[n - 1 - i];
        r.v[i] = -p.v[n - 1 - i];
    }
    if (p.type == SolutionType::i) {
        r.type = SolutionType::d;
    } else if (p.type == SolutionType::d) {
        r.type = SolutionType::i;
    }
    return r;
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double xq)
{
    if (xq <= x.front()) {
        return y.front();
    }
    if (xq >= x.back()) {
        return y.back();
    }
    auto it = std::upper_bound(x.begin(), x.end(), xq);
    std::size_t j = static_cast<std::size_t>(it - x.begin());
    double t = (xq - x[j - 1]) / (x[j] - x[j - 1]);
    return y[j - 1] + t * (y[j] - y[j - 1]);
}

double sup_distance(const SolutionProfile& a, const SolutionProfile& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::fabs(a.u[i] - interpolate(b.x, b.u, a.x[i])));
    }
    return d;
}

}  // namespace nep
