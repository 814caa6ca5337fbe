#include "nep/nonlin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nep/errors.hpp"
#include "nep/expression.hpp"
#include "nep/quadrature.hpp"

namespace nep {

const char* to_string(Convention c)
{
    return c == Convention::from_zero ? "from_zero" : "from_minus_infinity";
}

void validate_model(const NonlinearModel& model, double lo, double hi, int samples)
{
    lo = std::max(lo, model.valid_lower_bound);
    for (int i = 0; i < samples; ++i) {
        double u = lo + (hi - lo) * i / (samples - 1);
        double fu = model.f(u);
        double fp = model.f_prime(u);
        if (!(fu > 0.0) || !std::isfinite(fu)) {
            std::ostringstream os;
            os << model.name << ": f(" << u << ") = " << fu << " is not positive";
            throw Error(ErrorCode::model_definition, os.str());
        }
        if (fp < -1e-9 * std::max(1.0, std::fabs(fu))) {
            std::ostringstream os;
            os << model.name << ": f'(" << u << ") = " << fp << " is negative";
            throw Error(ErrorCode::model_definition, os.str());
        }
    }
}

namespace {

NonlinearModel gelfand()
{
    NonlinearModel m;
    m.name = "gelfand";
    m.f = [](double u) { return std::exp(u); };
    m.f_prime = m.f;
    m.f_second = m.f;
    m.integrable_at_minus_infinity = true;
    m.tail_mass = 1.0;
    m.F_from_zero = [](double u) { return std::expm1(u); };
    m.F_from_zero_inv = [](double s) { return std::log1p(s); };
    m.F_from_minus_infinity = [](double u) { return std::exp(u); };
    m.F_from_minus_infinity_inv = [](double s) { return std::log(s); };
    return m;
}

NonlinearModel alternative1()
{
    NonlinearModel m;
    m.name = "alternative1";
    m.f = [](double u) { return u < 0.0 ? 1.0 / ((u - 1.0) * (u - 1.0)) : 1.0 + 2.0 * u + 3.0 * u * u; };
    m.f_prime = [](double u) {
        return u < 0.0 ? -2.0 / ((u - 1.0) * (u - 1.0) * (u - 1.0)) : 2.0 + 6.0 * u;
    };
    m.f_second = [](double u) {
        double d = u - 1.0;
        return u < 0.0 ? 6.0 / (d * d * d * d) : 6.0;
    };
    m.integrable_at_minus_infinity = true;
    m.tail_mass = 1.0;
    m.F_from_minus_infinity = [](double u) {
        return u < 0.0 ? 1.0 / (1.0 - u) : 1.0 + u * (1.0 + u * (1.0 + u));
    };
    m.F_from_zero = [](double u) { return u < 0.0 ? u / (1.0 - u) : u * (1.0 + u * (1.0 + u)); };
    return m;
}

NonlinearModel alternative2()
{
    NonlinearModel m;
    m.name = "alternative2";
    m.f = [](double u) { return 1.0 + u * u; };
    m.f_prime = [](double u) { return 2.0 * u; };
    m.f_second = [](double) { return 2.0; };
    m.F_from_zero = [](double u) { return u + u * u * u / 3.0; };
    m.valid_lower_bound = 0.0;
    return m;
}

NonlinearModel nonconvex5()
{
    NonlinearModel m;
    m.name = "nonconvex5";
    m.f = [](double u) {
        return (((256.0 / 45.0 * u - 64.0 / 3.0) * u + 64.0 / 3.0) * u * u + 1.0) * u + 1.0;
    };
    m.f_prime = [](double u) {
        return ((256.0 / 9.0 * u - 256.0 / 3.0) * u + 64.0) * u * u + 1.0;
    };
    m.f_second = [](double u) { return ((1024.0 / 9.0 * u - 256.0) * u + 128.0) * u; };
    m.F_from_zero = [](double u) {
        double u2 = u * u;
        return ((128.0 / 135.0 * u - 64.0 / 15.0) * u + 16.0 / 3.0) * u2 * u2 + 0.5 * u2 + u;
    };
    m.valid_lower_bound = 0.0;
    return m;
}

}  // namespace

NonlinearModel builtin_model(std::string_view name)
{
    if (name == "gelfand") {
        return gelfand();
    }
    if (name == "alternative1") {
        return alternative1();
    }
    if (name == "alternative2") {
        return alternative2();
    }
    if (name == "nonconvex5") {
        return nonconvex5();
    }
    throw Error(ErrorCode::model_not_found, "no built-in model named '" + std::string(name) + "'");
}

std::vector<std::string> builtin_model_names()
{
    return {"gelfand", "alternative1", "alternative2", "nonconvex5"};
}

NonlinearModel expression_model(std::string name, std::string_view f_expression,
                                bool integrable_at_minus_infinity, std::optional<double> tail_mass)
{
    Expression expr = Expression::parse(f_expression);
    NonlinearModel m;
    m.name = std::move(name);
    m.f = expr;
    m.f_prime = [expr](double u) {
        double h = 1e-6 * std::max(1.0, std::fabs(u));
        return (expr(u + h) - expr(u - h)) / (2.0 * h);
    };
    m.f_second = [expr](double u) {
        double h = 1e-4 * std::max(1.0, std::fabs(u));
        return (expr(u + h) - 2.0 * expr(u) + expr(u - h)) / (h * h);
    };
    m.integrable_at_minus_infinity = integrable_at_minus_infinity;
    m.tail_mass = tail_mass;
    return m;
}

namespace detail {

/// Values of F at integer abscissae k_lo..k_hi.
struct AnchorTable {
    int k_lo = 0;
    int k_hi = 0;
    std::vector<double> values;

    double at(int k) const { return values[static_cast<std::size_t>(k - k_lo)]; }
};

}  // namespace detail

namespace {

constexpr int anchor_span = 32;
constexpr double quad_tol = 1e-12;

std::shared_ptr<const detail::AnchorTable> build_anchors(const NonlinearModel& m, Convention conv,
                                                         double s0)
{
    auto table = std::make_shared<detail::AnchorTable>();
    const auto& f = m.f;
    // Upward from 0.
    std::vector<double> up{s0};
    for (int k = 1; k <= anchor_span; ++k) {
        if (!std::isfinite(f(static_cast<double>(k)))) {
            break;
        }
        double next = up.back() + quad::integrate(f, k - 1.0, static_cast<double>(k), quad_tol);
        if (!std::isfinite(next)) {
            break;
        }
        up.push_back(next);
    }
    // Downward from 0.
    std::vector<double> down;
    int lowest = -anchor_span;
    if (m.valid_lower_bound > -std::numeric_limits<double>::infinity()) {
        lowest = std::max(lowest, static_cast<int>(std::floor(m.valid_lower_bound)));
    }
    for (int k = -1; k >= lowest; --k) {
        double value = 0.0;
        if (conv == Convention::from_minus_infinity) {
            value = quad::integrate_lower_tail(f, static_cast<double>(k), quad_tol);
        } else {
            double prev = down.empty() ? s0 : down.back();
            value = prev - quad::integrate(f, static_cast<double>(k), k + 1.0, quad_tol);
        }
        if (!std::isfinite(value)) {
            break;
        }
        down.push_back(value);
    }
    table->k_lo = -static_cast<int>(down.size());
    table->k_hi = static_cast<int>(up.size()) - 1;
    table->values.assign(down.rbegin(), down.rend());
    table->values.insert(table->values.end(), up.begin(), up.end());
    return table;
}

}  // namespace

Potential::Potential(const NonlinearModel& model, Convention convention)
    : model_(std::make_shared<const NonlinearModel>(model)), convention_(convention)
{
    const NonlinearModel& m = *model_;
    if (convention == Convention::from_minus_infinity) {
        if (!m.integrable_at_minus_infinity) {
            throw Error(ErrorCode::convention,
                        m.name + " is not integrable at -inf; from_minus_infinity is undefined");
        }
        closed_F_ = m.F_from_minus_infinity;
        closed_F_inv_ = m.F_from_minus_infinity_inv;
        if (m.tail_mass) {
            s0_ = *m.tail_mass;
        } else if (closed_F_) {
            s0_ = closed_F_(0.0);
        } else {
            s0_ = quad::integrate_lower_tail(m.f, 0.0, quad_tol);
        }
        if (!(s0_ > 0.0) || !std::isfinite(s0_)) {
            throw Error(ErrorCode::model_definition, m.name + ": tail mass must be finite and positive");
        }
        range_lower_ = 0.0;
    } else {
        closed_F_ = m.F_from_zero;
        closed_F_inv_ = m.F_from_zero_inv;
        s0_ = 0.0;
        if (m.integrable_at_minus_infinity) {
            double tail = m.tail_mass ? *m.tail_mass
                                      : quad::integrate_lower_tail(m.f, 0.0, quad_tol);
            range_lower_ = -tail;
        } else {
            range_lower_ = -std::numeric_limits<double>::infinity();
        }
    }
    if (!closed_F_) {
        anchors_ = build_anchors(m, convention, s0_);
    }
}

double Potential::operator()(double u) const
{
    if (closed_F_) {
        return closed_F_(u);
    }
    return quadrature_F(u);
}

double Potential::quadrature_F(double u) const
{
    const auto& a = *anchors_;
    const auto& f = model_->f;
    if (u >= a.k_hi) {
        return a.at(a.k_hi) + quad::integrate(f, a.k_hi, u, quad_tol);
    }
    if (u < a.k_lo) {
        if (convention_ == Convention::from_minus_infinity) {
            return quad::integrate_lower_tail(f, u, quad_tol);
        }
        return a.at(a.k_lo) - quad::integrate(f, u, a.k_lo, quad_tol);
    }
    int k = static_cast<int>(std::floor(u));
    return a.at(k) + quad::integrate(f, k, u, quad_tol);
}

double Potential::inverse(double s) const
{
    if (std::isnan(s) || s <= range_lower_) {
        std::ostringstream os;
        os << "F^{-1}(" << s << ") is outside the range of F (" << to_string(convention_) << ", > "
           << range_lower_ << ")";
        throw Error(ErrorCode::domain, os.str());
    }
    if (closed_F_inv_) {
        return closed_F_inv_(s);
    }
    return solve_inverse(s);
}

double Potential::solve_inverse(double s) const
{
    const Potential& F = *this;
    // Bracket around the anchor at u = 0.
    double lo = 0.0;
    double hi = 0.0;
    double flo = F(0.0) - s;
    if (flo == 0.0) {
        return 0.0;
    }
    double step = 1.0;
    if (flo < 0.0) {
        hi = step;
        double fhi = F(hi) - s;
        int guard = 0;
        while (fhi < 0.0) {
            lo = hi;
            flo = fhi;
            step *= 2.0;
            hi = lo + step;
            fhi = F(hi) - s;
            if (++guard > 1100 || !std::isfinite(fhi)) {
                throw Error(ErrorCode::domain, "F^{-1}: no upper bracket for s=" + std::to_string(s));
            }
        }
    } else {
        hi = 0.0;
        lo = -step;
        flo = F(lo) - s;
        int guard = 0;
        while (flo > 0.0) {
            hi = lo;
            step *= 2.0;
            lo = hi - step;
            flo = F(lo) - s;
            if (++guard > 1100 || !std::isfinite(flo)) {
                throw Error(ErrorCode::domain, "F^{-1}: no lower bracket for s=" + std::to_string(s));
            }
        }
    }
    // Safeguarded Newton; F' = f.
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double r = F(u) - s;
        if (r == 0.0) {
            return u;
        }
        if (r < 0.0) {
            lo = u;
        } else {
            hi = u;
        }
        double fu = model_->f(u);
        double next = u - r / fu;
        if (!(next > lo && next < hi) || !std::isfinite(next)) {
            next = 0.5 * (lo + hi);
        }
        if (std::fabs(next - u) <= 4e-16 * std::max(1.0, std::fabs(u)) ||
            hi - lo <= 4e-16 * std::max(1.0, std::fabs(u))) {
            return next;
        }
        u = next;
    }
    return u;
}

Potential potential(const NonlinearModel& model, Convention convention)
{
    return Potential(model, convention);
}

double invert_potential(const Potential& pot, double s)
{
    return pot.inverse(s);
}

}  // namespace nep
