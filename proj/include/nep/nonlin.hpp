#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nep {

using ScalarFn = std::function<double(double)>;

/// Which antiderivative of f is used as the potential F.
enum class Convention { from_zero, from_minus_infinity };

const char* to_string(Convention c);

/// A nonlinearity f with f > 0 and f' >= 0, plus whatever closed forms are known.
///
/// Integrability of f at -inf is declared, never detected.  Closed-form
/// antiderivatives are optional; when absent the potential is built by
/// quadrature.
struct NonlinearModel {
    std::string name;
    ScalarFn f;
    ScalarFn f_prime;
    ScalarFn f_second;  // may be empty
    bool integrable_at_minus_infinity = false;
    std::optional<double> tail_mass;  // \int_{-inf}^0 f

    ScalarFn F_from_zero;
    ScalarFn F_from_zero_inv;
    ScalarFn F_from_minus_infinity;
    ScalarFn F_from_minus_infinity_inv;

    // f > 0, f' >= 0 is only claimed for u >= valid_lower_bound.
    double valid_lower_bound = -std::numeric_limits<double>::infinity();

    bool valid_for_sign_changing() const
    {
        return valid_lower_bound == -std::numeric_limits<double>::infinity();
    }
};

/// Samples f and f' on [lo, hi]; throws model_definition if f <= 0 or f' < 0.
void validate_model(const NonlinearModel& model, double lo, double hi, int samples = 201);

/// Built-ins: gelfand, alternative1, alternative2, nonconvex5.
NonlinearModel builtin_model(std::string_view name);
std::vector<std::string> builtin_model_names();

/// Model from a parsed expression for f.  f' and f'' come from central
/// differences with step 1e-6 * max(1, |u|).
NonlinearModel expression_model(std::string name, std::string_view f_expression,
                                bool integrable_at_minus_infinity,
                                std::optional<double> tail_mass = std::nullopt);

namespace detail {
struct AnchorTable;
}

/// The potential F of a model under one convention.  Immutable and cheap to
/// copy; safe to share between threads.
class Potential {
public:
    Potential(const NonlinearModel& model, Convention convention);

    double operator()(double u) const;
    double inverse(double s) const;

    double f(double u) const { return model_->f(u); }
    double f_prime(double u) const { return model_->f_prime(u); }

    /// F(0): the tail mass for from_minus_infinity, zero otherwise.
    double s0() const noexcept { return s0_; }
    Convention convention() const noexcept { return convention_; }
    const NonlinearModel& model() const noexcept { return *model_; }

    /// Infimum of F over the real line (exclusive); -inf when unbounded.
    double range_lower() const noexcept { return range_lower_; }

private:
    double quadrature_F(double u) const;
    double solve_inverse(double s) const;

    std::shared_ptr<const NonlinearModel> model_;
    Convention convention_;
    double s0_ = 0.0;
    double range_lower_ = 0.0;
    ScalarFn closed_F_;
    ScalarFn closed_F_inv_;
    std::shared_ptr<const detail::AnchorTable> anchors_;
};

Potential potential(const NonlinearModel& model, Convention convention);

/// F^{-1}(s); throws domain when s is outside the range of F.
double invert_potential(const Potential& pot, double s);

}  // namespace nep
