#pragma once

#include <stdexcept>
#include <string>

namespace nep {

enum class ErrorCode {
    model_not_found,
    model_definition,
    convention,
    domain,
    greens_nonexistent,
    no_minimal_solution,
    tangency_not_found,
    regime,
    derivative_singular,
    out_of_range,
    blowup,
    weight,
    step_rejected,
    seed_rejected,
    parse,
    io,
    usage,
};

const char* to_string(ErrorCode code);

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the IVP integrator when |u| leaves the representable range.
class BlowupError : public Error {
public:
    BlowupError(double x, const std::string& what);
    double x() const noexcept { return x_; }

private:
    double x_;
};

}  // namespace nep
