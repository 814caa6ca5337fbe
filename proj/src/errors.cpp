#include "nep/errors.hpp"

namespace nep {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::model_not_found: return "model-not-found";
    case ErrorCode::model_definition: return "model-definition";
    case ErrorCode::convention: return "convention";
    case ErrorCode::domain: return "domain";
    case ErrorCode::greens_nonexistent: return "greens-function-nonexistent";
    case ErrorCode::no_minimal_solution: return "no-minimal-solution-detected";
    case ErrorCode::tangency_not_found: return "tangency-not-found";
    case ErrorCode::regime: return "regime";
    case ErrorCode::derivative_singular: return "derivative-singular";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::blowup: return "blowup";
    case ErrorCode::weight: return "weight";
    case ErrorCode::step_rejected: return "step-rejected";
    case ErrorCode::seed_rejected: return "seed-rejected";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
    case ErrorCode::usage: return "usage";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

BlowupError::BlowupError(double x, const std::string& what)
    : Error(ErrorCode::blowup, what + " at x=" + std::to_string(x)), x_(x)
{
}

}  // namespace nep
