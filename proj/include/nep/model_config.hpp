#pragma once

#include <filesystem>
#include <string_view>

#include "nep/nonlin.hpp"

namespace nep {

/// Loads a user model from a JSON file:
///
///   { "name": "cubic", "f": "1 + u + u^3/3",
///     "integrable_at_minus_infinity": false, "tail_mass": 1.0,
///     "valid_lower_bound": 0 }
///
/// `tail_mass` and `valid_lower_bound` are optional.
NonlinearModel load_model_config(const std::filesystem::path& path);

/// Parses the same schema from an in-memory JSON document.
NonlinearModel parse_model_config(std::string_view json_text);

}  // namespace nep
