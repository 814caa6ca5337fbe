#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "nep/problem.hpp"

namespace nep {

/// 17 significant digits, '.' separator, independent of the locale.
std::string format_number(double x);

/// Writes through a temporary file in the same directory and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Header line "# nep-phaseplane v1 <command>".
std::string csv_header(std::string_view command);

/// CSV with the versioned header, a "# meta" line and columns x,u,v.
std::string profile_to_csv(const SolutionProfile& p, std::string_view command = "solve");

/// Inverse of profile_to_csv; parse error on malformed input.
SolutionProfile profile_from_csv(std::string_view text);

SolutionProfile read_profile(const std::filesystem::path& path);

}  // namespace nep
