#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fracpme/scheme.hpp"

namespace fracpme {

/// Parses an INI-style run configuration.
///
///   [grid]    half_width, height, intervals_x, intervals_y | dx, growing_domain
///   [time]    final_time, steps | dt
///   [phi]     kind = power | log, m
///   [initial] kind = bump | cauchy | dirac | sampled, amplitude, mass, values
///   [solver]  method = direct | relaxation | cg, tolerance, max_iterations, warm_start
///   [output]  snapshot_times, full_field, strict_cfl
///
/// Unknown sections or keys raise ParseError naming the line; inconsistent
/// values raise ValidationError (or the grid's own error codes).
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config: parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

}  // namespace fracpme
