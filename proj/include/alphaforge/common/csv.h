#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace alphaforge::csv {

// Minimal comma splitter; the formats written by this library never quote fields.
std::vector<std::string_view> split(std::string_view line, char sep = ',');

std::string_view trim(std::string_view s);

/// Shortest text that round-trips to the same double. Missing values format as "".
std::string format_double(double v);

/// Parses a full-field decimal. Empty text yields the missing marker; garbage throws.
double parse_double(std::string_view text);

}  // namespace alphaforge::csv
