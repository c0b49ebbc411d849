#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mxspec {

/// Shortest decimal representation that parses back to the same double.
std::string format_real(double value);

std::optional<double> parse_real(std::string_view token);
std::optional<long long> parse_integer(std::string_view token);

/// Splits on runs of spaces and tabs.
std::vector<std::string_view> split_fields(std::string_view line);

std::string_view trim(std::string_view s);

}  // namespace mxspec
