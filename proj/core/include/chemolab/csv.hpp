#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chemolab {

/// Shortest text that reads back as the same double (17 significant digits).
std::string format_number(double value);
/// Empty string when absent.
std::string format_number(const std::optional<double>& value);

/// Splits "0.1,0.2, 0.3" into doubles. Throws InvalidArgument on junk.
std::vector<double> parse_number_list(std::string_view text);

} // namespace chemolab
