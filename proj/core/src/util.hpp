#pragma once

#include <string>
#include <vector>

namespace smellcheck::util {

// Numeric formatting shared by the CSV and XML codecs: integers without a
// decimal point, reals with 17 significant digits (round-trip exact).
std::string format_number(double v);
double parse_number(const std::string& text, bool* ok);

// ISO-8601 UTC timestamp with nanosecond precision. Strictly increasing
// within a process so identical (element, origin, timestamp) keys cannot be
// produced by consecutive calls.
std::string now_iso8601();

std::vector<std::string> split(const std::string& line, char sep);
std::string join(const std::vector<std::string>& parts, char sep);

std::string random_token(std::size_t bytes = 8);

}  // namespace smellcheck::util
