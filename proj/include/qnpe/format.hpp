#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace qnpe {

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

double parse_double(std::string_view text, std::string_view what);
std::int64_t parse_int(std::string_view text, std::string_view what);
std::uint64_t parse_u64(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);

std::string_view trim(std::string_view text);

}  // namespace qnpe
