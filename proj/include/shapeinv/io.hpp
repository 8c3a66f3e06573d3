#pragma once

// Small output helpers shared by the modules and the CLI.

#include <cstdint>
#include <string>
#include <string_view>

namespace shapeinv {

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

// 64-bit FNV-1a, printed as 16 hex digits by fnv1a_hex.
std::uint64_t fnv1a(std::string_view data);
std::string fnv1a_hex(std::string_view data);

}  // namespace shapeinv
