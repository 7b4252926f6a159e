#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace seedrl::cli {

// Shortest round-trip decimal form (std::to_chars).
std::string fmt_double(double x);

std::string trim(const std::string& s);

// Value parsers; `key` names the field in error messages.
int to_int(const std::string& key, const std::string& v);
int64_t to_i64(const std::string& key, const std::string& v);
uint64_t to_u64(const std::string& key, const std::string& v);
double to_dbl(const std::string& key, const std::string& v);
std::vector<int> to_int_list(const std::string& key, const std::string& v);

}  // namespace seedrl::cli
