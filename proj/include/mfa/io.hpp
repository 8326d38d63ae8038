// io.hpp — fixed-format number printing for reproducible CSV, tiny file
// helpers, and the input hash recorded in run manifests.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mfa {

// 12 significant digits, C locale; the one formatting used in every CSV.
std::string format_sig12(double v);

std::string csv_row(const std::vector<std::string>& cells);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

} // namespace mfa
