#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace icdsel::io {

// Calendar dates are carried as days since 1970-01-01 (can be negative).
int parse_date(const std::string& iso);          // "2015-01-03"
std::string format_date(int days_since_epoch);

// Minimal CSV: comma-separated, no quoting. `max_fields` > 0 keeps the
// remainder (commas included) in the last field.
std::vector<std::string> split_csv(const std::string& line, int max_fields = 0);
std::vector<std::string> split(const std::string& s, char sep);

std::string read_file(const std::string& path);
std::vector<std::string> read_lines(const std::string& path);

// Write via temp file + rename so concurrent runs never observe partial files.
void atomic_write(const std::string& path, const std::string& content);

// 64-bit FNV-1a of the file bytes, hex-encoded. Used as the input fingerprint
// embedded in results so every table is traceable to its exact inputs.
std::string fingerprint_bytes(const void* data, std::size_t len);
std::string fingerprint_file(const std::string& path);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace icdsel::io
