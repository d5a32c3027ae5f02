#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qwoa {

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Lower-case, zero-padded 16-digit hex.
std::string to_hex(std::uint64_t value);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

/// Strict parsers: the whole token must be consumed. Throw FormatError.
double parse_double(std::string_view token);
long long parse_int(std::string_view token);
std::uint64_t parse_u64(std::string_view token);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

/// Parses "10..16", "10,12,14" or a mix such as "10..12,16".
std::vector<int> parse_size_list(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

} // namespace qwoa
