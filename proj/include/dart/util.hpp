#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dart::util {

std::string trim(std::string_view s);

/// Splits on runs of ASCII whitespace; no empty tokens.
std::vector<std::string> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Splits into sentences on '.', '!' or '?' followed by whitespace or end of
/// text. Terminators stay attached to their sentence.
std::vector<std::string> split_sentences(std::string_view text);

/// Fixed-point with 6 decimals, the serialization width used by feature CSVs.
std::string fmt_fixed6(double v);

/// Shortest 17-significant-digit form; round-trips IEEE doubles exactly.
std::string fmt_g17(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Write-to-temp then rename, so concurrent writers of the same key never
/// expose a torn file.
void write_file_atomic(const std::string& path, std::string_view content);

/// Deterministic uniform draw in [0, n) from a raw 64-bit generator value.
std::uint64_t bounded(std::uint64_t raw, std::uint64_t n);

}  // namespace dart::util
