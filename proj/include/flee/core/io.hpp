#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace flee {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Strict decimal parse of the whole string. Returns false on junk or non-finite values.
bool parse_double(std::string_view text, double& out);

std::string read_text_file(const std::filesystem::path& path);

/// Writes into a sibling temporary file and renames it over `path`, so readers
/// never observe a partially written output.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

std::uint32_t crc32(std::string_view bytes);
std::uint32_t crc32(const std::vector<std::uint8_t>& bytes);

std::string hex32(std::uint32_t value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

/// Minimal comma-separated reader for the toolkit's own schemas (no quoting).
/// Blank lines are skipped; a header mismatch is a SchemaViolation.
CsvTable read_csv(const std::filesystem::path& path, const std::vector<std::string>& expected_header);

}  // namespace flee
