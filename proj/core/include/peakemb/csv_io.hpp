#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace peakemb::csv {

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_line(std::string_view line);

/// Quotes a field only when it contains a comma, quote or newline.
std::string escape(std::string_view field);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based line numbers of each row in the source, for error messages.
  std::vector<std::size_t> line_numbers;
};

/// Reads a header plus records; blank lines are skipped and CR is trimmed.
/// Throws Error(IoError) when the file cannot be opened.
Table read(const std::filesystem::path& path);

}  // namespace peakemb::csv
