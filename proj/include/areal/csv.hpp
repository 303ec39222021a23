#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace areal {

using Row = std::vector<std::string>;

namespace csv {

/// Parses delimiter-separated text (RFC 4180 quoting). A UTF-8 BOM is
/// skipped; CRLF and LF line endings are both accepted.
std::vector<Row> parse(std::string_view text, char delimiter = ',');

std::vector<Row> readFile(const std::filesystem::path& path, char delimiter = ',');

/// Guesses the delimiter of a file from its first line (',', ';' or tab).
char sniffDelimiter(std::string_view text);

std::string formatRow(const Row& row, char delimiter = ',');

/// Appends rows to a file, creating it with `header` when absent or empty.
void appendRows(const std::filesystem::path& path, const Row& header,
                const std::vector<Row>& rows);

void writeFile(const std::filesystem::path& path, const Row& header,
               const std::vector<Row>& rows);

}  // namespace csv

/// A csv file with a mandatory header row.
struct CsvTable {
  Row header;
  std::vector<Row> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t requireColumn(std::string_view name, const std::filesystem::path& origin) const;

  static CsvTable read(const std::filesystem::path& path);
};

std::string readTextFile(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place.
void writeTextFileAtomic(const std::filesystem::path& path, std::string_view content);

}  // namespace areal
