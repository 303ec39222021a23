#include "areal/csv.hpp"

#include <fstream>
#include <sstream>

#include "areal/error.hpp"

namespace areal {
namespace csv {

std::vector<Row> parse(std::string_view text, char delimiter) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<Row> rows;
  Row row;
  std::string field;
  bool quoted = false;
  bool fieldStarted = false;

  auto endField = [&] {
    row.push_back(std::move(field));
    field.clear();
    fieldStarted = false;
  };
  auto endRow = [&] {
    endField();
    rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !fieldStarted) {
      quoted = true;
      fieldStarted = true;
    } else if (c == delimiter) {
      endField();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
      endRow();
    } else if (c == '\n') {
      endRow();
    } else {
      field.push_back(c);
      fieldStarted = true;
    }
  }
  if (quoted) throw Error(Errc::ParseError, "unterminated quoted field at end of input");
  if (fieldStarted || !field.empty() || !row.empty()) endRow();
  return rows;
}

std::vector<Row> readFile(const std::filesystem::path& path, char delimiter) {
  return parse(readTextFile(path), delimiter);
}

char sniffDelimiter(std::string_view text) {
  const auto eol = text.find('\n');
  const auto line = text.substr(0, eol);
  std::size_t best = 0;
  char chosen = ',';
  for (char d : {',', ';', '\t'}) {
    std::size_t n = 0;
    bool inQuotes = false;
    for (char c : line) {
      if (c == '"') inQuotes = !inQuotes;
      if (!inQuotes && c == d) ++n;
    }
    if (n > best) {
      best = n;
      chosen = d;
    }
  }
  return chosen;
}

std::string formatRow(const Row& row, char delimiter) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(delimiter);
    const std::string& f = row[i];
    const bool needsQuotes = f.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string::npos ||
                             (!f.empty() && (f.front() == ' ' || f.back() == ' '));
    if (!needsQuotes) {
      out += f;
      continue;
    }
    out.push_back('"');
    for (char c : f) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    out.push_back('"');
  }
  out.push_back('\n');
  return out;
}

void appendRows(const std::filesystem::path& path, const Row& header, const std::vector<Row>& rows) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(Errc::PathNotWritable, "cannot open " + path.string() + " for appending");
  if (fresh) out << formatRow(header);
  for (const auto& r : rows) out << formatRow(r);
  out.flush();
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

void writeFile(const std::filesystem::path& path, const Row& header, const std::vector<Row>& rows) {
  std::string content = formatRow(header);
  for (const auto& r : rows) content += formatRow(r);
  writeTextFileAtomic(path, content);
}

}  // namespace csv

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return std::nullopt;
}

std::size_t CsvTable::requireColumn(std::string_view name, const std::filesystem::path& origin) const {
  if (auto c = column(name)) return *c;
  throw Error(Errc::CorruptInventory,
              origin.string() + ": missing column '" + std::string(name) + "'");
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
  auto rows = csv::readFile(path);
  CsvTable t;
  if (rows.empty()) return t;
  t.header = std::move(rows.front());
  t.rows.assign(std::make_move_iterator(rows.begin() + 1), std::make_move_iterator(rows.end()));
  for (auto& r : t.rows) r.resize(t.header.size());
  return t;
}

std::string readTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeTextFileAtomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::PathNotWritable, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(Errc::Io, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace areal
