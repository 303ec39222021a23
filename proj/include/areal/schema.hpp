#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "areal/csv.hpp"

namespace areal {

/// Inclusive 1-based index range; `first == last` for a single row/column.
struct CellRange {
  int first = 1;
  int last = 1;

  int size() const { return last - first + 1; }
  bool single() const { return first == last; }
  friend bool operator==(const CellRange&, const CellRange&) = default;
};

std::string formatRange(const CellRange& r);
std::optional<CellRange> parseRange(std::string_view text);

enum class VarType { Id, Measured };

/// Where one variable sits in a messy table.
///  - measured: `col` lists the data columns.
///  - id with `row` and `col`: values run along a header row, one per data column.
///  - id with `col` only: one value per data row, optionally cut out by `split`
///    (the first capture group of the pattern).
///  - id with `dist`: a single cell (row, col) that holds one value for the
///    whole cluster.
///  - id with `value`: a constant not present in the sheet.
/// With `rel`, row/col count from the cluster origin (1 = origin row/col).
struct VariableSpec {
  std::string name;
  VarType type = VarType::Id;
  std::optional<CellRange> row;
  std::optional<CellRange> col;
  bool rel = false;
  bool dist = false;
  std::optional<std::string> split;
  std::optional<std::string> value;

  friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

/// A rectangular region; origin is its top-left cell. Without an explicit
/// size it extends to the sheet's last row/column.
struct Cluster {
  int top = 1;
  int left = 1;
  std::optional<int> height;
  std::optional<int> width;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct Schema {
  std::vector<Cluster> clusters{Cluster{}};
  std::vector<VariableSpec> variables;
  std::vector<std::string> naMarkers{"", "-"};

  friend bool operator==(const Schema&, const Schema&) = default;
};

/// Rectangular grid of cells; ragged input rows are padded with "".
class RawTable {
public:
  RawTable() = default;
  explicit RawTable(std::vector<Row> rows);

  static RawTable readCsv(const std::filesystem::path& path);

  int rows() const { return static_cast<int>(cells_.size()); }
  int cols() const { return cols_; }

  /// 1-based access.
  const std::string& at(int row, int col) const { return cells_[row - 1][col - 1]; }

private:
  std::vector<Row> cells_;
  int cols_ = 0;
};

enum class DiagCode {
  NoMeasuredVariable,
  NoIdVariable,
  DuplicateName,
  MissingPosition,
  SplitWithoutCol,
  BadSplitPattern,
  InvalidRange,
  AmbiguousPosition,
  WidthMismatch,
  OverlappingRoles,
  OriginOutOfBounds,
  RowOutOfBounds,
  ColOutOfBounds,
  MissingHeaderValue,
};

std::string_view diagCodeName(DiagCode code);

struct Diagnostic {
  DiagCode code;
  std::string variable;
  std::string message;
};

/// Structural checks that need no table.
std::vector<Diagnostic> checkSchema(const Schema& schema);

/// Empty iff `schema` can be executed against `raw`.
std::vector<Diagnostic> validateSchema(const Schema& schema, const RawTable& raw);

std::string formatDiagnostics(const std::vector<Diagnostic>& diags);

/// Long-format table: id variables (schema order), then measured variables.
struct TidyTable {
  struct Record {
    std::vector<std::string> ids;
    std::vector<std::optional<double>> values;
    int sourceRow = 0;  // sheet row of the observation
    int sourceCol = 0;  // sheet column of the first measured cell
  };

  std::vector<std::string> idNames;
  std::vector<std::string> measuredNames;
  std::vector<Record> rows;

  std::optional<std::size_t> idIndex(std::string_view name) const;
  std::vector<std::string> header() const;
};

/// Reshapes `raw` into a tidy table. Requires validateSchema(schema, raw)
/// to be empty (throws SchemaMismatch otherwise). Throws UnparseableNumber,
/// MissingIdValue or SplitMismatch with the offending cell address.
TidyTable reorganise(const RawTable& raw, const Schema& schema);

/// Declarative YAML form stored under adb_tables/meta/schemas.
std::string serialiseSchema(const Schema& schema);
Schema parseSchema(std::string_view text);
Schema loadSchema(const std::filesystem::path& path);

/// Console printout: cluster origins and a variable/type/row/col/rel/dist table.
std::string renderSchema(const Schema& schema);

}  // namespace areal
