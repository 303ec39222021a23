#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace areal {

enum class Errc {
  // inventory
  PathNotWritable,
  CorruptLayout,
  CorruptInventory,
  DuplicateVariable,
  MalformedIndexTable,
  WriterLocked,
  // registration
  MissingField,
  InvalidArgument,
  DuplicateDataseries,
  UnknownDataseries,
  UnknownGeometry,
  UnreadableGeometry,
  NameColumnMissing,
  BadYearRange,
  SchemaMismatch,
  StageNameConflict,
  UnknownNation,
  // schema
  ParseError,
  UnparseableNumber,
  MissingIdValue,
  SplitMismatch,
  // translation
  UnresolvedInNonInteractive,
  ConflictingTranslation,
  TargetNotInIndex,
  // gazetteer
  TooManySiblings,
  DuplicateSibling,
  UnresolvedUnits,
  LevelMissing,
  // geometry
  UnknownSourceCrs,
  DegenerateGeometry,
  InvalidGeometry,
  // normalize
  GeometryNotNormalised,
  UnresolvedConcepts,
  OutputColumnMismatch,
  // review
  ItemNotFound,
  ItemNotPending,
  InvalidScope,
  Io,
};

std::string_view errcName(Errc code);

/// Errors raised by the library. The code is stable; the message carries
/// file/row/column context where one exists.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

/// True for the error codes that represent unresolved items in strict mode.
bool isUnresolvedError(Errc code);

}  // namespace areal
