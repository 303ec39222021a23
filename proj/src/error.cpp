#include "areal/error.hpp"

namespace areal {

std::string_view errcName(Errc code) {
  switch (code) {
    case Errc::PathNotWritable: return "PathNotWritable";
    case Errc::CorruptLayout: return "CorruptLayout";
    case Errc::CorruptInventory: return "CorruptInventory";
    case Errc::DuplicateVariable: return "DuplicateVariable";
    case Errc::MalformedIndexTable: return "MalformedIndexTable";
    case Errc::WriterLocked: return "WriterLocked";
    case Errc::MissingField: return "MissingField";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DuplicateDataseries: return "DuplicateDataseries";
    case Errc::UnknownDataseries: return "UnknownDataseries";
    case Errc::UnknownGeometry: return "UnknownGeometry";
    case Errc::UnreadableGeometry: return "UnreadableGeometry";
    case Errc::NameColumnMissing: return "NameColumnMissing";
    case Errc::BadYearRange: return "BadYearRange";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::StageNameConflict: return "StageNameConflict";
    case Errc::UnknownNation: return "UnknownNation";
    case Errc::ParseError: return "ParseError";
    case Errc::UnparseableNumber: return "UnparseableNumber";
    case Errc::MissingIdValue: return "MissingIdValue";
    case Errc::SplitMismatch: return "SplitMismatch";
    case Errc::UnresolvedInNonInteractive: return "UnresolvedInNonInteractive";
    case Errc::ConflictingTranslation: return "ConflictingTranslation";
    case Errc::TargetNotInIndex: return "TargetNotInIndex";
    case Errc::TooManySiblings: return "TooManySiblings";
    case Errc::DuplicateSibling: return "DuplicateSibling";
    case Errc::UnresolvedUnits: return "UnresolvedUnits";
    case Errc::LevelMissing: return "LevelMissing";
    case Errc::UnknownSourceCrs: return "UnknownSourceCrs";
    case Errc::DegenerateGeometry: return "DegenerateGeometry";
    case Errc::InvalidGeometry: return "InvalidGeometry";
    case Errc::GeometryNotNormalised: return "GeometryNotNormalised";
    case Errc::UnresolvedConcepts: return "UnresolvedConcepts";
    case Errc::OutputColumnMismatch: return "OutputColumnMismatch";
    case Errc::ItemNotFound: return "ItemNotFound";
    case Errc::ItemNotPending: return "ItemNotPending";
    case Errc::InvalidScope: return "InvalidScope";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errcName(code)) + ": " + message), code_(code) {}

bool isUnresolvedError(Errc code) {
  return code == Errc::UnresolvedInNonInteractive || code == Errc::UnresolvedUnits ||
         code == Errc::UnresolvedConcepts;
}

}  // namespace areal
