#include "areal/schema.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "areal/error.hpp"
#include "areal/text.hpp"

namespace areal {

std::string formatRange(const CellRange& r) {
  return r.single() ? std::to_string(r.first) : std::to_string(r.first) + ":" + std::to_string(r.last);
}

std::optional<CellRange> parseRange(std::string_view text) {
  const auto t = text::trim(text);
  const auto colon = t.find(':');
  if (colon == std::string::npos) {
    auto v = text::parseInteger(t);
    if (!v) return std::nullopt;
    return CellRange{static_cast<int>(*v), static_cast<int>(*v)};
  }
  auto a = text::parseInteger(std::string_view(t).substr(0, colon));
  auto b = text::parseInteger(std::string_view(t).substr(colon + 1));
  if (!a || !b) return std::nullopt;
  return CellRange{static_cast<int>(*a), static_cast<int>(*b)};
}

RawTable::RawTable(std::vector<Row> rows) : cells_(std::move(rows)) {
  for (const auto& r : cells_) cols_ = std::max(cols_, static_cast<int>(r.size()));
  for (auto& r : cells_) r.resize(static_cast<std::size_t>(cols_));
}

RawTable RawTable::readCsv(const std::filesystem::path& path) {
  const auto content = readTextFile(path);
  return RawTable(csv::parse(content, csv::sniffDelimiter(content)));
}

std::string_view diagCodeName(DiagCode code) {
  switch (code) {
    case DiagCode::NoMeasuredVariable: return "NoMeasuredVariable";
    case DiagCode::NoIdVariable: return "NoIdVariable";
    case DiagCode::DuplicateName: return "DuplicateName";
    case DiagCode::MissingPosition: return "MissingPosition";
    case DiagCode::SplitWithoutCol: return "SplitWithoutCol";
    case DiagCode::BadSplitPattern: return "BadSplitPattern";
    case DiagCode::InvalidRange: return "InvalidRange";
    case DiagCode::AmbiguousPosition: return "AmbiguousPosition";
    case DiagCode::WidthMismatch: return "WidthMismatch";
    case DiagCode::OverlappingRoles: return "OverlappingRoles";
    case DiagCode::OriginOutOfBounds: return "OriginOutOfBounds";
    case DiagCode::RowOutOfBounds: return "RowOutOfBounds";
    case DiagCode::ColOutOfBounds: return "ColOutOfBounds";
    case DiagCode::MissingHeaderValue: return "MissingHeaderValue";
  }
  return "Unknown";
}

std::string formatDiagnostics(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    out += std::string(diagCodeName(d.code));
    if (!d.variable.empty()) out += " [" + d.variable + "]";
    out += ": " + d.message + "\n";
  }
  return out;
}

std::optional<std::size_t> TidyTable::idIndex(std::string_view name) const {
  for (std::size_t i = 0; i < idNames.size(); ++i)
    if (idNames[i] == name) return i;
  return std::nullopt;
}

std::vector<std::string> TidyTable::header() const {
  auto h = idNames;
  h.insert(h.end(), measuredNames.begin(), measuredNames.end());
  return h;
}

namespace {

enum class Role { Measured, Header, Column, Dist, Constant };

Role roleOf(const VariableSpec& v) {
  if (v.type == VarType::Measured) return Role::Measured;
  if (v.value) return Role::Constant;
  if (v.dist) return Role::Dist;
  if (v.row) return Role::Header;
  return Role::Column;
}

std::string cellAddress(int row, int col) { return "row " + std::to_string(row) + ", col " + std::to_string(col); }

/// Positions of one cluster, resolved to absolute sheet coordinates.
struct Placement {
  int top = 1, left = 1, bottom = 0, right = 0;
  int firstDataRow = 1;
  int width = 1;  // measured columns per data row
  std::vector<std::optional<CellRange>> rows, cols;
};

CellRange absolute(const CellRange& r, bool rel, int origin) {
  return rel ? CellRange{origin + r.first - 1, origin + r.last - 1} : r;
}

Placement place(const Schema& schema, const Cluster& cluster, int sheetRows, int sheetCols) {
  Placement p;
  p.top = cluster.top;
  p.left = cluster.left;
  p.bottom = cluster.height ? cluster.top + *cluster.height - 1 : sheetRows;
  p.right = cluster.width ? cluster.left + *cluster.width - 1 : sheetCols;
  int lastHeader = p.top - 1;
  for (const auto& v : schema.variables) {
    p.rows.push_back(v.row ? std::optional(absolute(*v.row, v.rel, p.top)) : std::nullopt);
    p.cols.push_back(v.col ? std::optional(absolute(*v.col, v.rel, p.left)) : std::nullopt);
    if ((roleOf(v) == Role::Header || roleOf(v) == Role::Dist) && p.rows.back()) lastHeader = std::max(lastHeader, p.rows.back()->last);
    if (roleOf(v) == Role::Measured && p.cols.back()) p.width = p.cols.back()->size();
  }
  p.firstDataRow = std::max(p.top, lastHeader + 1);
  return p;
}

bool isMissing(const Schema& schema, std::string_view cell) {
  const auto t = text::trim(cell);
  return std::find(schema.naMarkers.begin(), schema.naMarkers.end(), t) != schema.naMarkers.end();
}

}  // namespace

std::vector<Diagnostic> checkSchema(const Schema& schema) {
  std::vector<Diagnostic> out;
  auto report = [&](DiagCode c, const std::string& var, std::string msg) { out.push_back({c, var, std::move(msg)}); };

  if (schema.clusters.empty()) report(DiagCode::OriginOutOfBounds, "", "schema has no cluster");
  for (const auto& c : schema.clusters) {
    if (c.top < 1 || c.left < 1) report(DiagCode::OriginOutOfBounds, "", "cluster origin must be ≥ 1|1");
    if ((c.height && *c.height < 1) || (c.width && *c.width < 1))
      report(DiagCode::InvalidRange, "", "cluster size must be positive");
  }

  int measured = 0, ids = 0;
  std::set<std::string> names;
  std::optional<int> width;
  for (const auto& v : schema.variables) {
    if (v.name.empty()) report(DiagCode::MissingPosition, "", "variable without a name");
    if (!names.insert(v.name).second) report(DiagCode::DuplicateName, v.name, "variable declared twice");
    for (const auto* r : {&v.row, &v.col})
      if (*r && ((*r)->first < 1 || (*r)->last < (*r)->first))
        report(DiagCode::InvalidRange, v.name, "range " + formatRange(**r) + " is not a valid 1-based range");
    if (v.split) {
      if (!v.col) report(DiagCode::SplitWithoutCol, v.name, "split requires col");
      try {
        std::regex re(*v.split);
        if (re.mark_count() < 1) report(DiagCode::BadSplitPattern, v.name, "split pattern has no capture group");
      } catch (const std::regex_error& e) {
        report(DiagCode::BadSplitPattern, v.name, std::string("split pattern does not compile: ") + e.what());
      }
    }
    if (v.type == VarType::Measured) {
      ++measured;
      if (!v.col) report(DiagCode::MissingPosition, v.name, "measured variable needs col");
      if (v.row || v.value || v.split || v.dist)
        report(DiagCode::AmbiguousPosition, v.name, "measured variable takes only col (and rel)");
      if (v.col) {
        if (width && *width != v.col->size())
          report(DiagCode::WidthMismatch, v.name, "measured variables span different numbers of columns");
        width = v.col->size();
      }
      continue;
    }
    ++ids;
    if (!v.row && !v.col && !v.split && !v.value)
      report(DiagCode::MissingPosition, v.name, "id variable needs row, col, split or value");
    if (v.value && (v.row || v.col || v.split))
      report(DiagCode::AmbiguousPosition, v.name, "a constant value excludes row/col/split");
    if (v.dist && !v.value && (!v.row || !v.col || !v.row->single() || !v.col->single()))
      report(DiagCode::AmbiguousPosition, v.name, "dist variable needs a single (row, col) cell");
    if (!v.dist && !v.value && v.row && !v.row->single())
      report(DiagCode::AmbiguousPosition, v.name, "header-row variable must sit in a single row");
    if (!v.dist && !v.value && v.row && !v.col)
      report(DiagCode::MissingPosition, v.name, "header-row variable needs col");
    if (!v.dist && !v.value && !v.row && v.col && !v.col->single())
      report(DiagCode::AmbiguousPosition, v.name, "column id variable must sit in a single column");
    if (v.split && v.row) report(DiagCode::AmbiguousPosition, v.name, "split applies to column variables only");
  }
  if (measured == 0) report(DiagCode::NoMeasuredVariable, "", "at least one measured variable is required");
  if (ids == 0) report(DiagCode::NoIdVariable, "", "at least one id variable is required");
  if (!out.empty()) return out;

  // role disjointness, checked in origin-relative terms per cluster
  for (const auto& cluster : schema.clusters) {
    const auto p = place(schema, cluster, cluster.top + 1'000'000, cluster.left + 1'000'000);
    std::map<int, std::string> measuredCols;
    for (std::size_t i = 0; i < schema.variables.size(); ++i) {
      const auto& v = schema.variables[i];
      if (roleOf(v) != Role::Measured) continue;
      for (int c = p.cols[i]->first; c <= p.cols[i]->last; ++c) {
        auto [it, fresh] = measuredCols.emplace(c, v.name);
        if (!fresh)
          report(DiagCode::OverlappingRoles, v.name, "column " + std::to_string(c) + " also holds " + it->second);
      }
    }
    std::map<std::pair<int, int>, std::string> headerCells;
    std::map<int, std::string> plainCols;
    for (std::size_t i = 0; i < schema.variables.size(); ++i) {
      const auto& v = schema.variables[i];
      const auto role = roleOf(v);
      if (role == Role::Header) {
        if (p.cols[i]->size() != p.width)
          report(DiagCode::WidthMismatch, v.name,
                 "header values span " + std::to_string(p.cols[i]->size()) + " columns but measured span " +
                     std::to_string(p.width));
        for (int c = p.cols[i]->first; c <= p.cols[i]->last; ++c) {
          auto [it, fresh] = headerCells.emplace(std::pair{p.rows[i]->first, c}, v.name);
          if (!fresh)
            report(DiagCode::OverlappingRoles, v.name,
                   cellAddress(p.rows[i]->first, c) + " also holds " + it->second);
        }
      } else if (role == Role::Column) {
        const int c = p.cols[i]->first;
        if (measuredCols.count(c))
          report(DiagCode::OverlappingRoles, v.name, "column " + std::to_string(c) + " holds measured values");
        // two variables may share a column only if each cuts its part out with split
        if (auto it = plainCols.find(c); it != plainCols.end() && !v.split)
          report(DiagCode::OverlappingRoles, v.name, "column " + std::to_string(c) + " also holds " + it->second);
        if (!v.split) plainCols.emplace(c, v.name);
      } else if (role == Role::Dist) {
        if (p.rows[i]->first >= p.firstDataRow && measuredCols.count(p.cols[i]->first))
          report(DiagCode::OverlappingRoles, v.name, "dist cell lies inside the data region");
      }
    }
    for (std::size_t i = 0; i < schema.variables.size(); ++i) {
      const auto& v = schema.variables[i];
      if (roleOf(v) != Role::Column || !v.split) continue;
      if (auto it = plainCols.find(p.cols[i]->first); it != plainCols.end())
        report(DiagCode::OverlappingRoles, v.name,
               "column " + std::to_string(p.cols[i]->first) + " also holds " + it->second);
    }
  }
  return out;
}

std::vector<Diagnostic> validateSchema(const Schema& schema, const RawTable& raw) {
  auto out = checkSchema(schema);
  if (!out.empty()) return out;
  auto report = [&](DiagCode c, const std::string& var, std::string msg) { out.push_back({c, var, std::move(msg)}); };

  for (std::size_t ci = 0; ci < schema.clusters.size(); ++ci) {
    const auto& cluster = schema.clusters[ci];
    const std::string where = schema.clusters.size() > 1 ? " (cluster " + std::to_string(ci + 1) + ")" : "";
    if (cluster.top > raw.rows() || cluster.left > raw.cols()) {
      report(DiagCode::OriginOutOfBounds, "",
             "origin " + std::to_string(cluster.top) + "|" + std::to_string(cluster.left) + " lies outside the " +
                 std::to_string(raw.rows()) + "x" + std::to_string(raw.cols()) + " table" + where);
      continue;
    }
    const auto p = place(schema, cluster, raw.rows(), raw.cols());
    if (p.bottom > raw.rows() || p.right > raw.cols()) {
      report(DiagCode::OriginOutOfBounds, "", "cluster extends beyond the table" + where);
      continue;
    }
    for (std::size_t i = 0; i < schema.variables.size(); ++i) {
      const auto& v = schema.variables[i];
      if (p.rows[i] && (p.rows[i]->first < p.top || p.rows[i]->last > p.bottom))
        report(DiagCode::RowOutOfBounds, v.name, "row " + formatRange(*p.rows[i]) + " lies outside the cluster" + where);
      if (p.cols[i] && (p.cols[i]->first < p.left || p.cols[i]->last > p.right))
        report(DiagCode::ColOutOfBounds, v.name, "col " + formatRange(*p.cols[i]) + " lies outside the cluster" + where);
    }
    if (!out.empty()) continue;
    for (std::size_t i = 0; i < schema.variables.size(); ++i) {
      const auto& v = schema.variables[i];
      const auto role = roleOf(v);
      if (role == Role::Header) {
        for (int c = p.cols[i]->first; c <= p.cols[i]->last; ++c)
          if (isMissing(schema, raw.at(p.rows[i]->first, c)))
            report(DiagCode::MissingHeaderValue, v.name, "no value at " + cellAddress(p.rows[i]->first, c) + where);
      } else if (role == Role::Dist) {
        if (isMissing(schema, raw.at(p.rows[i]->first, p.cols[i]->first)))
          report(DiagCode::MissingHeaderValue, v.name,
                 "no value at " + cellAddress(p.rows[i]->first, p.cols[i]->first) + where);
      }
    }
  }
  return out;
}

TidyTable reorganise(const RawTable& raw, const Schema& schema) {
  if (auto diags = validateSchema(schema, raw); !diags.empty())
    throw Error(Errc::SchemaMismatch, formatDiagnostics(diags));

  TidyTable tidy;
  std::vector<std::size_t> idVars, measuredVars;
  for (std::size_t i = 0; i < schema.variables.size(); ++i) {
    if (schema.variables[i].type == VarType::Measured) {
      measuredVars.push_back(i);
      tidy.measuredNames.push_back(schema.variables[i].name);
    } else {
      idVars.push_back(i);
      tidy.idNames.push_back(schema.variables[i].name);
    }
  }
  std::vector<std::optional<std::regex>> patterns(schema.variables.size());
  for (std::size_t i = 0; i < schema.variables.size(); ++i)
    if (schema.variables[i].split) patterns[i].emplace(*schema.variables[i].split);

  for (const auto& cluster : schema.clusters) {
    const auto p = place(schema, cluster, raw.rows(), raw.cols());

    // cluster-wide values
    std::vector<std::string> fixed(schema.variables.size());
    for (auto i : idVars) {
      const auto& v = schema.variables[i];
      if (roleOf(v) == Role::Constant) fixed[i] = *v.value;
      if (roleOf(v) == Role::Dist) fixed[i] = text::trim(raw.at(p.rows[i]->first, p.cols[i]->first));
    }

    for (int r = p.firstDataRow; r <= p.bottom; ++r) {
      for (int k = 0; k < p.width; ++k) {
        TidyTable::Record rec;
        rec.sourceRow = r;
        bool any = false;
        for (auto i : measuredVars) {
          const int c = p.cols[i]->first + k;
          if (rec.sourceCol == 0) rec.sourceCol = c;
          const auto& cell = raw.at(r, c);
          if (isMissing(schema, cell)) {
            rec.values.emplace_back();
            continue;
          }
          auto number = text::parseNumber(cell);
          if (!number)
            throw Error(Errc::UnparseableNumber, "'" + cell + "' at " + cellAddress(r, c) + " (" +
                                                     schema.variables[i].name + ") is not a number");
          rec.values.emplace_back(*number);
          any = true;
        }
        if (!any) continue;

        for (auto i : idVars) {
          const auto& v = schema.variables[i];
          switch (roleOf(v)) {
            case Role::Constant:
            case Role::Dist:
              rec.ids.push_back(fixed[i]);
              break;
            case Role::Header:
              rec.ids.push_back(text::trim(raw.at(p.rows[i]->first, p.cols[i]->first + k)));
              break;
            case Role::Column: {
              const int c = p.cols[i]->first;
              const auto& cell = raw.at(r, c);
              if (isMissing(schema, cell))
                throw Error(Errc::MissingIdValue, v.name + " has no value at " + cellAddress(r, c));
              auto value = text::trim(cell);
              if (patterns[i]) {
                std::smatch m;
                if (!std::regex_match(value, m, *patterns[i]) || !m[1].matched)
                  throw Error(Errc::SplitMismatch, "'" + value + "' at " + cellAddress(r, c) +
                                                       " does not match split pattern of " + v.name);
                value = text::trim(m[1].str());
                if (value.empty())
                  throw Error(Errc::MissingIdValue, v.name + " splits to an empty value at " + cellAddress(r, c));
              }
              rec.ids.push_back(std::move(value));
              break;
            }
            case Role::Measured:
              break;
          }
        }
        tidy.rows.push_back(std::move(rec));
      }
    }
  }
  return tidy;
}

// --- serialisation ----------------------------------------------------------

std::string serialiseSchema(const Schema& schema) {
  auto emitRange = [](YAML::Emitter& e, const CellRange& r) {
    if (r.single()) {
      e << r.first;
    } else {
      e << YAML::DoubleQuoted << formatRange(r);
    }
  };

  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "clusters" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : schema.clusters) {
    e << YAML::BeginMap;
    e << YAML::Key << "origin" << YAML::Value << YAML::DoubleQuoted
      << (std::to_string(c.top) + "|" + std::to_string(c.left));
    if (c.height) e << YAML::Key << "height" << YAML::Value << *c.height;
    if (c.width) e << YAML::Key << "width" << YAML::Value << *c.width;
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::Key << "na_markers" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& m : schema.naMarkers) e << YAML::DoubleQuoted << m;
  e << YAML::EndSeq;
  e << YAML::Key << "variables" << YAML::Value << YAML::BeginSeq;
  for (const auto& v : schema.variables) {
    e << YAML::BeginMap;
    e << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << v.name;
    e << YAML::Key << "type" << YAML::Value << (v.type == VarType::Id ? "id" : "measured");
    if (v.row) {
      e << YAML::Key << "row" << YAML::Value;
      emitRange(e, *v.row);
    }
    if (v.col) {
      e << YAML::Key << "col" << YAML::Value;
      emitRange(e, *v.col);
    }
    e << YAML::Key << "rel" << YAML::Value << v.rel;
    e << YAML::Key << "dist" << YAML::Value << v.dist;
    if (v.split) e << YAML::Key << "split" << YAML::Value << YAML::SingleQuoted << *v.split;
    if (v.value) e << YAML::Key << "value" << YAML::Value << YAML::DoubleQuoted << *v.value;
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

namespace {

[[noreturn]] void parseFail(const YAML::Node& node, const std::string& what) {
  const auto mark = node.Mark();
  const std::string where = mark.is_null() ? "" : "line " + std::to_string(mark.line + 1) + ": ";
  throw Error(Errc::ParseError, where + what);
}

CellRange rangeField(const YAML::Node& node, const std::string& field) {
  auto r = parseRange(node.as<std::string>());
  if (!r) parseFail(node, field + " must be an index or first:last range, got '" + node.as<std::string>() + "'");
  return *r;
}

bool boolField(const YAML::Node& node, const std::string& field) {
  const auto s = node.as<std::string>();
  if (s == "true" || s == "T" || s == "TRUE") return true;
  if (s == "false" || s == "F" || s == "FALSE") return false;
  parseFail(node, field + " must be true or false, got '" + s + "'");
}

}  // namespace

Schema parseSchema(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw Error(Errc::ParseError, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw Error(Errc::ParseError, "schema must be a mapping");

  Schema schema;
  try {
    for (const auto& kv : root) {
      const auto key = kv.first.as<std::string>();
      if (key != "clusters" && key != "na_markers" && key != "variables")
        parseFail(kv.first, "unknown field '" + key + "'");
    }
    if (auto clusters = root["clusters"]) {
      if (!clusters.IsSequence() || clusters.size() == 0) parseFail(clusters, "clusters must be a non-empty list");
      schema.clusters.clear();
      for (const auto& c : clusters) {
        Cluster cl;
        for (const auto& kv : c) {
          const auto key = kv.first.as<std::string>();
          if (key == "origin") {
            const auto parts = text::split(kv.second.as<std::string>(), '|');
            auto top = parts.size() == 2 ? text::parseInteger(text::trim(parts[0])) : std::nullopt;
            auto left = parts.size() == 2 ? text::parseInteger(text::trim(parts[1])) : std::nullopt;
            if (!top || !left) parseFail(kv.second, "origin must read top|left");
            cl.top = static_cast<int>(*top);
            cl.left = static_cast<int>(*left);
          } else if (key == "height") {
            cl.height = kv.second.as<int>();
          } else if (key == "width") {
            cl.width = kv.second.as<int>();
          } else {
            parseFail(kv.first, "unknown cluster field '" + key + "'");
          }
        }
        schema.clusters.push_back(cl);
      }
    }
    if (auto markers = root["na_markers"]) {
      if (!markers.IsSequence()) parseFail(markers, "na_markers must be a list");
      schema.naMarkers.clear();
      for (const auto& m : markers) schema.naMarkers.push_back(m.IsNull() ? "" : m.as<std::string>());
    }
    const auto vars = root["variables"];
    if (!vars || !vars.IsSequence()) throw Error(Errc::ParseError, "variables must be a list");
    for (const auto& node : vars) {
      if (!node.IsMap()) parseFail(node, "variable entries must be mappings");
      VariableSpec v;
      bool hasType = false;
      for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        const auto& val = kv.second;
        if (key == "name") {
          v.name = val.as<std::string>();
        } else if (key == "type") {
          const auto t = val.as<std::string>();
          if (t == "id") {
            v.type = VarType::Id;
          } else if (t == "measured") {
            v.type = VarType::Measured;
          } else {
            parseFail(val, "type must be id or measured, got '" + t + "'");
          }
          hasType = true;
        } else if (key == "row") {
          v.row = rangeField(val, "row");
        } else if (key == "col") {
          v.col = rangeField(val, "col");
        } else if (key == "rel") {
          v.rel = boolField(val, "rel");
        } else if (key == "dist") {
          v.dist = boolField(val, "dist");
        } else if (key == "split") {
          v.split = val.as<std::string>();
        } else if (key == "value") {
          v.value = val.as<std::string>();
        } else {
          parseFail(kv.first, "unknown variable field '" + key + "'");
        }
      }
      if (v.name.empty()) parseFail(node, "variable without name");
      if (!hasType) parseFail(node, "variable '" + v.name + "' has no type");
      schema.variables.push_back(std::move(v));
    }
  } catch (const YAML::Exception& e) {
    throw Error(Errc::ParseError, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  return schema;
}

Schema loadSchema(const std::filesystem::path& path) {
  try {
    return parseSchema(readTextFile(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string renderSchema(const Schema& schema) {
  bool anySplit = false, anyValue = false;
  for (const auto& v : schema.variables) {
    anySplit = anySplit || v.split.has_value();
    anyValue = anyValue || v.value.has_value();
  }

  std::vector<int> widths{13, 8, 5, 6, 5, 6};
  std::vector<std::string> titles{"variable", "type", "row", "col", "rel", "dist"};
  if (anySplit) {
    widths.push_back(16);
    titles.emplace_back("split");
  }
  if (anyValue) {
    widths.push_back(10);
    titles.emplace_back("value");
  }

  auto line = [&](const std::vector<std::string>& cells) {
    std::string out = "  ";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::string cell = " " + cells[i];
      if (i + 1 < cells.size()) {
        const auto pad = static_cast<std::size_t>(widths[i]) + 1;
        if (cell.size() < pad) cell.append(pad - cell.size(), ' ');
        else cell.push_back(' ');
      }
      out += cell;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };

  std::ostringstream ss;
  ss << "  " << schema.clusters.size() << (schema.clusters.size() == 1 ? " cluster" : " clusters") << "\n";
  for (const auto& c : schema.clusters) {
    ss << "    origin: " << c.top << "|" << c.left << "  (top|left)";
    if (c.height || c.width)
      ss << "  size: " << (c.height ? std::to_string(*c.height) : "*") << "x"
         << (c.width ? std::to_string(*c.width) : "*");
    ss << "\n";
  }
  ss << "\n" << line(titles);
  std::string rule = "  ";
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (i) rule += " ";
    rule.append(static_cast<std::size_t>(widths[i]), '-');
  }
  ss << rule << "\n";
  for (const auto& v : schema.variables) {
    std::vector<std::string> cells{v.name,
                                   v.type == VarType::Id ? "id" : "measured",
                                   v.row ? formatRange(*v.row) : "",
                                   v.col ? formatRange(*v.col) : "",
                                   v.rel ? "T" : "F",
                                   v.dist ? "T" : "F"};
    if (anySplit) cells.push_back(v.split.value_or(""));
    if (anyValue) cells.push_back(v.value.value_or(""));
    ss << line(cells);
  }
  return ss.str();
}

}  // namespace areal
