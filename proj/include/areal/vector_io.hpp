#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "areal/geometry.hpp"

namespace areal::vec {

enum class FieldType { Text, Integer, Real };

struct Field {
  std::string name;
  FieldType type = FieldType::Text;
};

struct Feature {
  std::vector<std::string> values;  // one per field, "" for null
  geom::MultiPolygon geometry;
};

/// Polygon layer with text-valued attributes.
struct FeatureCollection {
  std::string layer;
  std::vector<Field> fields;
  std::vector<Feature> features;
  std::optional<int> epsg;  // absent when the file does not say

  std::optional<std::size_t> field(std::string_view name) const;
  const std::string& value(std::size_t feature, std::string_view name) const;
};

enum class Format { GeoPackage, GeoJson };

/// By extension (.gpkg, .geojson, .json); throws UnreadableGeometry.
Format formatOf(const std::filesystem::path& path);
std::string_view extensionOf(Format format);

/// Throws UnreadableGeometry. For GeoPackages `layer` selects a feature
/// table (the first one by default).
FeatureCollection read(const std::filesystem::path& path, std::string_view layer = {});

/// Replaces the file.
void write(const std::filesystem::path& path, const FeatureCollection& fc);

/// Adds features to an existing layer (created when absent). Fields must
/// match the existing layer.
void append(const std::filesystem::path& path, const FeatureCollection& fc);

}  // namespace areal::vec
