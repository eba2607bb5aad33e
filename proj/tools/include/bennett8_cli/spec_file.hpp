#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "json.hpp"

#include "bennett8/isogram.hpp"
#include "bennett8/linkage.hpp"

namespace bennett8::cli {

inline constexpr int kSchemaVersion = 1;

// Bennett cell as written in a spec file: the arm offset may be left out
// when derivation is requested.
struct BennettIsogramInput {
  double alpha = 0.0, beta = 0.0, a = 0.0;
  std::optional<double> b;
  Branch branch = Branch::Plus;
};

using SpecVariant = std::variant<EightBarSpec, SpatialEightBarSpec, SphericalIsogramSpec, BennettIsogramInput>;

struct SpecDocument {
  std::string kind;  // spherical8 | spatial8 | spherical-isogram | bennett-isogram
  std::optional<std::string> description;
  bool derive = false;
  SpecVariant spec;
};

// Throws bennett8::Error(InvalidSpec) on schema violations, naming the field.
SpecDocument parse_spec(const nlohmann::json& doc);
SpecDocument load_spec_file(const std::filesystem::path& path);
nlohmann::json to_json(const SpecDocument& doc);

// Completes missing derived fields (third isogram, offsets).
SpecDocument derive_document(const SpecDocument& doc);

// Validated forms; the document is derived first when its derive flag is set.
EightBarGeometry spherical_geometry(const SpecDocument& doc);
SpatialEightBarGeometry spatial_geometry(const SpecDocument& doc);
SphericalIsogramSpec spherical_isogram(const SpecDocument& doc);
BennettIsogramSpec bennett_isogram(const SpecDocument& doc);

}  // namespace bennett8::cli
