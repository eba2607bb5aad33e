#include "bennett8_cli/spec_file.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "bennett8/errors.hpp"

namespace bennett8::cli {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& message, const std::string& field) {
  throw Error(ErrorCode::InvalidSpec, message, field);
}

class Reader {
 public:
  explicit Reader(const json& doc) : doc_(doc) {}

  double number(const std::string& key) {
    auto v = optional_number(key);
    if (!v) schema_error("missing field '" + key + "'", key);
    return *v;
  }

  std::optional<double> optional_number(const std::string& key) {
    used_.insert(key);
    if (!doc_.contains(key) || doc_.at(key).is_null()) return std::nullopt;
    const json& v = doc_.at(key);
    if (!v.is_number()) schema_error("field '" + key + "' must be a number", key);
    return v.get<double>();
  }

  Branch branch(const std::string& key) {
    auto v = optional_branch(key);
    if (!v) schema_error("missing field '" + key + "'", key);
    return *v;
  }

  std::optional<Branch> optional_branch(const std::string& key) {
    used_.insert(key);
    if (!doc_.contains(key) || doc_.at(key).is_null()) return std::nullopt;
    const json& v = doc_.at(key);
    if (!v.is_string()) schema_error("field '" + key + "' must be \"plus\" or \"minus\"", key);
    auto b = parse_branch(v.get<std::string>());
    if (!b) schema_error("field '" + key + "' must be \"plus\" or \"minus\"", key);
    return b;
  }

  void mark(const std::string& key) { used_.insert(key); }

  void reject_unknown() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!used_.count(key)) schema_error("unknown field '" + key + "'", key);
    }
  }

 private:
  const json& doc_;
  std::set<std::string> used_;
};

EightBarSpec read_angular(Reader& r) {
  EightBarSpec s;
  s.u1 = r.number("u1");
  s.u2 = r.number("u2");
  s.u3 = r.number("u3");
  s.beta1 = r.number("beta1");
  s.beta2 = r.number("beta2");
  s.beta3 = r.optional_number("beta3");
  s.branch1 = r.branch("branch1");
  s.branch2 = r.branch("branch2");
  s.branch3 = r.optional_branch("branch3");
  return s;
}

void write_angular(json& j, const EightBarSpec& s) {
  j["u1"] = s.u1;
  j["u2"] = s.u2;
  j["u3"] = s.u3;
  j["beta1"] = s.beta1;
  j["beta2"] = s.beta2;
  if (s.beta3) j["beta3"] = *s.beta3;
  j["branch1"] = to_string(s.branch1);
  j["branch2"] = to_string(s.branch2);
  if (s.branch3) j["branch3"] = to_string(*s.branch3);
}

}  // namespace

SpecDocument parse_spec(const json& doc) {
  if (!doc.is_object()) schema_error("spec must be a JSON object", "document");
  Reader r(doc);
  r.mark("schema_version");
  if (!doc.contains("schema_version")) schema_error("missing field 'schema_version'", "schema_version");
  const json& version = doc.at("schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    schema_error("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")", "schema_version");
  }
  r.mark("kind");
  if (!doc.contains("kind") || !doc.at("kind").is_string()) schema_error("missing string field 'kind'", "kind");

  SpecDocument out;
  out.kind = doc.at("kind").get<std::string>();
  r.mark("description");
  if (doc.contains("description")) {
    if (!doc.at("description").is_string()) schema_error("field 'description' must be a string", "description");
    out.description = doc.at("description").get<std::string>();
  }
  r.mark("derive");
  if (doc.contains("derive")) {
    if (!doc.at("derive").is_boolean()) schema_error("field 'derive' must be true or false", "derive");
    out.derive = doc.at("derive").get<bool>();
  }

  if (out.kind == "spherical8") {
    out.spec = read_angular(r);
  } else if (out.kind == "spatial8") {
    SpatialEightBarSpec s;
    s.angular = read_angular(r);
    s.a1 = r.number("a1");
    s.a2 = r.number("a2");
    s.b1 = r.optional_number("b1");
    s.b2 = r.optional_number("b2");
    s.b3 = r.optional_number("b3");
    out.spec = s;
  } else if (out.kind == "spherical-isogram") {
    SphericalIsogramSpec s;
    s.alpha = r.number("alpha");
    s.beta = r.number("beta");
    s.branch = r.branch("branch");
    out.spec = s;
  } else if (out.kind == "bennett-isogram") {
    BennettIsogramInput s;
    s.alpha = r.number("alpha");
    s.beta = r.number("beta");
    s.a = r.number("a");
    s.b = r.optional_number("b");
    s.branch = r.branch("branch");
    out.spec = s;
  } else {
    schema_error("unknown kind '" + out.kind + "'", "kind");
  }
  r.reject_unknown();
  return out;
}

SpecDocument load_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) schema_error("cannot open spec file " + path.string(), "file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    schema_error(std::string("spec file is not valid JSON: ") + e.what(), "file");
  }
  return parse_spec(doc);
}

json to_json(const SpecDocument& doc) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = doc.kind;
  if (doc.description) j["description"] = *doc.description;
  if (doc.derive) j["derive"] = true;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EightBarSpec>) {
          write_angular(j, s);
        } else if constexpr (std::is_same_v<T, SpatialEightBarSpec>) {
          write_angular(j, s.angular);
          j["a1"] = s.a1;
          j["a2"] = s.a2;
          if (s.b1) j["b1"] = *s.b1;
          if (s.b2) j["b2"] = *s.b2;
          if (s.b3) j["b3"] = *s.b3;
        } else if constexpr (std::is_same_v<T, SphericalIsogramSpec>) {
          j["alpha"] = s.alpha;
          j["beta"] = s.beta;
          j["branch"] = to_string(s.branch);
        } else {
          j["alpha"] = s.alpha;
          j["beta"] = s.beta;
          j["a"] = s.a;
          if (s.b) j["b"] = *s.b;
          j["branch"] = to_string(s.branch);
        }
      },
      doc.spec);
  return j;
}

SpecDocument derive_document(const SpecDocument& doc) {
  SpecDocument out = doc;
  out.derive = false;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EightBarSpec> || std::is_same_v<T, SpatialEightBarSpec>) {
          out.spec = derive_spec(s);
        } else if constexpr (std::is_same_v<T, SphericalIsogramSpec>) {
          transmission_coefficient(s);
        } else {
          BennettIsogramInput filled = s;
          if (!filled.b) {
            if (!(s.alpha > 0.0 && s.alpha < std::acos(-1.0))) {
              schema_error("alpha must lie in (0, pi)", "alpha in (0, pi)");
            }
            filled.b = bennett_offset(s.alpha, s.beta, s.a, s.branch);
          }
          out.spec = filled;
          bennett_isogram(out);
        }
      },
      doc.spec);
  return out;
}

EightBarGeometry spherical_geometry(const SpecDocument& doc) {
  const SpecDocument d = doc.derive ? derive_document(doc) : doc;
  const auto* s = std::get_if<EightBarSpec>(&d.spec);
  if (!s) schema_error("expected kind spherical8, got " + doc.kind, "kind");
  return validate_spec(*s);
}

SpatialEightBarGeometry spatial_geometry(const SpecDocument& doc) {
  const SpecDocument d = doc.derive ? derive_document(doc) : doc;
  const auto* s = std::get_if<SpatialEightBarSpec>(&d.spec);
  if (!s) schema_error("expected kind spatial8, got " + doc.kind, "kind");
  return validate_spec(*s);
}

SphericalIsogramSpec spherical_isogram(const SpecDocument& doc) {
  const auto* s = std::get_if<SphericalIsogramSpec>(&doc.spec);
  if (!s) schema_error("expected kind spherical-isogram, got " + doc.kind, "kind");
  transmission_coefficient(*s);
  return *s;
}

BennettIsogramSpec bennett_isogram(const SpecDocument& doc) {
  const SpecDocument d = doc.derive ? derive_document(doc) : doc;
  const auto* s = std::get_if<BennettIsogramInput>(&d.spec);
  if (!s) schema_error("expected kind bennett-isogram, got " + doc.kind, "kind");
  if (!s->b) schema_error("missing field 'b' (set derive to fill it in)", "b");
  if (!std::isfinite(*s->b)) schema_error("field 'b' must be finite", "b");
  BennettIsogramSpec out{s->alpha, s->beta, s->a, *s->b, s->branch};
  transmission_coefficient({out.alpha_twist, out.beta_twist, out.branch});
  if (!(out.a_len > 0.0)) schema_error("a must be positive", "a > 0");
  if (bennett_proportion_residual(out) > 1e-9) {
    schema_error("offsets violate a sin(beta) = " + std::string(out.branch == Branch::Plus ? "" : "-") +
                     "b sin(alpha)",
                 "proportion");
  }
  return out;
}

}  // namespace bennett8::cli
