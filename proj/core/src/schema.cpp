#include "triage/data/schema.hpp"

#include <set>

#include "jsonio.hpp"
#include "triage/common.hpp"

namespace triage::data {

using jsonio::json;

void FeatureSchema::validate() const {
  require(!basic_numeric.empty() || !basic_categorical.empty(), Errc::invalid_config,
          "schema needs at least one basic column");
  require(!advanced_numeric.empty(), Errc::invalid_config,
          "schema needs at least one advanced column");
  require(!label_column.empty(), Errc::invalid_config, "schema needs a label column");
  require(!advanced_available_column.empty(), Errc::invalid_config,
          "schema needs an advanced-availability indicator column");
  std::set<std::string> seen;
  auto check = [&seen](const std::string& name) {
    require(seen.insert(name).second, Errc::invalid_config,
            "column '" + name + "' appears in more than one feature group");
  };
  for (const auto& c : basic_numeric) check(c);
  for (const auto& c : basic_categorical) {
    check(c.name);
    require(!c.categories.empty(), Errc::invalid_config,
            "categorical column '" + c.name + "' has no allowed categories");
  }
  for (const auto& c : advanced_numeric) check(c);
  require(!seen.contains(label_column), Errc::invalid_config,
          "label column overlaps a feature group");
  require(!seen.contains(advanced_available_column), Errc::invalid_config,
          "availability column overlaps a feature group");
}

namespace {

json schema_to_json(const FeatureSchema& s) {
  json j;
  j["basic_numeric"] = s.basic_numeric;
  json cats = json::array();
  for (const auto& c : s.basic_categorical)
    cats.push_back(json{{"name", c.name}, {"categories", c.categories}});
  j["basic_categorical"] = std::move(cats);
  j["advanced_numeric"] = s.advanced_numeric;
  j["label_column"] = s.label_column;
  json demos = json::array();
  for (const auto& d : s.demographics)
    demos.push_back(json{{"name", d.name},
                         {"kind", d.kind == DemoKind::numeric ? "numeric" : "categorical"}});
  j["demographic_columns"] = std::move(demos);
  j["advanced_available_column"] = s.advanced_available_column;
  j["id_column"] = s.id_column;
  return j;
}

FeatureSchema schema_from_json(const json& j) {
  FeatureSchema s;
  s.basic_numeric = j.at("basic_numeric").get<std::vector<std::string>>();
  for (const auto& c : j.at("basic_categorical")) {
    s.basic_categorical.push_back(
        {c.at("name").get<std::string>(), c.at("categories").get<std::vector<std::string>>()});
  }
  s.advanced_numeric = j.at("advanced_numeric").get<std::vector<std::string>>();
  s.label_column = j.at("label_column").get<std::string>();
  for (const auto& d : j.at("demographic_columns")) {
    const auto kind = d.at("kind").get<std::string>();
    require(kind == "numeric" || kind == "categorical", Errc::invalid_config,
            "demographic kind must be numeric or categorical");
    s.demographics.push_back({d.at("name").get<std::string>(),
                              kind == "numeric" ? DemoKind::numeric : DemoKind::categorical});
  }
  s.advanced_available_column = j.at("advanced_available_column").get<std::string>();
  s.id_column = j.value("id_column", std::string("id"));
  s.validate();
  return s;
}

}  // namespace

std::string FeatureSchema::fingerprint() const {
  return to_hex(fnv1a64(schema_to_json(*this).dump()));
}

FeatureSchema load_schema(const std::filesystem::path& path) {
  return schema_from_json(jsonio::read_json_file(path));
}

void save_schema(const FeatureSchema& schema, const std::filesystem::path& path) {
  jsonio::write_json_file(path, schema_to_json(schema));
}

FeatureSchema default_clinical_schema() {
  FeatureSchema s;
  s.basic_numeric = {"age", "education_years", "mmse", "adas11", "cdr_global"};
  s.basic_categorical = {
      {"gender", {"female", "male"}},
      {"race", {"white", "black", "asian", "other"}},
      {"apoe4_count", {"0", "1", "2"}},
      {"apoe2_carrier", {"0", "1"}},
  };
  s.advanced_numeric.reserve(329);
  for (int i = 1; i <= 329; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "adv_%03d", i);
    s.advanced_numeric.emplace_back(buf);
  }
  s.label_column = "converted_2y";
  s.demographics = {
      {"age", DemoKind::numeric},           {"education_years", DemoKind::numeric},
      {"gender", DemoKind::categorical},    {"race", DemoKind::categorical},
      {"apoe4_count", DemoKind::categorical}, {"apoe2_carrier", DemoKind::categorical},
  };
  s.advanced_available_column = "has_advanced";
  s.id_column = "id";
  return s;
}

}  // namespace triage::data
