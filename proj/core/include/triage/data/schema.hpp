#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace triage::data {

struct CategoricalColumn {
  std::string name;
  std::vector<std::string> categories;  // allowed tokens, load-time validation set
};

enum class DemoKind { numeric, categorical };

struct DemographicColumn {
  std::string name;
  DemoKind kind = DemoKind::numeric;
};

// Column layout of a cohort CSV. Basic columns are the cheap always-present
// features; advanced columns are the costly block that exists only for rows
// whose availability indicator is 1. Demographic columns may alias feature
// columns (they are read for balance analysis, not modeling).
struct FeatureSchema {
  std::vector<std::string> basic_numeric;
  std::vector<CategoricalColumn> basic_categorical;
  std::vector<std::string> advanced_numeric;
  std::string label_column;
  std::vector<DemographicColumn> demographics;
  std::string advanced_available_column;
  std::string id_column = "id";  // empty: ids synthesized as row_<n>

  std::size_t basic_width() const { return basic_numeric.size() + basic_categorical.size(); }
  std::size_t advanced_width() const { return advanced_numeric.size(); }

  // Throws on duplicate columns across feature groups, empty groups, or
  // missing label/indicator names.
  void validate() const;

  // Stable content hash of the canonical JSON form.
  std::string fingerprint() const;
};

FeatureSchema load_schema(const std::filesystem::path& path);
void save_schema(const FeatureSchema& schema, const std::filesystem::path& path);

// The shipped cohort layout: 9 basic columns (five numeric scores plus
// gender, race and the two APOE indicator columns) and a 329-column opaque
// advanced block.
FeatureSchema default_clinical_schema();

}  // namespace triage::data
