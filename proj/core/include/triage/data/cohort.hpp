#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "triage/data/schema.hpp"

namespace triage::data {

struct PatientRecord {
  std::string id;
  std::vector<double> basic_numeric;            // schema.basic_numeric order
  std::vector<std::string> basic_categorical;   // schema.basic_categorical order
  std::vector<std::optional<double>> advanced;  // schema.advanced_numeric order; empty if unavailable
  bool advanced_available = false;
  int label = 0;  // 0/1
  std::vector<std::string> demographics;  // raw tokens, schema.demographics order
};

// Immutable after construction; safe to share across threads for reads.
class CohortTable {
 public:
  CohortTable() = default;
  CohortTable(FeatureSchema schema, std::vector<PatientRecord> rows);

  const FeatureSchema& schema() const { return schema_; }
  const std::vector<PatientRecord>& rows() const { return rows_; }
  const PatientRecord& row(std::size_t i) const { return rows_.at(i); }
  std::size_t size() const { return rows_.size(); }

  std::vector<std::size_t> advanced_available_indices() const;
  std::vector<int> labels(std::span<const std::size_t> indices) const;
  std::vector<int> labels() const;

  CohortTable subset(std::span<const std::size_t> indices) const;

  // Row index for each id, in the given order. Throws on unknown id.
  std::vector<std::size_t> indices_of(std::span<const std::string> ids) const;

 private:
  FeatureSchema schema_;
  std::vector<PatientRecord> rows_;
};

CohortTable load_cohort(const std::filesystem::path& path, const FeatureSchema& schema);
void save_cohort_csv(const CohortTable& cohort, const std::filesystem::path& path);

// Like load_cohort, but malformed rows are reported in `row_errors` (one
// line each) and skipped instead of aborting the load. Structural problems
// (missing file, missing columns) still throw.
CohortTable load_cohort_lenient(const std::filesystem::path& path, const FeatureSchema& schema,
                                std::vector<std::string>& row_errors);

}  // namespace triage::data
