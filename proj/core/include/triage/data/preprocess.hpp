#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "triage/data/cohort.hpp"

namespace triage::data {

// Which schema columns a preprocessor covers.
enum class ColumnGroup { basic, basic_and_advanced };

struct NumericColumnStats {
  std::string name;
  double mean = 0;
  double stddev = 0;  // population form (1/n)
  double median = 0;  // imputation value
};

struct CategoricalColumnStats {
  std::string name;
  std::vector<std::string> categories;  // observed at fit, sorted
  std::string mode;                     // imputation value
};

// Span of output columns belonging to one clinical feature. One-hot blocks
// stay grouped so attribution can mask a whole feature at once.
struct FeatureColumnGroup {
  std::string name;
  int first_col = 0;
  int n_cols = 1;
  bool categorical = false;
};

// Standardize numerics, one-hot categoricals, impute missing cells.
// Immutable once fitted.
class Preprocessor {
 public:
  Preprocessor() = default;  // empty; width 0 until fitted or loaded

  static Preprocessor fit(const CohortTable& cohort, ColumnGroup group);

  Eigen::MatrixXd transform(const CohortTable& cohort) const;
  Eigen::MatrixXd transform(const CohortTable& cohort, std::span<const std::size_t> rows) const;
  Eigen::RowVectorXd transform_row(const PatientRecord& rec, const FeatureSchema& schema) const;

  std::size_t width() const { return width_; }
  ColumnGroup group() const { return group_; }
  std::size_t n_basic_numeric() const { return n_basic_numeric_; }
  const std::vector<NumericColumnStats>& numeric_stats() const { return numeric_; }
  const std::vector<CategoricalColumnStats>& categorical_stats() const { return categorical_; }
  const std::vector<FeatureColumnGroup>& feature_groups() const { return groups_; }
  const std::string& schema_fingerprint() const { return schema_fingerprint_; }

  // Used by serialization.
  static Preprocessor from_parts(ColumnGroup group, std::vector<NumericColumnStats> numeric,
                                 std::vector<CategoricalColumnStats> categorical,
                                 std::size_t n_basic_numeric, std::string schema_fingerprint);

 private:
  void rebuild_layout();

  ColumnGroup group_ = ColumnGroup::basic;
  // numeric_ holds basic numerics first, then (for basic_and_advanced) the
  // advanced block; categorical_ holds the basic categoricals.
  std::vector<NumericColumnStats> numeric_;
  std::vector<CategoricalColumnStats> categorical_;
  std::size_t n_basic_numeric_ = 0;
  std::size_t width_ = 0;
  std::vector<FeatureColumnGroup> groups_;
  std::string schema_fingerprint_;
};

}  // namespace triage::data
