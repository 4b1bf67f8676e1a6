#include "triage/data/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "triage/common.hpp"

namespace triage::data {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

NumericColumnStats numeric_stats_of(std::string name, const std::vector<double>& values) {
  NumericColumnStats s;
  s.name = std::move(name);
  if (values.empty()) return s;  // all-missing column: centers to 0
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(values.size()));
  s.median = median_of(values);
  return s;
}

CategoricalColumnStats categorical_stats_of(std::string name,
                                            const std::vector<std::string>& tokens) {
  CategoricalColumnStats s;
  s.name = std::move(name);
  std::map<std::string, std::size_t> counts;
  for (const auto& t : tokens) ++counts[t];
  std::size_t best = 0;
  for (const auto& [token, count] : counts) {
    s.categories.push_back(token);  // std::map iterates sorted
    if (count > best) {
      best = count;
      s.mode = token;
    }
  }
  return s;
}

}  // namespace

Preprocessor Preprocessor::fit(const CohortTable& cohort, ColumnGroup group) {
  require(cohort.size() >= 2, Errc::empty_fit,
          "preprocessor needs at least 2 rows, got " + std::to_string(cohort.size()));
  const auto& schema = cohort.schema();

  Preprocessor p;
  p.group_ = group;
  p.n_basic_numeric_ = schema.basic_numeric.size();
  p.schema_fingerprint_ = schema.fingerprint();

  for (std::size_t j = 0; j < schema.basic_numeric.size(); ++j) {
    std::vector<double> values;
    values.reserve(cohort.size());
    for (const auto& r : cohort.rows()) values.push_back(r.basic_numeric[j]);
    p.numeric_.push_back(numeric_stats_of(schema.basic_numeric[j], values));
  }
  for (std::size_t j = 0; j < schema.basic_categorical.size(); ++j) {
    std::vector<std::string> tokens;
    tokens.reserve(cohort.size());
    for (const auto& r : cohort.rows()) tokens.push_back(r.basic_categorical[j]);
    p.categorical_.push_back(categorical_stats_of(schema.basic_categorical[j].name, tokens));
  }
  if (group == ColumnGroup::basic_and_advanced) {
    for (std::size_t j = 0; j < schema.advanced_numeric.size(); ++j) {
      std::vector<double> values;
      for (const auto& r : cohort.rows()) {
        if (r.advanced_available && r.advanced[j].has_value()) values.push_back(*r.advanced[j]);
      }
      p.numeric_.push_back(numeric_stats_of(schema.advanced_numeric[j], values));
    }
  }
  p.rebuild_layout();
  return p;
}

Preprocessor Preprocessor::from_parts(ColumnGroup group, std::vector<NumericColumnStats> numeric,
                                      std::vector<CategoricalColumnStats> categorical,
                                      std::size_t n_basic_numeric,
                                      std::string schema_fingerprint) {
  Preprocessor p;
  p.group_ = group;
  p.numeric_ = std::move(numeric);
  p.categorical_ = std::move(categorical);
  p.n_basic_numeric_ = n_basic_numeric;
  p.schema_fingerprint_ = std::move(schema_fingerprint);
  p.rebuild_layout();
  return p;
}

void Preprocessor::rebuild_layout() {
  groups_.clear();
  int col = 0;
  for (std::size_t j = 0; j < n_basic_numeric_; ++j) {
    groups_.push_back({numeric_[j].name, col, 1, false});
    ++col;
  }
  for (const auto& c : categorical_) {
    const int w = static_cast<int>(c.categories.size());
    groups_.push_back({c.name, col, w, true});
    col += w;
  }
  for (std::size_t j = n_basic_numeric_; j < numeric_.size(); ++j) {
    groups_.push_back({numeric_[j].name, col, 1, false});
    ++col;
  }
  width_ = static_cast<std::size_t>(col);
}

Eigen::RowVectorXd Preprocessor::transform_row(const PatientRecord& rec,
                                               const FeatureSchema& schema) const {
  require(rec.basic_numeric.size() == n_basic_numeric_ &&
              rec.basic_categorical.size() == categorical_.size() &&
              schema.basic_numeric.size() == n_basic_numeric_,
          Errc::schema_mismatch, "record does not match the fitted schema");

  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(width_));
  int col = 0;
  for (std::size_t j = 0; j < n_basic_numeric_; ++j) {
    const auto& st = numeric_[j];
    out[col++] = st.stddev > 0 ? (rec.basic_numeric[j] - st.mean) / st.stddev : 0.0;
  }
  for (std::size_t j = 0; j < categorical_.size(); ++j) {
    const auto& st = categorical_[j];
    const std::string& token = rec.basic_categorical[j].empty() ? st.mode : rec.basic_categorical[j];
    const auto it = std::find(st.categories.begin(), st.categories.end(), token);
    if (it != st.categories.end()) {
      out[col + static_cast<int>(it - st.categories.begin())] = 1.0;
    }
    // unseen token: whole block stays zero
    col += static_cast<int>(st.categories.size());
  }
  if (group_ == ColumnGroup::basic_and_advanced) {
    const std::size_t n_adv = numeric_.size() - n_basic_numeric_;
    require(schema.advanced_numeric.size() == n_adv, Errc::schema_mismatch,
            "advanced block width does not match the fitted schema");
    for (std::size_t j = 0; j < n_adv; ++j) {
      const auto& st = numeric_[n_basic_numeric_ + j];
      double v = st.median;
      if (rec.advanced_available && j < rec.advanced.size() && rec.advanced[j].has_value()) {
        v = *rec.advanced[j];
      }
      out[col++] = st.stddev > 0 ? (v - st.mean) / st.stddev : 0.0;
    }
  }
  return out;
}

Eigen::MatrixXd Preprocessor::transform(const CohortTable& cohort,
                                        std::span<const std::size_t> rows) const {
  require(cohort.schema().fingerprint() == schema_fingerprint_, Errc::schema_mismatch,
          "cohort schema does not match the fitted schema");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width_));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = transform_row(cohort.row(rows[i]), cohort.schema());
  }
  return out;
}

Eigen::MatrixXd Preprocessor::transform(const CohortTable& cohort) const {
  std::vector<std::size_t> rows(cohort.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return transform(cohort, rows);
}

}  // namespace triage::data
