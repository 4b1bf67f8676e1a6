#include "triage/data/cohort.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "triage/common.hpp"

namespace triage::data {

CohortTable::CohortTable(FeatureSchema schema, std::vector<PatientRecord> rows)
    : schema_(std::move(schema)), rows_(std::move(rows)) {
  schema_.validate();
  std::set<std::string> ids;
  for (const auto& r : rows_) {
    require(ids.insert(r.id).second, Errc::duplicate_id, "duplicate patient id '" + r.id + "'");
  }
}

std::vector<std::size_t> CohortTable::advanced_available_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (rows_[i].advanced_available) out.push_back(i);
  return out;
}

std::vector<int> CohortTable::labels(std::span<const std::size_t> indices) const {
  std::vector<int> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(rows_.at(i).label);
  return out;
}

std::vector<int> CohortTable::labels() const {
  std::vector<int> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r.label);
  return out;
}

CohortTable CohortTable::subset(std::span<const std::size_t> indices) const {
  std::vector<PatientRecord> rows;
  rows.reserve(indices.size());
  for (auto i : indices) rows.push_back(rows_.at(i));
  return CohortTable(schema_, std::move(rows));
}

std::vector<std::size_t> CohortTable::indices_of(std::span<const std::string> ids) const {
  std::unordered_map<std::string, std::size_t> lookup;
  lookup.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) lookup.emplace(rows_[i].id, i);
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = lookup.find(id);
    require(it != lookup.end(), Errc::io_error, "id '" + id + "' not present in cohort");
    out.push_back(it->second);
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

// One CSV record; handles quoted fields with doubled-quote escapes.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

bool parse_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  return end != nullptr && *end == '\0';
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

namespace {

CohortTable load_cohort_impl(const std::filesystem::path& path, const FeatureSchema& schema,
                             std::vector<std::string>* row_errors) {
  schema.validate();
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open cohort file " + path.string());

  std::string header_line;
  require(static_cast<bool>(std::getline(in, header_line)), Errc::io_error,
          "empty cohort file " + path.string());
  const auto header = split_csv_line(header_line);
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col.emplace(header[i], i);

  auto column_index = [&](const std::string& name) {
    auto it = col.find(name);
    require(it != col.end(), Errc::missing_column, "column '" + name + "' not found in header");
    return it->second;
  };

  const bool has_id = !schema.id_column.empty() && col.contains(schema.id_column);
  std::vector<std::size_t> bn_idx, adv_idx, demo_idx;
  std::vector<std::size_t> bc_idx;
  for (const auto& c : schema.basic_numeric) bn_idx.push_back(column_index(c));
  for (const auto& c : schema.basic_categorical) bc_idx.push_back(column_index(c.name));
  for (const auto& c : schema.advanced_numeric) adv_idx.push_back(column_index(c));
  for (const auto& d : schema.demographics) demo_idx.push_back(column_index(d.name));
  const std::size_t label_idx = column_index(schema.label_column);
  const std::size_t avail_idx = column_index(schema.advanced_available_column);

  auto parse_row = [&](const std::vector<std::string>& fields, std::size_t row_no) {
    require(fields.size() == header.size(), Errc::io_error,
            "row " + std::to_string(row_no) + ": expected " + std::to_string(header.size()) +
                " fields, found " + std::to_string(fields.size()));
    PatientRecord rec;
    rec.id = has_id ? fields[col.at(schema.id_column)] : "row_" + std::to_string(row_no);

    double label_val = -1;
    require(parse_double(fields[label_idx], label_val) && (label_val == 0.0 || label_val == 1.0),
            Errc::non_binary_label,
            "row " + std::to_string(row_no) + ": label '" + fields[label_idx] + "' is not 0/1");
    rec.label = static_cast<int>(label_val);

    double avail_val = -1;
    require(parse_double(fields[avail_idx], avail_val) && (avail_val == 0.0 || avail_val == 1.0),
            Errc::non_binary_label,
            "row " + std::to_string(row_no) + ": availability indicator '" + fields[avail_idx] +
                "' is not 0/1");
    rec.advanced_available = avail_val == 1.0;

    rec.basic_numeric.reserve(bn_idx.size());
    for (std::size_t j = 0; j < bn_idx.size(); ++j) {
      const std::string& tok = fields[bn_idx[j]];
      double v = 0;
      require(!tok.empty(), Errc::missing_basic_value,
              "row " + std::to_string(row_no) + ": basic column '" + schema.basic_numeric[j] +
                  "' is empty");
      require(parse_double(tok, v), Errc::io_error,
              "row " + std::to_string(row_no) + ": basic column '" + schema.basic_numeric[j] +
                  "' value '" + tok + "' is not numeric");
      rec.basic_numeric.push_back(v);
    }

    rec.basic_categorical.reserve(bc_idx.size());
    for (std::size_t j = 0; j < bc_idx.size(); ++j) {
      const auto& column = schema.basic_categorical[j];
      const std::string& tok = fields[bc_idx[j]];
      require(!tok.empty(), Errc::missing_basic_value,
              "row " + std::to_string(row_no) + ": basic column '" + column.name + "' is empty");
      const bool known =
          std::find(column.categories.begin(), column.categories.end(), tok) !=
          column.categories.end();
      require(known, Errc::unknown_category,
              "row " + std::to_string(row_no) + ": column '" + column.name +
                  "' has unknown category '" + tok + "'");
      rec.basic_categorical.push_back(tok);
    }

    if (rec.advanced_available) {
      rec.advanced.resize(adv_idx.size());
      for (std::size_t j = 0; j < adv_idx.size(); ++j) {
        const std::string& tok = fields[adv_idx[j]];
        if (tok.empty()) continue;  // imputed downstream
        double v = 0;
        require(parse_double(tok, v), Errc::io_error,
                "row " + std::to_string(row_no) + ": advanced column '" +
                    schema.advanced_numeric[j] + "' value '" + tok + "' is not numeric");
        rec.advanced[j] = v;
      }
    }

    rec.demographics.reserve(demo_idx.size());
    for (std::size_t j = 0; j < demo_idx.size(); ++j) {
      const std::string& tok = fields[demo_idx[j]];
      require(!tok.empty(), Errc::missing_value,
              "row " + std::to_string(row_no) + ": demographic column '" +
                  schema.demographics[j].name + "' is empty");
      if (schema.demographics[j].kind == DemoKind::numeric) {
        double v = 0;
        require(parse_double(tok, v), Errc::io_error,
                "row " + std::to_string(row_no) + ": demographic column '" +
                    schema.demographics[j].name + "' value '" + tok + "' is not numeric");
      }
      rec.demographics.push_back(tok);
    }
    return rec;
  };

  std::vector<PatientRecord> rows;
  std::string line;
  std::size_t row_no = 0;  // 1-based data row, reported in errors
  while (std::getline(in, line)) {
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    ++row_no;
    const auto fields = split_csv_line(line);
    if (row_errors == nullptr) {
      rows.push_back(parse_row(fields, row_no));
    } else {
      try {
        rows.push_back(parse_row(fields, row_no));
      } catch (const Error& e) {
        row_errors->push_back(e.what());
      }
    }
  }
  return CohortTable(schema, std::move(rows));
}

}  // namespace

CohortTable load_cohort(const std::filesystem::path& path, const FeatureSchema& schema) {
  return load_cohort_impl(path, schema, nullptr);
}

CohortTable load_cohort_lenient(const std::filesystem::path& path, const FeatureSchema& schema,
                                std::vector<std::string>& row_errors) {
  return load_cohort_impl(path, schema, &row_errors);
}

void save_cohort_csv(const CohortTable& cohort, const std::filesystem::path& path) {
  const auto& s = cohort.schema();
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), Errc::io_error, "cannot write " + path.string());

  // Feature columns first; demographic columns that alias features are not
  // duplicated in the file.
  std::vector<std::string> emitted;
  auto already = [&emitted](const std::string& name) {
    return std::find(emitted.begin(), emitted.end(), name) != emitted.end();
  };
  std::ostringstream header;
  auto emit = [&](const std::string& name) {
    if (!emitted.empty()) header << ",";
    header << name;
    emitted.push_back(name);
  };
  if (!s.id_column.empty()) emit(s.id_column);
  for (const auto& c : s.basic_numeric) emit(c);
  for (const auto& c : s.basic_categorical) emit(c.name);
  for (const auto& c : s.advanced_numeric) emit(c);
  emit(s.label_column);
  emit(s.advanced_available_column);
  std::vector<std::size_t> extra_demos;
  for (std::size_t j = 0; j < s.demographics.size(); ++j) {
    if (!already(s.demographics[j].name)) {
      emit(s.demographics[j].name);
      extra_demos.push_back(j);
    }
  }
  out << header.str() << "\n";

  for (const auto& r : cohort.rows()) {
    std::ostringstream line;
    if (!s.id_column.empty()) line << r.id;
    for (double v : r.basic_numeric) line << "," << fmt_double(v);
    for (const auto& tok : r.basic_categorical) line << "," << tok;
    for (std::size_t j = 0; j < s.advanced_numeric.size(); ++j) {
      line << ",";
      if (r.advanced_available && r.advanced[j].has_value()) line << fmt_double(*r.advanced[j]);
    }
    line << "," << r.label;
    line << "," << (r.advanced_available ? 1 : 0);
    for (auto j : extra_demos) line << "," << r.demographics[j];
    std::string text = line.str();
    if (s.id_column.empty() && !text.empty() && text[0] == ',') text.erase(0, 1);
    out << text << "\n";
  }
  out.close();
  require(out.good(), Errc::io_error, "write failed for " + path.string());
}

}  // namespace triage::data
