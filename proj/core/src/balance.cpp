#include "triage/eval/balance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "triage/common.hpp"
#include "triage/eval/stats.hpp"

namespace triage::eval {

namespace {

std::string num_summary(std::span<const double> v) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f +/- %.2f", mean, sd);
  return buf;
}

std::string cat_summary(const std::map<std::string, double>& counts, double total) {
  std::string out;
  for (const auto& [token, count] : counts) {
    if (!out.empty()) out += "; ";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s: %.0f (%.1f%%)", token.c_str(), count,
                  total > 0 ? 100.0 * count / total : 0.0);
    out += buf;
  }
  return out;
}

}  // namespace

BalanceTable balance_report(const data::CohortTable& cohort,
                            std::span<const std::uint8_t> group_mask,
                            const std::vector<data::DemographicColumn>& characteristics) {
  require(group_mask.size() == cohort.size(), Errc::length_mismatch,
          "group mask does not cover the cohort");

  BalanceTable table;
  for (auto m : group_mask) (m ? table.n_a : table.n_b) += 1;
  require(table.n_a > 0 && table.n_b > 0, Errc::empty_group,
          "both comparison groups must be non-empty");

  const auto& schema = cohort.schema();
  for (const auto& ch : characteristics) {
    // Locate the characteristic among the schema's demographic columns.
    std::size_t demo_idx = schema.demographics.size();
    for (std::size_t j = 0; j < schema.demographics.size(); ++j) {
      if (schema.demographics[j].name == ch.name) {
        demo_idx = j;
        break;
      }
    }
    require(demo_idx < schema.demographics.size(), Errc::missing_column,
            "characteristic '" + ch.name + "' is not a demographic column");

    BalanceRow row;
    row.name = ch.name;
    if (ch.kind == data::DemoKind::numeric) {
      std::vector<double> a, b;
      for (std::size_t i = 0; i < cohort.size(); ++i) {
        const double v = std::strtod(cohort.row(i).demographics[demo_idx].c_str(), nullptr);
        (group_mask[i] ? a : b).push_back(v);
      }
      row.summary_a = num_summary(a);
      row.summary_b = num_summary(b);
      row.p_value = welch_t(a, b);
      row.test_kind = "welch_t";
    } else {
      std::map<std::string, double> ca, cb;
      for (std::size_t i = 0; i < cohort.size(); ++i) {
        const auto& token = cohort.row(i).demographics[demo_idx];
        ++(group_mask[i] ? ca : cb)[token];
      }
      // union of levels, zero-total ones excluded by construction
      std::vector<std::string> levels;
      for (const auto& [token, _] : ca) levels.push_back(token);
      for (const auto& [token, _] : cb)
        if (std::find(levels.begin(), levels.end(), token) == levels.end())
          levels.push_back(token);
      std::sort(levels.begin(), levels.end());
      require(levels.size() >= 2, Errc::degenerate_sample,
              "characteristic '" + ch.name + "' has a single level");
      std::vector<std::vector<double>> counts(2, std::vector<double>(levels.size(), 0.0));
      for (std::size_t j = 0; j < levels.size(); ++j) {
        if (auto it = ca.find(levels[j]); it != ca.end()) counts[0][j] = it->second;
        if (auto it = cb.find(levels[j]); it != cb.end()) counts[1][j] = it->second;
      }
      row.summary_a = cat_summary(ca, static_cast<double>(table.n_a));
      row.summary_b = cat_summary(cb, static_cast<double>(table.n_b));
      row.p_value = chi_square(counts);
      row.test_kind = "chi_square";
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace triage::eval
