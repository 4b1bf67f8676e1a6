#pragma once

#include <span>
#include <string>
#include <vector>

#include "triage/data/cohort.hpp"

namespace triage::eval {

struct BalanceRow {
  std::string name;
  std::string summary_a;  // mean +/- sd for numeric, counts for categorical
  std::string summary_b;
  double p_value = 1.0;
  std::string test_kind;  // "welch_t" or "chi_square"
};

struct BalanceTable {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::vector<BalanceRow> rows;
};

// Compares the two groups induced by `group_mask` (1 = group A) on each
// demographic characteristic: Welch's t for numeric columns, chi-square on
// the category counts otherwise. Categories absent from both groups drop out.
BalanceTable balance_report(const data::CohortTable& cohort,
                            std::span<const std::uint8_t> group_mask,
                            const std::vector<data::DemographicColumn>& characteristics);

}  // namespace triage::eval
