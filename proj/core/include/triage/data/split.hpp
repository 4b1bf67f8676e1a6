#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "triage/data/cohort.hpp"

namespace triage::data {

// Three-way partition by patient id. The test set is drawn from the
// advanced-available rows only; everything else trains the basic model and
// the advanced-available remainder trains the advanced/triage models.
struct CohortSplit {
  std::vector<std::string> basic_train;
  std::vector<std::string> advanced_train;
  std::vector<std::string> test;
  std::uint64_t seed = 0;
};

CohortSplit split_cohort(const CohortTable& cohort, std::size_t test_n, std::uint64_t seed);

// Row indices into `cohort` for each id set, in stored order.
struct SplitIndices {
  std::vector<std::size_t> basic_train;
  std::vector<std::size_t> advanced_train;
  std::vector<std::size_t> test;
};
SplitIndices resolve_split(const CohortTable& cohort, const CohortSplit& split);

CohortSplit load_split(const std::filesystem::path& path);
void save_split(const CohortSplit& split, const std::filesystem::path& path);

}  // namespace triage::data
