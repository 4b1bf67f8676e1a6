#include "triage/data/split.hpp"

#include <algorithm>
#include <set>

#include "jsonio.hpp"
#include "triage/common.hpp"
#include "triage/rng.hpp"

namespace triage::data {

CohortSplit split_cohort(const CohortTable& cohort, std::size_t test_n, std::uint64_t seed) {
  const auto available = cohort.advanced_available_indices();
  require(test_n <= available.size(), Errc::test_too_large,
          "test_n=" + std::to_string(test_n) + " exceeds advanced-available rows (" +
              std::to_string(available.size()) + ")");

  Rng rng = Rng::derive(seed, /*stream=*/0x51u);
  const auto picks = rng.sample_without_replacement(available.size(), test_n);
  std::set<std::size_t> test_rows;
  for (auto p : picks) test_rows.insert(available[p]);

  CohortSplit split;
  split.seed = seed;
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const auto& id = cohort.row(i).id;
    if (test_rows.contains(i)) {
      split.test.push_back(id);
    } else {
      split.basic_train.push_back(id);
      if (cohort.row(i).advanced_available) split.advanced_train.push_back(id);
    }
  }
  return split;
}

SplitIndices resolve_split(const CohortTable& cohort, const CohortSplit& split) {
  SplitIndices out;
  out.basic_train = cohort.indices_of(split.basic_train);
  out.advanced_train = cohort.indices_of(split.advanced_train);
  out.test = cohort.indices_of(split.test);
  return out;
}

CohortSplit load_split(const std::filesystem::path& path) {
  const auto j = jsonio::read_json_file(path);
  CohortSplit s;
  s.basic_train = j.at("basic_train").get<std::vector<std::string>>();
  s.advanced_train = j.at("advanced_train").get<std::vector<std::string>>();
  s.test = j.at("test").get<std::vector<std::string>>();
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

void save_split(const CohortSplit& split, const std::filesystem::path& path) {
  jsonio::json j;
  j["seed"] = split.seed;
  j["basic_train"] = split.basic_train;
  j["advanced_train"] = split.advanced_train;
  j["test"] = split.test;
  jsonio::write_json_file(path, j);
}

}  // namespace triage::data
