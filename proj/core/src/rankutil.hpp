#pragma once

// Internal helper shared by the baseline policies and the cost curve.

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

namespace triage::detail {

// Indices of the k largest values; ties resolve to the lower row index.
inline std::vector<std::size_t> top_k_indices(std::span<const double> values, std::size_t k) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&values](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

}  // namespace triage::detail
