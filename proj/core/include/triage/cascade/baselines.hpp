#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace triage::cascade {

enum class BaselineKind { random, top_prob, most_uncertain };

// Escalation mask with exactly round(rate * n) ones.
//   random:         seeded uniform subset (inputs only provide n)
//   top_prob:       the k highest basic probabilities
//   most_uncertain: the k smallest |p_b - 0.5|
// Ties break toward the lower row index.
std::vector<std::uint8_t> baseline_policy(BaselineKind kind, double rate,
                                          std::span<const double> inputs, std::uint64_t seed);

}  // namespace triage::cascade
