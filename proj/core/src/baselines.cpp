#include "triage/cascade/baselines.hpp"

#include <cmath>

#include "rankutil.hpp"
#include "triage/common.hpp"
#include "triage/rng.hpp"

namespace triage::cascade {

std::vector<std::uint8_t> baseline_policy(BaselineKind kind, double rate,
                                          std::span<const double> inputs, std::uint64_t seed) {
  require(rate >= 0.0 && rate <= 1.0, Errc::bad_rate, "escalation rate outside [0,1]");
  const std::size_t n = inputs.size();
  const auto k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));

  std::vector<std::uint8_t> mask(n, 0);
  switch (kind) {
    case BaselineKind::random: {
      Rng rng = Rng::derive(seed, 0xba5e);
      for (auto i : rng.sample_without_replacement(n, k)) mask[i] = 1;
      break;
    }
    case BaselineKind::top_prob: {
      for (auto i : detail::top_k_indices(inputs, k)) mask[i] = 1;
      break;
    }
    case BaselineKind::most_uncertain: {
      std::vector<double> neg_uncertainty(n);
      for (std::size_t i = 0; i < n; ++i) neg_uncertainty[i] = -std::abs(inputs[i] - 0.5);
      for (auto i : detail::top_k_indices(neg_uncertainty, k)) mask[i] = 1;
      break;
    }
  }
  return mask;
}

}  // namespace triage::cascade
