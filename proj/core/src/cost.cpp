#include "triage/eval/cost.hpp"

#include <cmath>

#include "rankutil.hpp"
#include "triage/common.hpp"
#include "triage/eval/metrics.hpp"

namespace triage::eval {

std::vector<CostPoint> cost_curve(std::span<const double> g_scores, std::span<const double> p_b,
                                  std::span<const double> p_a, std::span<const int> labels,
                                  double unit_cost, std::span<const double> rates) {
  const std::size_t n = g_scores.size();
  require(p_b.size() == n && p_a.size() == n && labels.size() == n, Errc::length_mismatch,
          "cost curve inputs differ in length");

  std::vector<CostPoint> out;
  out.reserve(rates.size());
  std::vector<double> mixed(n);
  for (double rate : rates) {
    require(rate >= 0.0 && rate <= 1.0, Errc::bad_rate, "escalation rate outside [0,1]");
    const auto k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
    const auto escalated = detail::top_k_indices(g_scores, k);

    for (std::size_t i = 0; i < n; ++i) mixed[i] = p_b[i];
    for (auto i : escalated) mixed[i] = p_a[i];

    CostPoint pt;
    pt.escalation_rate = rate;
    pt.expected_cost_per_100 = rate * 100.0 * unit_cost;
    pt.auroc = auroc(mixed, labels);
    out.push_back(pt);
  }
  return out;
}

}  // namespace triage::eval
