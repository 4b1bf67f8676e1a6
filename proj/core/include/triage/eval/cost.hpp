#pragma once

#include <span>
#include <vector>

namespace triage::eval {

struct CostPoint {
  double escalation_rate = 0;       // requested fraction escalated
  double expected_cost_per_100 = 0; // rate * 100 * unit_cost
  double auroc = 0;                 // mixed-score AUROC at this rate
};

// For each rate, escalate the round(rate*n) rows with the highest triage
// scores (ties to the lower row index), score escalated rows with p_a and
// the rest with p_b, and record AUROC against cost.
std::vector<CostPoint> cost_curve(std::span<const double> g_scores, std::span<const double> p_b,
                                  std::span<const double> p_a, std::span<const int> labels,
                                  double unit_cost, std::span<const double> rates);

}  // namespace triage::eval
