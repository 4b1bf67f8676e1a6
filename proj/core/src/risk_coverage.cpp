#include "triage/cascade/risk_coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triage/common.hpp"

namespace triage::cascade {

std::vector<RiskCoveragePoint> risk_coverage_curve(std::span<const double> g_scores,
                                                   std::span<const double> p_b,
                                                   std::span<const int> labels) {
  const std::size_t n = g_scores.size();
  require(p_b.size() == n && labels.size() == n, Errc::length_mismatch,
          "curve inputs differ in length");
  require(n > 0, Errc::empty_curve, "no rows to build a risk-coverage curve from");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&g_scores](std::size_t a, std::size_t b) { return g_scores[a] < g_scores[b]; });

  std::vector<RiskCoveragePoint> curve;
  const double below_min = g_scores[order[0]] - 1.0;
  curve.push_back({below_min, 0.0, 0.0, 0, -std::numeric_limits<double>::infinity()});

  std::size_t kept = 0, errors = 0;
  std::size_t i = 0;
  while (i < n) {
    const double s = g_scores[order[i]];
    std::size_t j = i;
    while (j < n && g_scores[order[j]] == s) {
      const bool predicted_positive = p_b[order[j]] > 0.5;
      if (predicted_positive != (labels[order[j]] > 0)) ++errors;
      ++kept;
      ++j;
    }
    const double tau =
        j < n ? 0.5 * (s + g_scores[order[j]]) : g_scores[order[n - 1]] + 1.0;
    curve.push_back({tau, static_cast<double>(kept) / static_cast<double>(n),
                     static_cast<double>(errors) / static_cast<double>(kept), kept, s});
    i = j;
  }
  return curve;
}

ThresholdSelection select_threshold(const std::vector<RiskCoveragePoint>& curve,
                                    const ThresholdStrategy& strategy) {
  require(!curve.empty(), Errc::empty_curve, "threshold selection needs a non-empty curve");

  ThresholdSelection sel;
  switch (strategy.kind) {
    case ThresholdStrategy::Kind::fixed: {
      sel.tau = strategy.fixed_tau;
      sel.chosen = curve.front();
      for (const auto& pt : curve) {
        if (pt.max_kept_score <= strategy.fixed_tau) sel.chosen = pt;
      }
      return sel;
    }
    case ThresholdStrategy::Kind::max_coverage_under_risk: {
      bool found = false;
      for (const auto& pt : curve) {
        if (pt.risk <= strategy.r_max && (!found || pt.coverage > sel.chosen.coverage)) {
          sel.chosen = pt;
          found = true;
        }
      }
      if (!found) {
        sel.chosen = curve.front();
        sel.feasible = false;
        sel.warning = "no coverage level satisfies risk <= " + std::to_string(strategy.r_max) +
                      "; falling back to coverage 0 (always escalate)";
      }
      sel.tau = sel.chosen.tau_candidate;
      return sel;
    }
    case ThresholdStrategy::Kind::knee: {
      const auto& a = curve.front();
      const auto& b = curve.back();
      const double dx = b.coverage - a.coverage;
      const double dy = b.risk - a.risk;
      const double len = std::hypot(dx, dy);
      double best = -1.0;
      for (const auto& pt : curve) {
        const double dist =
            len > 0 ? std::abs(dx * (a.risk - pt.risk) - (a.coverage - pt.coverage) * dy) / len
                    : std::hypot(pt.coverage - a.coverage, pt.risk - a.risk);
        if (dist > best) {
          best = dist;
          sel.chosen = pt;
        }
      }
      sel.tau = sel.chosen.tau_candidate;
      return sel;
    }
  }
  raise(Errc::invalid_config, "unknown threshold strategy");
}

}  // namespace triage::cascade
