#pragma once

#include <span>
#include <string>
#include <vector>

namespace triage::cascade {

struct RiskCoveragePoint {
  double tau_candidate = 0;  // keep rows with g <= tau
  double coverage = 0;       // kept fraction
  double risk = 0;           // error rate among kept rows (0 for an empty kept set)
  std::size_t n_kept = 0;
  double max_kept_score = 0;  // largest score in the kept set (-inf when empty)
};

// One point per distinct kept-set as tau sweeps the score range: a below-min
// sentinel (coverage 0), midpoints between consecutive distinct scores, and
// an above-max sentinel (coverage 1). A kept row counts as an error iff
// (p_b > 0.5) != label. Points are sorted by coverage ascending.
std::vector<RiskCoveragePoint> risk_coverage_curve(std::span<const double> g_scores,
                                                   std::span<const double> p_b,
                                                   std::span<const int> labels);

struct ThresholdStrategy {
  enum class Kind { max_coverage_under_risk, knee, fixed };
  Kind kind = Kind::max_coverage_under_risk;
  double r_max = 0.08;      // max_coverage_under_risk
  double fixed_tau = 0.05;  // fixed
};

struct ThresholdSelection {
  double tau = 0;
  RiskCoveragePoint chosen;
  bool feasible = true;
  std::string warning;
};

// max_coverage_under_risk: largest coverage whose risk <= r_max.
// knee: point with maximal distance to the chord between curve endpoints.
// fixed: pass the configured tau through.
// When no point satisfies the risk cap the coverage-0 sentinel is returned
// with feasible=false rather than an error, so callers can decide.
ThresholdSelection select_threshold(const std::vector<RiskCoveragePoint>& curve,
                                    const ThresholdStrategy& strategy);

}  // namespace triage::cascade
