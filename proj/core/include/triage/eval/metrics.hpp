#pragma once

#include <span>
#include <vector>

namespace triage::eval {

struct MetricSet {
  double auroc = 0;
  double auprc = 0;
  double accuracy = 0;
  double recall = 0;
  double precision = 0;
  std::size_t n = 0;
  double cutoff = 0.5;
  bool precision_undefined = false;  // no predicted positives; reported as 0
};

// Rank-based AUROC: (concordant + 0.5 * tied) / (pos * neg), exact.
double auroc(std::span<const double> scores, std::span<const int> labels);

// Interpolation-free step-curve AUPRC: sum (R_k - R_{k-1}) * P_k over
// descending score cutoffs.
double auprc(std::span<const double> scores, std::span<const int> labels);

// Confusion-matrix metrics with predicted-positive <=> score > cutoff
// (strict). Also fills the ranking metrics when both classes are present.
MetricSet thresholded_metrics(std::span<const double> scores, std::span<const int> labels,
                              double cutoff = 0.5);

struct RocPoint {
  double fpr = 0, tpr = 0, threshold = 0;
};
struct PrPoint {
  double recall = 0, precision = 0, threshold = 0;
};

std::vector<RocPoint> roc_points(std::span<const double> scores, std::span<const int> labels);
std::vector<PrPoint> pr_points(std::span<const double> scores, std::span<const int> labels);

}  // namespace triage::eval
