#include "triage/eval/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "triage/common.hpp"

namespace triage::eval {

namespace {

void check_lengths(std::span<const double> scores, std::span<const int> labels) {
  require(scores.size() == labels.size(), Errc::length_mismatch,
          "scores and labels differ in length");
}

std::pair<std::size_t, std::size_t> class_counts(std::span<const int> labels) {
  std::size_t pos = 0, neg = 0;
  for (int v : labels) (v > 0 ? pos : neg) += 1;
  return {pos, neg};
}

// Indices sorted by descending score, stable in original order.
std::vector<std::size_t> order_desc(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return idx;
}

}  // namespace

double auroc(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores, labels);
  const auto [pos, neg] = class_counts(labels);
  require(pos > 0 && neg > 0, Errc::single_class, "AUROC needs both classes");

  // Midrank sum of the positives.
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k)
      if (labels[idx[k]] > 0) rank_sum_pos += midrank;
    i = j + 1;
  }
  const double p = static_cast<double>(pos), q = static_cast<double>(neg);
  return (rank_sum_pos - p * (p + 1) / 2.0) / (p * q);
}

double auprc(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores, labels);
  const auto [pos, neg] = class_counts(labels);
  (void)neg;
  require(pos > 0, Errc::no_positives, "AUPRC needs at least one positive");

  const auto idx = order_desc(scores);
  double area = 0;
  double prev_recall = 0;
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) (labels[idx[k]] > 0 ? tp : fp) += 1;
    const double recall = static_cast<double>(tp) / static_cast<double>(pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j + 1;
  }
  return area;
}

MetricSet thresholded_metrics(std::span<const double> scores, std::span<const int> labels,
                              double cutoff) {
  check_lengths(scores, labels);
  MetricSet m;
  m.n = scores.size();
  m.cutoff = cutoff;

  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] > cutoff;
    const bool truth = labels[i] > 0;
    if (pred && truth) ++tp;
    else if (pred) ++fp;
    else if (truth) ++fn;
    else ++tn;
  }
  m.accuracy = m.n == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(m.n);
  m.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (tp + fp == 0) {
    m.precision = 0.0;
    m.precision_undefined = true;
  } else {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }

  const auto [pos, neg] = class_counts(labels);
  if (pos > 0 && neg > 0) m.auroc = auroc(scores, labels);
  if (pos > 0) m.auprc = auprc(scores, labels);
  return m;
}

std::vector<RocPoint> roc_points(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores, labels);
  const auto [pos, neg] = class_counts(labels);
  require(pos > 0 && neg > 0, Errc::single_class, "ROC needs both classes");

  const auto idx = order_desc(scores);
  std::vector<RocPoint> pts;
  pts.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) (labels[idx[k]] > 0 ? tp : fp) += 1;
    pts.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                   static_cast<double>(tp) / static_cast<double>(pos), scores[idx[i]]});
    i = j + 1;
  }
  return pts;
}

std::vector<PrPoint> pr_points(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores, labels);
  const auto [pos, neg] = class_counts(labels);
  (void)neg;
  require(pos > 0, Errc::no_positives, "PR curve needs at least one positive");

  const auto idx = order_desc(scores);
  std::vector<PrPoint> pts;
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) (labels[idx[k]] > 0 ? tp : fp) += 1;
    pts.push_back({static_cast<double>(tp) / static_cast<double>(pos),
                   static_cast<double>(tp) / static_cast<double>(tp + fp), scores[idx[i]]});
    i = j + 1;
  }
  return pts;
}

}  // namespace triage::eval
