#include "triage/explain/shapley.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "triage/common.hpp"
#include "triage/rng.hpp"

namespace triage::explain {

namespace {

void validate_inputs(const BackgroundSet& background, const Eigen::RowVectorXd& x,
                     const FeatureGroupMap& groups) {
  require(background.rows.rows() > 0, Errc::empty_background, "background set is empty");
  require(background.rows.cols() == x.size(), Errc::width_mismatch,
          "background width does not match the explained row");
  require(!groups.names.empty() && groups.names.size() == groups.columns.size(),
          Errc::invalid_config, "feature group map is empty or inconsistent");

  // Groups must partition the columns; otherwise v(full) != score(x) and
  // local accuracy cannot hold.
  std::vector<int> owner(static_cast<std::size_t>(x.size()), -1);
  for (std::size_t g = 0; g < groups.columns.size(); ++g) {
    for (int c : groups.columns[g]) {
      require(c >= 0 && c < x.size(), Errc::out_of_range, "group column index out of range");
      require(owner[static_cast<std::size_t>(c)] < 0, Errc::invalid_config,
              "column " + std::to_string(c) + " appears in two feature groups");
      owner[static_cast<std::size_t>(c)] = static_cast<int>(g);
    }
  }
  for (std::size_t c = 0; c < owner.size(); ++c) {
    require(owner[c] >= 0, Errc::invalid_config,
            "column " + std::to_string(c) + " belongs to no feature group");
  }
}

// Memoizing coalition evaluator: v(S) = mean score over background rows with
// the columns of every group in S replaced by x.
class CoalitionValue {
 public:
  CoalitionValue(const ScoreFn& score_fn, const BackgroundSet& background,
                 const Eigen::RowVectorXd& x, const FeatureGroupMap& groups)
      : score_fn_(score_fn), background_(background), x_(x), groups_(groups) {}

  double operator()(std::uint64_t mask) {
    if (auto it = cache_.find(mask); it != cache_.end()) return it->second;
    Eigen::MatrixXd composite = background_.rows;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      if (mask & (std::uint64_t{1} << g)) {
        for (int c : groups_.columns[g]) composite.col(c).setConstant(x_[c]);
      }
    }
    const double v = score_fn_(composite).mean();
    cache_.emplace(mask, v);
    return v;
  }

 private:
  const ScoreFn& score_fn_;
  const BackgroundSet& background_;
  const Eigen::RowVectorXd& x_;
  const FeatureGroupMap& groups_;
  std::unordered_map<std::uint64_t, double> cache_;
};

}  // namespace

Attribution exact_shapley(const ScoreFn& score_fn, const BackgroundSet& background,
                          const Eigen::RowVectorXd& x, const FeatureGroupMap& groups) {
  validate_inputs(background, x, groups);
  const std::size_t m = groups.size();
  require(m <= 16, Errc::too_many_groups,
          "exact enumeration is limited to 16 groups, got " + std::to_string(m));

  CoalitionValue value(score_fn, background, x, groups);
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;

  // v for every coalition
  std::vector<double> v(static_cast<std::size_t>(full) + 1);
  for (std::uint64_t mask = 0; mask <= full; ++mask) v[mask] = value(mask);

  // weight(s) = s! (m-1-s)! / m!
  std::vector<double> weight(m);
  std::vector<double> fact(m + 1, 1.0);
  for (std::size_t i = 1; i <= m; ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
  for (std::size_t s = 0; s < m; ++s) weight[s] = fact[s] * fact[m - 1 - s] / fact[m];

  Attribution attr;
  attr.base_value = v[0];
  attr.score = v[full];
  attr.phis.assign(m, 0.0);
  for (std::uint64_t mask = 0; mask <= full; ++mask) {
    const auto s = static_cast<std::size_t>(std::popcount(mask));
    for (std::size_t j = 0; j < m; ++j) {
      const std::uint64_t bit = std::uint64_t{1} << j;
      if (mask & bit) continue;
      attr.phis[j] += weight[s] * (v[mask | bit] - v[mask]);
    }
  }
  return attr;
}

Attribution sampled_shapley(const ScoreFn& score_fn, const BackgroundSet& background,
                            const Eigen::RowVectorXd& x, const FeatureGroupMap& groups,
                            std::size_t n_samples, std::uint64_t seed) {
  validate_inputs(background, x, groups);
  const std::size_t m = groups.size();
  require(m <= 62, Errc::too_many_groups, "too many feature groups for a 64-bit coalition mask");
  require(n_samples >= 2 * m, Errc::too_few_samples,
          "need at least 2m marginal samples, got " + std::to_string(n_samples));

  // Each permutation yields one marginal sample per feature; antithetic
  // pairs walk a permutation and its reverse.
  const std::size_t n_perms = (n_samples + m - 1) / m;
  const std::size_t n_pairs = (n_perms + 1) / 2;

  CoalitionValue value(score_fn, background, x, groups);
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;

  Attribution attr;
  attr.base_value = value(0);
  attr.score = value(full);
  attr.phis.assign(m, 0.0);
  attr.std_errors.assign(m, 0.0);

  // Welford accumulation over pair means.
  std::vector<double> mean(m, 0.0), m2(m, 0.0);
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<double> marg_fwd(m), marg_rev(m);

  for (std::size_t pair = 0; pair < n_pairs; ++pair) {
    Rng rng = Rng::derive(seed, pair);
    rng.shuffle(perm);

    std::uint64_t mask = 0;
    double prev = attr.base_value;
    for (std::size_t j : perm) {
      mask |= std::uint64_t{1} << j;
      const double cur = value(mask);
      marg_fwd[j] = cur - prev;
      prev = cur;
    }
    mask = 0;
    prev = attr.base_value;
    for (std::size_t k = m; k-- > 0;) {
      const std::size_t j = perm[k];
      mask |= std::uint64_t{1} << j;
      const double cur = value(mask);
      marg_rev[j] = cur - prev;
      prev = cur;
    }

    for (std::size_t j = 0; j < m; ++j) {
      const double pair_mean = 0.5 * (marg_fwd[j] + marg_rev[j]);
      const double d = pair_mean - mean[j];
      mean[j] += d / static_cast<double>(pair + 1);
      m2[j] += d * (pair_mean - mean[j]);
    }
  }

  for (std::size_t j = 0; j < m; ++j) {
    attr.phis[j] = mean[j];
    if (n_pairs > 1) {
      const double var = m2[j] / static_cast<double>(n_pairs - 1);
      attr.std_errors[j] = std::sqrt(var / static_cast<double>(n_pairs));
    }
  }
  return attr;
}

}  // namespace triage::explain
