#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "triage/common.hpp"
#include "triage/cascade/baselines.hpp"
#include "triage/cascade/policy.hpp"
#include "triage/cascade/risk_coverage.hpp"
#include "triage/data/synth.hpp"
#include "triage/rng.hpp"

using namespace triage;
using namespace triage::cascade;

namespace {

learners::PredictionSet oof(std::vector<double> probs) {
  return {std::move(probs), learners::PredictionSource::out_of_fold};
}

// Classifier that always outputs probability p: zero weights, logit intercept.
FittedClassifier constant_classifier(const data::Preprocessor& prep, double p) {
  learners::LogRegModel model;
  model.weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(prep.width()));
  model.intercept = std::log(p / (1.0 - p));
  return {prep, learners::ClassifierModel{model}, {{"C", 1.0}}};
}

struct PolicyFixture {
  data::CohortTable cohort;
  data::Preprocessor prep_basic;
  data::Preprocessor prep_advanced;

  PolicyFixture() {
    data::SynthConfig cfg;
    cfg.n_total = 40;
    cfg.d_a = 3;
    cfg.seed = 6;
    cohort = data::generate_cohort(cfg);
    prep_basic = data::Preprocessor::fit(cohort, data::ColumnGroup::basic);
    prep_advanced = data::Preprocessor::fit(cohort, data::ColumnGroup::basic_and_advanced);
  }

  CascadePolicy make(double p_basic, double p_advanced, double g, double tau) const {
    CascadePolicy policy;
    policy.basic = constant_classifier(prep_basic, p_basic);
    policy.advanced = constant_classifier(prep_advanced, p_advanced);
    policy.triage = constant_classifier(prep_basic, g);
    policy.tau = tau;
    policy.delta = 0.2;
    return policy;
  }
};

}  // namespace

TEST_CASE("certainty is the distance from maximal ambiguity") {
  CHECK(certainty(0.5) == 0.0);
  CHECK(certainty(1.0) == 0.5);
  CHECK(certainty(0.0) == 0.5);
  CHECK(certainty(0.73) == doctest::Approx(0.23).epsilon(1e-12));
  CHECK_THROWS_AS(certainty(1.5), Error);
  CHECK_THROWS_AS(certainty(-0.1), Error);
}

TEST_CASE("triage labels fire exactly when the certainty gain clears delta") {
  const auto l1 = make_triage_labels(oof({0.5}), oof({0.9}), 0.2);
  CHECK(l1.z == std::vector<int>{1});  // gain 0.4 > 0.2

  const auto l2 = make_triage_labels(oof({0.9}), oof({0.9}), 0.2);
  CHECK(l2.z == std::vector<int>{0});  // gain 0

  const auto l3 = make_triage_labels(oof({0.1}), oof({0.5}), 0.2);
  CHECK(l3.z == std::vector<int>{0});  // advanced LESS certain

  CHECK_THROWS_AS(make_triage_labels(oof({0.5, 0.5}), oof({0.9}), 0.2), Error);
  CHECK_THROWS_AS(make_triage_labels(oof({0.5}), oof({0.9}), 0.0), Error);
  CHECK_THROWS_AS(make_triage_labels(oof({0.5}), oof({0.9}), -1.0), Error);
}

TEST_CASE("triage labels refuse in-sample predictions") {
  learners::PredictionSet in_sample{{0.5, 0.6}, learners::PredictionSource::in_sample};
  try {
    make_triage_labels(in_sample, oof({0.9, 0.9}), 0.2);
    FAIL("expected leakage rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::leakage_detected);
  }
  CHECK_THROWS_AS(make_triage_labels(oof({0.9, 0.9}), in_sample, 0.2), Error);
}

TEST_CASE("label construction is symmetric in the positive-class convention") {
  Rng rng(44);
  std::vector<double> pb(50), pa(50);
  for (std::size_t i = 0; i < 50; ++i) {
    pb[i] = rng.uniform();
    pa[i] = rng.uniform();
  }
  std::vector<double> pb_flip(50), pa_flip(50);
  for (std::size_t i = 0; i < 50; ++i) {
    pb_flip[i] = 1.0 - pb[i];
    pa_flip[i] = 1.0 - pa[i];
  }
  const auto a = make_triage_labels(oof(pb), oof(pa), 0.15);
  const auto b = make_triage_labels(oof(pb_flip), oof(pa_flip), 0.15);
  CHECK(a.z == b.z);
}

TEST_CASE("cascade routes by the strict tau rule") {
  const PolicyFixture fx;
  const auto& schema = fx.cohort.schema();
  const auto advanced_rows = fx.cohort.advanced_available_indices();
  const auto& rec = fx.cohort.row(advanced_rows[0]);

  const auto low = cascade_predict(fx.make(0.7, 0.9, 0.04, 0.05), rec, schema);
  CHECK(low.escalate == false);
  CHECK(low.route == Route::basic);
  CHECK(low.final_probability == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(low.certainty_before == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(!low.certainty_after.has_value());

  const auto high = cascade_predict(fx.make(0.7, 0.9, 0.50, 0.05), rec, schema);
  CHECK(high.escalate);
  CHECK(high.route == Route::advanced);
  CHECK(high.final_probability == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(high.certainty_after.has_value());
  CHECK(*high.certainty_after == doctest::Approx(0.4).epsilon(1e-9));

  // tau = 1 never escalates (scores are probabilities, g <= 1)
  const auto never = cascade_predict(fx.make(0.7, 0.9, 0.999, 1.0), rec, schema);
  CHECK(never.escalate == false);

  // boundary: g == tau stays with the basic model
  const auto boundary = cascade_predict(fx.make(0.7, 0.9, 0.5, 0.5), rec, schema);
  CHECK(boundary.escalate == false);
}

TEST_CASE("escalation without advanced features raises the ordering signal") {
  const PolicyFixture fx;
  const auto& schema = fx.cohort.schema();
  std::size_t basic_only = 0;
  while (fx.cohort.row(basic_only).advanced_available) ++basic_only;
  try {
    cascade_predict(fx.make(0.7, 0.9, 0.50, 0.05), fx.cohort.row(basic_only), schema);
    FAIL("expected advanced_features_required");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::advanced_features_required);
  }
}

TEST_CASE("risk-coverage endpoints behave as identities") {
  const std::vector<double> g = {0.2, 0.6, 0.4, 0.8};
  const std::vector<double> pb = {0.9, 0.2, 0.8, 0.3};
  const std::vector<int> y = {1, 1, 0, 0};  // basic errs on rows 1 (p .2) and 2 (p .8)
  const auto curve = risk_coverage_curve(g, pb, y);

  CHECK(curve.front().coverage == 0.0);
  CHECK(curve.front().risk == 0.0);
  CHECK(curve.front().n_kept == 0);
  CHECK(curve.back().coverage == 1.0);
  CHECK(curve.back().risk == doctest::Approx(0.5));  // overall basic error rate
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].coverage > curve[i - 1].coverage);
  }
}

TEST_CASE("risk-coverage matches the spec's 4-row example") {
  const std::vector<double> g = {0.1, 0.2, 0.3, 0.4};
  const std::vector<double> pb = {0.9, 0.1, 0.2, 0.7};
  const std::vector<int> y = {1, 0, 1, 0};  // rows 3 and 4 misclassified
  const auto curve = risk_coverage_curve(g, pb, y);
  REQUIRE(curve.size() == 5);
  CHECK(curve[2].coverage == doctest::Approx(0.5));
  CHECK(curve[2].risk == 0.0);
  CHECK(curve[4].coverage == doctest::Approx(1.0));
  CHECK(curve[4].risk == doctest::Approx(0.5));
}

TEST_CASE("risk-coverage equals the exhaustive prefix oracle for n <= 12") {
  Rng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.below(11);
    std::vector<double> g(n), pb(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = static_cast<double>(rng.below(6)) / 5.0;  // ties likely
      pb[i] = rng.uniform();
      y[i] = rng.below(2) ? 1 : 0;
    }
    const auto curve = risk_coverage_curve(g, pb, y);

    // oracle: all distinct kept-sets {i: g_i <= s} for s in sorted unique scores
    std::vector<double> uniq(g);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    REQUIRE(curve.size() == uniq.size() + 1);
    for (std::size_t u = 0; u < uniq.size(); ++u) {
      std::size_t kept = 0, errors = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (g[i] <= uniq[u]) {
          ++kept;
          if ((pb[i] > 0.5) != (y[i] > 0)) ++errors;
        }
      }
      const auto& pt = curve[u + 1];
      REQUIRE(pt.n_kept == kept);
      REQUIRE(pt.coverage == doctest::Approx(double(kept) / double(n)).epsilon(1e-12));
      REQUIRE(pt.risk == doctest::Approx(double(errors) / double(kept)).epsilon(1e-12));
    }
  }
}

TEST_CASE("threshold selection honours the risk cap") {
  std::vector<RiskCoveragePoint> curve = {
      {0.01, 0.0, 0.0, 0, -1e300},
      {0.05, 0.19, 0.08, 19, 0.04},
      {0.9, 1.0, 0.28, 100, 0.8},
  };
  ThresholdStrategy cap;
  cap.kind = ThresholdStrategy::Kind::max_coverage_under_risk;
  cap.r_max = 0.08;
  const auto sel = select_threshold(curve, cap);
  CHECK(sel.chosen.coverage == doctest::Approx(0.19));
  CHECK(sel.tau == doctest::Approx(0.05));
  CHECK(sel.feasible);

  cap.r_max = 0.5;  // slack: everything qualifies
  CHECK(select_threshold(curve, cap).chosen.coverage == doctest::Approx(1.0));

  cap.r_max = -1.0;  // nothing qualifies, not even the empty set
  const auto fallback = select_threshold(curve, cap);
  CHECK(fallback.feasible == false);
  CHECK(fallback.chosen.coverage == 0.0);
  CHECK(!fallback.warning.empty());
}

TEST_CASE("single-point curves select that point under every strategy") {
  const std::vector<RiskCoveragePoint> curve = {{0.3, 0.6, 0.1, 6, 0.25}};
  for (auto kind : {ThresholdStrategy::Kind::max_coverage_under_risk,
                    ThresholdStrategy::Kind::knee}) {
    ThresholdStrategy s;
    s.kind = kind;
    s.r_max = 0.5;
    CHECK(select_threshold(curve, s).chosen.coverage == doctest::Approx(0.6));
  }
  ThresholdStrategy fixed;
  fixed.kind = ThresholdStrategy::Kind::fixed;
  fixed.fixed_tau = 0.05;
  CHECK(select_threshold(curve, fixed).tau == 0.05);
  CHECK_THROWS_AS(select_threshold({}, fixed), Error);
}

TEST_CASE("knee picks the point farthest from the chord") {
  std::vector<RiskCoveragePoint> curve = {
      {0.0, 0.0, 0.0, 0, -1e300},
      {0.1, 0.2, 0.01, 2, 0.05},   // close to the ideal corner
      {0.5, 0.5, 0.25, 5, 0.4},
      {0.9, 1.0, 0.5, 10, 0.8},
  };
  ThresholdStrategy knee;
  knee.kind = ThresholdStrategy::Kind::knee;
  const auto sel = select_threshold(curve, knee);
  CHECK(sel.chosen.coverage == doctest::Approx(0.2));
}

TEST_CASE("baselines escalate exactly round(rate*n) rows") {
  const std::vector<double> pb = {0.5, 0.9, 0.45, 0.1};

  CHECK(baseline_policy(BaselineKind::random, 0.0, pb, 1) ==
        std::vector<std::uint8_t>{0, 0, 0, 0});
  CHECK(baseline_policy(BaselineKind::random, 1.0, pb, 1) ==
        std::vector<std::uint8_t>{1, 1, 1, 1});

  // most uncertain at rate .5: certainties {0, .4, .05, .4} -> rows 0 and 2
  const auto unc = baseline_policy(BaselineKind::most_uncertain, 0.5, pb, 0);
  CHECK(unc == std::vector<std::uint8_t>{1, 0, 1, 0});

  // top probability at rate .5 -> rows 1 (0.9) and 0 (0.5)
  const auto top = baseline_policy(BaselineKind::top_prob, 0.5, pb, 0);
  CHECK(top == std::vector<std::uint8_t>{1, 1, 0, 0});

  CHECK_THROWS_AS(baseline_policy(BaselineKind::random, 1.5, pb, 0), Error);
}

TEST_CASE("tied scores break toward the lower row index") {
  const std::vector<double> pb = {0.8, 0.8, 0.8, 0.8};
  const auto top = baseline_policy(BaselineKind::top_prob, 0.5, pb, 0);
  CHECK(top == std::vector<std::uint8_t>{1, 1, 0, 0});
}

TEST_CASE("random baseline is seed-reproducible and seed-sensitive") {
  std::vector<double> pb(1000, 0.5);
  const auto a = baseline_policy(BaselineKind::random, 0.8, pb, 42);
  const auto b = baseline_policy(BaselineKind::random, 0.8, pb, 42);
  const auto c = baseline_policy(BaselineKind::random, 0.8, pb, 43);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(std::count(a.begin(), a.end(), 1) == 800);
}

TEST_CASE("baseline cardinality holds across random rates") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    std::vector<double> pb(n);
    for (auto& v : pb) v = rng.uniform();
    const double rate = rng.uniform();
    for (auto kind : {BaselineKind::random, BaselineKind::top_prob, BaselineKind::most_uncertain}) {
      const auto mask = baseline_policy(kind, rate, pb, trial);
      const auto k = static_cast<long>(std::llround(rate * static_cast<double>(n)));
      CHECK(std::count(mask.begin(), mask.end(), 1) == k);
    }
  }
}

TEST_CASE("degenerate triage scores reduce the cascade to a single model") {
  const PolicyFixture fx;
  const auto& schema = fx.cohort.schema();
  const auto rows = fx.cohort.advanced_available_indices();

  // scores ~0 with tau >= 0: identical to basic alone
  auto never = fx.make(0.7, 0.9, 1e-9, 0.05);
  for (auto i : rows) {
    const auto d = cascade_predict(never, fx.cohort.row(i), schema);
    CHECK(d.route == Route::basic);
    CHECK(d.final_probability == doctest::Approx(0.7).epsilon(1e-9));
  }

  // scores ~1 with tau < 1: identical to advanced alone on advanced rows
  auto always = fx.make(0.7, 0.9, 1.0 - 1e-9, 0.999);
  for (auto i : rows) {
    const auto d = cascade_predict(always, fx.cohort.row(i), schema);
    CHECK(d.route == Route::advanced);
    CHECK(d.final_probability == doctest::Approx(0.9).epsilon(1e-9));
  }
}
