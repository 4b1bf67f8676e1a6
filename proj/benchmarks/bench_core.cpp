#include <benchmark/benchmark.h>

#include "triage/cascade/risk_coverage.hpp"
#include "triage/data/preprocess.hpp"
#include "triage/data/synth.hpp"
#include "triage/eval/bootstrap.hpp"
#include "triage/eval/metrics.hpp"
#include "triage/explain/explain.hpp"
#include "triage/learners/logreg.hpp"
#include "triage/learners/svm.hpp"
#include "triage/rng.hpp"

using namespace triage;

namespace {

struct Workload {
  data::CohortTable cohort;
  data::Preprocessor prep_basic;
  data::Preprocessor prep_advanced;
  Eigen::MatrixXd X_basic;
  Eigen::MatrixXd X_advanced;
  std::vector<int> y;

  static const Workload& instance() {
    static Workload w = [] {
      Workload out;
      data::SynthConfig cfg;
      cfg.n_total = 451;
      cfg.advanced_fraction = 1.0;
      cfg.seed = 1;
      out.cohort = data::generate_cohort(cfg);
      out.prep_basic = data::Preprocessor::fit(out.cohort, data::ColumnGroup::basic);
      out.prep_advanced =
          data::Preprocessor::fit(out.cohort, data::ColumnGroup::basic_and_advanced);
      out.X_basic = out.prep_basic.transform(out.cohort);
      out.X_advanced = out.prep_advanced.transform(out.cohort);
      out.y = out.cohort.labels();
      return out;
    }();
    return w;
  }
};

void BM_GenerateCohort(benchmark::State& state) {
  data::SynthConfig cfg;
  cfg.n_total = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto cohort = data::generate_cohort(cfg);
    benchmark::DoNotOptimize(cohort);
    cfg.seed += 1;
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GenerateCohort)->Arg(256)->Arg(1142)->Complexity();

void BM_FitLogRegBasic(benchmark::State& state) {
  const auto& w = Workload::instance();
  for (auto _ : state) {
    auto model = learners::fit_logreg(w.X_basic, w.y, 0.1);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_FitLogRegBasic);

void BM_FitLogRegAdvanced(benchmark::State& state) {
  const auto& w = Workload::instance();
  for (auto _ : state) {
    auto model = learners::fit_logreg(w.X_advanced, w.y, 0.01);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_FitLogRegAdvanced);

void BM_FitSvmRbf(benchmark::State& state) {
  const auto& w = Workload::instance();
  for (auto _ : state) {
    auto model = learners::fit_svm_rbf(w.X_basic, w.y, 10.0);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_FitSvmRbf);

void BM_Auroc(benchmark::State& state) {
  Rng rng(5);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> s(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = rng.below(2) ? 1 : 0;
    s[i] = rng.normal() + y[i];
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::auroc(s, y));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Auroc)->Range(1 << 8, 1 << 16)->Complexity();

void BM_BootstrapAurocCI(benchmark::State& state) {
  Rng rng(7);
  std::vector<double> s(100);
  std::vector<int> y(100);
  for (std::size_t i = 0; i < 100; ++i) {
    y[i] = rng.below(2) ? 1 : 0;
    s[i] = rng.normal() + 1.5 * y[i];
  }
  const eval::MetricFn metric = [](auto sc, auto l) { return eval::auroc(sc, l); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::bootstrap_ci(metric, s, y, 1000, 3));
  }
}
BENCHMARK(BM_BootstrapAurocCI);

void BM_RiskCoverageCurve(benchmark::State& state) {
  Rng rng(11);
  const std::size_t n = 451;
  std::vector<double> g(n), pb(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = rng.uniform();
    pb[i] = rng.uniform();
    y[i] = rng.below(2) ? 1 : 0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(cascade::risk_coverage_curve(g, pb, y));
  }
}
BENCHMARK(BM_RiskCoverageCurve);

void BM_ExactShapley(benchmark::State& state) {
  const auto& w = Workload::instance();
  const auto model = learners::fit_svm_rbf(w.X_basic, w.y, 10.0);
  const explain::ScoreFn score = [&model](const Eigen::MatrixXd& rows) {
    return learners::predict_proba(model, rows);
  };
  const explain::BackgroundSet bg{w.X_basic.topRows(100)};
  const auto groups = explain::feature_groups_of(w.prep_basic);
  Eigen::RowVectorXd x = w.X_basic.row(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(explain::exact_shapley(score, bg, x, groups));
  }
}
BENCHMARK(BM_ExactShapley);

}  // namespace

BENCHMARK_MAIN();
