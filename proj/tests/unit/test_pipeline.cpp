#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "triage/common.hpp"
#include "triage/learners/model_io.hpp"
#include "triage/pipeline/artifacts.hpp"
#include "triage/pipeline/run.hpp"

using namespace triage;
using namespace triage::pipeline;
namespace fs = std::filesystem;

namespace {

RunConfig small_config(const fs::path& out, std::uint64_t seed = 5) {
  RunConfig cfg = default_synth_config();
  cfg.synth->n_total = 220;
  cfg.synth->advanced_fraction = 0.6;
  cfg.synth->d_a = 24;
  cfg.synth->seed = seed;
  cfg.test_n = 40;
  cfg.cv_k = 3;
  cfg.basic_grid = {{{"C", 0.1}}, {{"C", 1.0}}};
  cfg.advanced_grid = {{{"C", 0.01}}, {{"C", 0.1}}};
  cfg.triage_grid = {{{"C", 1.0}}, {{"C", 10.0}}};
  cfg.bootstrap_B = 200;
  cfg.bootstrap_enabled = false;
  cfg.out_dir = out;
  return cfg;
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("the pipeline runs end to end on a small synthetic cohort") {
  const auto dir = fresh_dir("pipe_e2e");
  const auto cfg = small_config(dir);

  const auto synth = run_synth(cfg);
  CHECK(fs::exists(synth.cohort_csv));
  CHECK(fs::exists(synth.schema_json));
  CHECK(synth.n_rows == 220);
  CHECK(synth.n_advanced == 132);

  const auto train = run_train(cfg);
  for (const auto& p : {train.split_json, train.basic_model, train.advanced_model,
                        train.triage_model, train.predictions_json, train.labels_json,
                        train.background_json, train.report_json}) {
    CHECK(fs::exists(p));
  }
  CHECK(train.triage_cv_auroc > 0.0);
  CHECK(train.n_escalation_labels_positive > 0);

  const auto thr = run_threshold(cfg);
  CHECK(fs::exists(thr.curve_csv));
  CHECK(fs::exists(thr.policy_json));
  CHECK(thr.tau >= 0.0);
  CHECK(thr.tau <= 1.0);

  const auto eval = run_evaluate(cfg);
  CHECK(fs::exists(eval.report_json));
  CHECK(fs::exists(eval.roc_csv));
  CHECK(fs::exists(eval.pr_csv));
  CHECK(fs::exists(eval.cost_csv));
  CHECK(eval.realized_escalation_rate >= 0.0);
  CHECK(eval.realized_escalation_rate <= 1.0);

  const auto report = slurp(eval.report_json);
  for (const char* key : {"\"basic\"", "\"advanced\"", "\"cascade\"", "\"random\"",
                          "\"top_prob\"", "\"most_uncertain\"", "escalated_vs_kept",
                          "test_vs_train"}) {
    CHECK(report.find(key) != std::string::npos);
  }

  // predict over the emitted cohort: rows without the advanced block that the
  // triage model wants escalated come back as advanced-required
  const auto pred = run_predict(cfg, thr.policy_json, synth.cohort_csv);
  CHECK(pred.n_rows == 220);
  CHECK(pred.n_row_errors == 0);
  const auto decisions = slurp(pred.decisions_jsonl);
  CHECK(std::count(decisions.begin(), decisions.end(), '\n') == 220);

  // explain two patients against the train-time background
  const auto patients_csv = dir / "two.csv";
  {
    const auto all = slurp(synth.cohort_csv);
    std::ofstream out(patients_csv);
    std::size_t pos = 0;
    for (int line = 0; line < 3; ++line) {  // header + 2 rows
      const auto next = all.find('\n', pos);
      out << all.substr(pos, next - pos + 1);
      pos = next + 1;
    }
  }
  const auto expl = run_explain(cfg, thr.policy_json, patients_csv, std::nullopt);
  CHECK(expl.record_files.size() == 4);  // json + csv per patient
  for (const auto& p : expl.record_files) CHECK(fs::exists(p));
}

TEST_CASE("tampered prediction provenance is rejected at threshold time") {
  const auto dir = fresh_dir("pipe_leak");
  const auto cfg = small_config(dir);
  run_synth(cfg);
  run_train(cfg);

  auto text = slurp(dir / "predictions.json");
  const auto pos = text.find("\"out_of_fold\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 13, "\"in_sample\"");
  std::ofstream(dir / "predictions.json", std::ios::trunc) << text;

  try {
    run_threshold(cfg);
    FAIL("expected leakage_detected");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::leakage_detected);
  }
}

TEST_CASE("an overdemanding delta fails with actionable guidance") {
  const auto dir = fresh_dir("pipe_delta");
  auto cfg = small_config(dir);
  cfg.delta = 0.499;  // no row can gain this much certainty
  run_synth(cfg);
  try {
    run_train(cfg);
    FAIL("expected single_class guidance");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::single_class);
    CHECK(std::string(e.what()).find("delta") != std::string::npos);
  }
}

TEST_CASE("fixed threshold strategy writes tau through exactly") {
  const auto dir = fresh_dir("pipe_fixed");
  auto cfg = small_config(dir);
  cfg.threshold.kind = cascade::ThresholdStrategy::Kind::fixed;
  cfg.threshold.fixed_tau = 0.05;
  run_synth(cfg);
  run_train(cfg);
  const auto thr = run_threshold(cfg);
  CHECK(thr.tau == 0.05);
  const auto policy = learners::load_policy_file(dir / "policy.json");
  CHECK(policy.tau == 0.05);  // hex-float storage: bit-exact round trip
  CHECK(policy.strategy == "fixed");
}

TEST_CASE("two runs with one config produce identical artifacts") {
  const auto dir_a = fresh_dir("pipe_det_a");
  const auto dir_b = fresh_dir("pipe_det_b");
  for (const auto& dir : {dir_a, dir_b}) {
    auto cfg = small_config(dir, 9);
    cfg.bootstrap_enabled = true;
    cfg.bootstrap_B = 150;
    run_synth(cfg);
    run_train(cfg);
    run_threshold(cfg);
    run_evaluate(cfg);
  }
  for (const char* name :
       {"cohort.csv", "schema.json", "split.json", "basic_model.json", "advanced_model.json",
        "triage_model.json", "predictions.json", "triage_labels.json", "triage_background.json",
        "train_report.json", "risk_coverage.csv", "policy.json", "eval_report.json",
        "roc_curves.csv", "pr_curves.csv", "cost_curve.csv"}) {
    INFO(name);
    CHECK(file_checksum(dir_a / name) == file_checksum(dir_b / name));
  }
}

TEST_CASE("evaluate reports paired tests when the bootstrap is enabled") {
  const auto dir = fresh_dir("pipe_boot");
  auto cfg = small_config(dir, 4);
  cfg.bootstrap_enabled = true;
  cfg.bootstrap_B = 150;
  run_synth(cfg);
  run_train(cfg);
  run_threshold(cfg);
  const auto eval = run_evaluate(cfg);
  const auto report = slurp(eval.report_json);
  CHECK(report.find("cascade_vs_basic") != std::string::npos);
  CHECK(report.find("cascade_vs_most_uncertain") != std::string::npos);
  CHECK(report.find("\"ci\"") != std::string::npos);
}
