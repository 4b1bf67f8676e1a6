#include "triage/pipeline/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "jsonio.hpp"
#include "triage/cascade/baselines.hpp"
#include "triage/cascade/policy.hpp"
#include "triage/common.hpp"
#include "triage/data/split.hpp"
#include "triage/eval/balance.hpp"
#include "triage/eval/bootstrap.hpp"
#include "triage/eval/cost.hpp"
#include "triage/eval/metrics.hpp"
#include "triage/explain/explain.hpp"
#include "triage/learners/grid.hpp"
#include "triage/learners/model_io.hpp"
#include "triage/pipeline/artifacts.hpp"
#include "triage/rng.hpp"

namespace triage::pipeline {

using jsonio::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// The cohort a run operates on: either loaded from the configured CSV or
// generated (and persisted) from the synth block.
data::CohortTable resolve_cohort(const RunConfig& config) {
  if (config.cohort_path) {
    const auto schema = data::load_schema(*config.schema_path);
    return data::load_cohort(*config.cohort_path, schema);
  }
  const auto csv = config.out_dir / "cohort.csv";
  const auto schema_file = config.out_dir / "schema.json";
  if (std::filesystem::exists(csv) && std::filesystem::exists(schema_file)) {
    return data::load_cohort(csv, data::load_schema(schema_file));
  }
  data::CohortTable cohort = data::generate_cohort(*config.synth);
  data::save_cohort_csv(cohort, csv);
  data::save_schema(cohort.schema(), schema_file);
  return cohort;
}

json grid_result_to_json(const learners::GridSearchResult& res) {
  json j;
  json points = json::array();
  for (std::size_t i = 0; i < res.grid.size(); ++i) {
    json p;
    for (const auto& [k, v] : res.grid[i]) p["params"][k] = v;
    p["mean_score"] = res.mean_scores[i];
    points.push_back(std::move(p));
  }
  j["points"] = std::move(points);
  json best;
  for (const auto& [k, v] : res.best_point()) best[k] = v;
  j["best"] = std::move(best);
  j["best_score"] = res.best_score;
  if (!res.warnings.empty()) j["warnings"] = res.warnings;
  return j;
}

json balance_to_json(const eval::BalanceTable& table, const std::string& group_a,
                     const std::string& group_b) {
  json j;
  j["group_a"] = group_a;
  j["group_b"] = group_b;
  j["n_a"] = table.n_a;
  j["n_b"] = table.n_b;
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back(json{{"characteristic", r.name},
                        {"group_a", r.summary_a},
                        {"group_b", r.summary_b},
                        {"p_value", r.p_value},
                        {"test", r.test_kind}});
  }
  j["rows"] = std::move(rows);
  return j;
}

std::vector<double> to_vec(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

SynthOutputs run_synth(const RunConfig& config) {
  require(config.synth.has_value(), Errc::invalid_config, "synth command needs a synth block");
  ManifestWriter manifest("synth", config.out_dir);

  data::CohortTable cohort = data::generate_cohort(*config.synth);
  SynthOutputs out;
  out.cohort_csv = config.out_dir / "cohort.csv";
  out.schema_json = config.out_dir / "schema.json";
  data::save_cohort_csv(cohort, out.cohort_csv);
  data::save_schema(cohort.schema(), out.schema_json);
  out.n_rows = cohort.size();
  out.n_advanced = cohort.advanced_available_indices().size();

  manifest.add_artifact(out.cohort_csv);
  manifest.add_artifact(out.schema_json);
  manifest.add_note("n_rows", std::to_string(out.n_rows));
  manifest.add_note("n_advanced_available", std::to_string(out.n_advanced));
  out.manifest = manifest.finish();
  return out;
}

TrainOutputs run_train(const RunConfig& config) {
  ManifestWriter manifest("train", config.out_dir);
  const data::CohortTable cohort = resolve_cohort(config);

  const data::CohortSplit split = split_cohort(cohort, config.test_n, config.split_seed);
  const data::SplitIndices idx = resolve_split(cohort, split);

  TrainOutputs out;
  out.split_json = config.out_dir / "split.json";
  data::save_split(split, out.split_json);

  // Basic model: all non-test rows, basic features.
  const data::CohortTable basic_train = cohort.subset(idx.basic_train);
  const data::Preprocessor prep_basic =
      data::Preprocessor::fit(basic_train, data::ColumnGroup::basic);
  const Eigen::MatrixXd X_basic = prep_basic.transform(basic_train);
  const std::vector<int> y_basic = basic_train.labels();
  const learners::CvPlan plan_basic =
      learners::make_cv_plan(y_basic.size(), config.cv_k, y_basic,
                             Rng::derive(config.cv_seed, 1).next_u64(), config.cv_stratified);
  const auto basic_search = learners::grid_search(learners::LearnerKind::logreg,
                                                  config.basic_grid, X_basic, y_basic, plan_basic);
  cascade::FittedClassifier basic{
      prep_basic,
      learners::fit_classifier(learners::LearnerKind::logreg, basic_search.best_point(), X_basic,
                               y_basic),
      basic_search.best_point()};

  // Advanced model: advanced-available training rows, basic+advanced features.
  const data::CohortTable adv_train = cohort.subset(idx.advanced_train);
  const data::Preprocessor prep_adv =
      data::Preprocessor::fit(adv_train, data::ColumnGroup::basic_and_advanced);
  const Eigen::MatrixXd X_adv = prep_adv.transform(adv_train);
  const std::vector<int> y_adv = adv_train.labels();
  const learners::CvPlan plan_adv =
      learners::make_cv_plan(y_adv.size(), config.cv_k, y_adv,
                             Rng::derive(config.cv_seed, 2).next_u64(), config.cv_stratified);
  const auto adv_search = learners::grid_search(learners::LearnerKind::logreg,
                                                config.advanced_grid, X_adv, y_adv, plan_adv);
  cascade::FittedClassifier advanced{
      prep_adv,
      learners::fit_classifier(learners::LearnerKind::logreg, adv_search.best_point(), X_adv,
                               y_adv),
      adv_search.best_point()};

  // Out-of-fold probabilities on the advanced-train cohort feed the triage
  // labels; one shared plan keeps the two vectors row-aligned.
  const Eigen::MatrixXd X_basic_of_adv = prep_basic.transform(adv_train);
  const learners::CvPlan plan_oof =
      learners::make_cv_plan(y_adv.size(), config.cv_k, y_adv,
                             Rng::derive(config.cv_seed, 3).next_u64(), config.cv_stratified);
  const learners::PredictionSet p_basic_oof = learners::cross_val_predict(
      learners::LearnerKind::logreg, basic_search.best_point(), X_basic_of_adv, y_adv, plan_oof);
  const learners::PredictionSet p_adv_oof = learners::cross_val_predict(
      learners::LearnerKind::logreg, adv_search.best_point(), X_adv, y_adv, plan_oof);

  const cascade::TriageLabels labels =
      cascade::make_triage_labels(p_basic_oof, p_adv_oof, config.delta);
  out.n_escalation_labels_positive = labels.n_positive;
  if (labels.n_positive == 0 || labels.n_positive == labels.z.size()) {
    raise(Errc::single_class,
          "escalation labels are all " + std::to_string(labels.n_positive ? 1 : 0) +
              "; adjust delta (" + std::to_string(labels.delta) +
              ") so the certainty-gain margin splits the cohort");
  }

  // Triage model: basic features, escalation supervision.
  const learners::CvPlan plan_triage =
      learners::make_cv_plan(labels.z.size(), config.cv_k, labels.z,
                             Rng::derive(config.cv_seed, 4).next_u64(), config.cv_stratified);
  const auto triage_search =
      learners::grid_search(learners::LearnerKind::svm_rbf, config.triage_grid, X_basic_of_adv,
                            labels.z, plan_triage);
  cascade::FittedClassifier triage{
      prep_basic,
      learners::fit_classifier(learners::LearnerKind::svm_rbf, triage_search.best_point(),
                               X_basic_of_adv, labels.z),
      triage_search.best_point()};
  out.triage_cv_auroc = triage_search.best_score;

  const Eigen::VectorXd g_scores = triage.model.predict_proba(X_basic_of_adv);

  out.basic_model = config.out_dir / "basic_model.json";
  out.advanced_model = config.out_dir / "advanced_model.json";
  out.triage_model = config.out_dir / "triage_model.json";
  learners::save_classifier(basic, out.basic_model);
  learners::save_classifier(advanced, out.advanced_model);
  learners::save_classifier(triage, out.triage_model);

  json preds;
  preds["ids"] = split.advanced_train;
  preds["labels"] = y_adv;
  preds["p_basic_oof"] = jsonio::encode_doubles(p_basic_oof.probs);
  preds["p_advanced_oof"] = jsonio::encode_doubles(p_adv_oof.probs);
  preds["g_scores"] = jsonio::encode_vector(g_scores);
  preds["fold_of"] = plan_oof.fold_of;
  preds["provenance"] = "out_of_fold";
  out.predictions_json = config.out_dir / "predictions.json";
  jsonio::write_json_file(out.predictions_json, preds);

  json labels_j;
  labels_j["delta"] = jsonio::encode_double(labels.delta);
  labels_j["z"] = labels.z;
  labels_j["n_positive"] = labels.n_positive;
  labels_j["source"] = json{{"basic", "p_basic_oof"}, {"advanced", "p_advanced_oof"}};
  out.labels_json = config.out_dir / "triage_labels.json";
  jsonio::write_json_file(out.labels_json, labels_j);

  const explain::BackgroundSet background =
      explain::make_background(X_basic_of_adv, config.background_cap, config.background_seed);
  json bg;
  bg["rows"] = jsonio::encode_matrix(background.rows);
  out.background_json = config.out_dir / "triage_background.json";
  jsonio::write_json_file(out.background_json, bg);

  json report;
  report["sizes"] = json{{"basic_train", idx.basic_train.size()},
                         {"advanced_train", idx.advanced_train.size()},
                         {"test", idx.test.size()}};
  report["basic_grid"] = grid_result_to_json(basic_search);
  report["advanced_grid"] = grid_result_to_json(adv_search);
  report["triage_grid"] = grid_result_to_json(triage_search);
  report["triage_cv_auroc"] = triage_search.best_score;
  report["escalation_label_positives"] = labels.n_positive;
  report["escalation_label_total"] = labels.z.size();
  out.report_json = config.out_dir / "train_report.json";
  jsonio::write_json_file(out.report_json, report);

  for (const auto& p :
       {out.split_json, out.basic_model, out.advanced_model, out.triage_model,
        out.predictions_json, out.labels_json, out.background_json, out.report_json}) {
    manifest.add_artifact(p);
  }
  manifest.add_note("triage_cv_auroc", fmt17(out.triage_cv_auroc));
  out.manifest = manifest.finish();
  return out;
}

ThresholdOutputs run_threshold(const RunConfig& config) {
  ManifestWriter manifest("threshold", config.out_dir);
  const json preds = jsonio::read_json_file(config.out_dir / "predictions.json");
  require(preds.value("provenance", std::string()) == "out_of_fold", Errc::leakage_detected,
          "threshold selection requires out-of-fold predictions");

  const auto p_basic = jsonio::decode_doubles(preds.at("p_basic_oof"));
  const Eigen::VectorXd g = jsonio::decode_vector(preds.at("g_scores"));
  const auto labels = preds.at("labels").get<std::vector<int>>();

  const auto curve = cascade::risk_coverage_curve(to_vec(g), p_basic, labels);
  const auto selection = cascade::select_threshold(curve, config.threshold);

  ThresholdOutputs out;
  out.chosen = selection.chosen;
  out.feasible = selection.feasible;
  // Escalation scores are probabilities, so tau is clamped into [0,1].
  out.tau = std::clamp(selection.tau, 0.0, 1.0);

  std::vector<std::string> lines;
  lines.reserve(curve.size());
  for (const auto& pt : curve) {
    lines.push_back(fmt17(pt.tau_candidate) + "," + fmt17(pt.coverage) + "," + fmt17(pt.risk) +
                    "," + std::to_string(pt.n_kept));
  }
  out.curve_csv = config.out_dir / "risk_coverage.csv";
  write_csv(out.curve_csv, "tau_candidate,coverage,risk,n_kept", lines);

  learners::PolicyFile policy;
  policy.tau = out.tau;
  const json labels_j = jsonio::read_json_file(config.out_dir / "triage_labels.json");
  policy.delta = jsonio::decode_double(labels_j.at("delta").get<std::string>());
  policy.basic = {"basic_model.json",
                  learners::model_fingerprint(config.out_dir / "basic_model.json")};
  policy.advanced = {"advanced_model.json",
                     learners::model_fingerprint(config.out_dir / "advanced_model.json")};
  policy.triage = {"triage_model.json",
                   learners::model_fingerprint(config.out_dir / "triage_model.json")};
  switch (config.threshold.kind) {
    case cascade::ThresholdStrategy::Kind::max_coverage_under_risk:
      policy.strategy = "max-coverage-under-risk";
      break;
    case cascade::ThresholdStrategy::Kind::knee:
      policy.strategy = "knee";
      break;
    case cascade::ThresholdStrategy::Kind::fixed:
      policy.strategy = "fixed";
      break;
  }
  policy.achieved_coverage = selection.chosen.coverage;
  policy.achieved_risk = selection.chosen.risk;
  policy.feasible = selection.feasible;
  policy.warning = selection.warning;
  out.policy_json = config.out_dir / "policy.json";
  learners::save_policy(policy, out.policy_json);

  manifest.add_artifact(out.curve_csv);
  manifest.add_artifact(out.policy_json);
  manifest.add_note("tau", fmt17(out.tau));
  manifest.add_note("coverage", fmt17(selection.chosen.coverage));
  manifest.add_note("risk", fmt17(selection.chosen.risk));
  if (!selection.warning.empty()) manifest.add_note("warning", selection.warning);
  out.manifest = manifest.finish();
  return out;
}

EvaluateOutputs run_evaluate(const RunConfig& config) {
  ManifestWriter manifest("evaluate", config.out_dir);
  const data::CohortTable cohort = resolve_cohort(config);
  const data::CohortSplit split = data::load_split(config.out_dir / "split.json");
  const data::SplitIndices idx = resolve_split(cohort, split);
  const cascade::CascadePolicy policy = learners::load_policy(config.out_dir / "policy.json");

  const std::vector<int> y = cohort.labels(idx.test);
  const auto n = idx.test.size();
  const std::vector<double> p_b = to_vec(policy.basic.predict(cohort, idx.test));
  const std::vector<double> p_a = to_vec(policy.advanced.predict(cohort, idx.test));
  const std::vector<double> g = to_vec(policy.triage.predict(cohort, idx.test));

  std::vector<std::uint8_t> escalated(n, 0);
  std::size_t n_escalated = 0;
  for (std::size_t i = 0; i < n; ++i) {
    escalated[i] = g[i] > policy.tau ? 1 : 0;
    n_escalated += escalated[i];
  }
  const double realized_rate = static_cast<double>(n_escalated) / static_cast<double>(n);

  auto mix = [&](const std::vector<std::uint8_t>& mask) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = mask[i] ? p_a[i] : p_b[i];
    return out;
  };

  const auto random_mask =
      cascade::baseline_policy(cascade::BaselineKind::random, realized_rate, p_b,
                               config.baseline_seed);
  const auto top_prob_mask =
      cascade::baseline_policy(cascade::BaselineKind::top_prob, realized_rate, p_b, 0);
  const auto uncertain_mask =
      cascade::baseline_policy(cascade::BaselineKind::most_uncertain, realized_rate, p_b, 0);

  const std::vector<std::pair<std::string, std::vector<double>>> policies = {
      {"basic", p_b},
      {"advanced", p_a},
      {"cascade", mix(escalated)},
      {"random", mix(random_mask)},
      {"top_prob", mix(top_prob_mask)},
      {"most_uncertain", mix(uncertain_mask)},
  };

  const std::vector<std::pair<std::string, eval::MetricFn>> metric_fns = {
      {"auroc", [](auto s, auto l) { return eval::auroc(s, l); }},
      {"auprc", [](auto s, auto l) { return eval::auprc(s, l); }},
      {"accuracy", [](auto s, auto l) { return eval::thresholded_metrics(s, l, 0.5).accuracy; }},
      {"recall", [](auto s, auto l) { return eval::thresholded_metrics(s, l, 0.5).recall; }},
      {"precision",
       [](auto s, auto l) { return eval::thresholded_metrics(s, l, 0.5).precision; }},
  };

  json report;
  report["n_test"] = n;
  report["tau"] = policy.tau;
  report["delta"] = policy.delta;
  report["realized_escalation_rate"] = realized_rate;
  report["bootstrap"] =
      config.bootstrap_enabled
          ? json{{"B", config.bootstrap_B}, {"seed", config.bootstrap_seed}}
          : json(nullptr);

  for (const auto& [name, scores] : policies) {
    json pj;
    const auto ms = eval::thresholded_metrics(scores, y, 0.5);
    pj["point"] = json{{"auroc", ms.auroc},
                       {"auprc", ms.auprc},
                       {"accuracy", ms.accuracy},
                       {"recall", ms.recall},
                       {"precision", ms.precision}};
    if (ms.precision_undefined) pj["point"]["precision_undefined"] = true;
    if (config.bootstrap_enabled) {
      for (std::size_t mi = 0; mi < metric_fns.size(); ++mi) {
        const auto ci = eval::bootstrap_ci(metric_fns[mi].second, scores, y, config.bootstrap_B,
                                           Rng::derive(config.bootstrap_seed, mi).next_u64());
        pj["ci"][metric_fns[mi].first] =
            json{{"lower", ci.lower}, {"upper", ci.upper}};
      }
    }
    report["policies"][name] = std::move(pj);
  }

  if (config.bootstrap_enabled) {
    json tests = json::array();
    const auto& cascade_scores = policies[2].second;
    for (std::size_t pi = 0; pi < policies.size(); ++pi) {
      if (policies[pi].first == "cascade") continue;
      const auto t = eval::paired_delta_auroc(
          cascade_scores, policies[pi].second, y, config.bootstrap_B,
          Rng::derive(config.bootstrap_seed, 100 + pi).next_u64());
      tests.push_back(json{{"comparison", "cascade_vs_" + policies[pi].first},
                           {"delta_auroc", t.delta},
                           {"p_value", t.p_value},
                           {"significant", t.p_value < 0.05}});
    }
    report["paired_tests"] = std::move(tests);
  }

  EvaluateOutputs out;
  out.realized_escalation_rate = realized_rate;

  std::vector<std::string> roc_lines, pr_lines;
  for (const auto& [name, scores] : policies) {
    for (const auto& pt : eval::roc_points(scores, y)) {
      roc_lines.push_back(name + "," + fmt17(pt.fpr) + "," + fmt17(pt.tpr) + "," +
                          fmt17(pt.threshold));
    }
    for (const auto& pt : eval::pr_points(scores, y)) {
      pr_lines.push_back(name + "," + fmt17(pt.recall) + "," + fmt17(pt.precision) + "," +
                         fmt17(pt.threshold));
    }
  }
  out.roc_csv = config.out_dir / "roc_curves.csv";
  out.pr_csv = config.out_dir / "pr_curves.csv";
  write_csv(out.roc_csv, "policy,fpr,tpr,threshold", roc_lines);
  write_csv(out.pr_csv, "policy,recall,precision,threshold", pr_lines);

  std::vector<double> rates(21);
  for (int i = 0; i <= 20; ++i) rates[static_cast<std::size_t>(i)] = i / 20.0;
  const auto cost = eval::cost_curve(g, p_b, p_a, y, config.unit_cost, rates);
  std::vector<std::string> cost_lines;
  for (const auto& pt : cost) {
    cost_lines.push_back(fmt17(pt.escalation_rate) + "," + fmt17(pt.expected_cost_per_100) + "," +
                         fmt17(pt.auroc));
  }
  out.cost_csv = config.out_dir / "cost_curve.csv";
  write_csv(out.cost_csv, "escalation_rate,expected_cost_per_100,auroc", cost_lines);

  // Fairness views: escalated-vs-kept on the test set, and the sampled test
  // set against the advanced training cohort. A policy may legitimately
  // escalate everyone (or no one); the table is skipped rather than failing
  // the whole report.
  const data::CohortTable test_cohort = cohort.subset(idx.test);
  try {
    report["balance"]["escalated_vs_kept"] = balance_to_json(
        eval::balance_report(test_cohort, escalated, test_cohort.schema().demographics),
        "escalated", "kept");
  } catch (const Error& e) {
    if (e.code() != Errc::empty_group) throw;
    report["balance"]["escalated_vs_kept"] = json{{"skipped", e.message()}};
  }

  std::vector<std::size_t> combined = idx.advanced_train;
  combined.insert(combined.end(), idx.test.begin(), idx.test.end());
  std::vector<std::uint8_t> is_test(combined.size(), 0);
  for (std::size_t i = idx.advanced_train.size(); i < combined.size(); ++i) is_test[i] = 1;
  const data::CohortTable combined_cohort = cohort.subset(combined);
  report["balance"]["test_vs_train"] = balance_to_json(
      eval::balance_report(combined_cohort, is_test, combined_cohort.schema().demographics),
      "test", "advanced_train");

  report["artifacts"] = json{{"roc", "roc_curves.csv"},
                             {"pr", "pr_curves.csv"},
                             {"cost", "cost_curve.csv"},
                             {"risk_coverage", "risk_coverage.csv"}};

  out.report_json = config.out_dir / "eval_report.json";
  jsonio::write_json_file(out.report_json, report);

  manifest.add_artifact(out.report_json);
  manifest.add_artifact(out.roc_csv);
  manifest.add_artifact(out.pr_csv);
  manifest.add_artifact(out.cost_csv);
  manifest.add_note("realized_escalation_rate", fmt17(realized_rate));
  out.manifest = manifest.finish();
  return out;
}

PredictOutputs run_predict(const RunConfig& config, const std::filesystem::path& policy_path,
                           const std::filesystem::path& input_csv) {
  ManifestWriter manifest("predict", config.out_dir);
  const cascade::CascadePolicy policy = learners::load_policy(policy_path);

  const auto schema_file = config.schema_path ? *config.schema_path
                                              : config.out_dir / "schema.json";
  const data::FeatureSchema schema = data::load_schema(schema_file);
  std::vector<std::string> row_errors;
  const data::CohortTable patients = data::load_cohort_lenient(input_csv, schema, row_errors);

  PredictOutputs out;
  out.n_rows = patients.size();
  out.n_row_errors = row_errors.size();

  std::string lines;
  for (const auto& rec : patients.rows()) {
    json d;
    try {
      const auto decision = cascade::cascade_predict(policy, rec, schema);
      d["id"] = decision.patient_id;
      d["escalate"] = decision.escalate;
      d["score"] = decision.score;
      d["route"] = decision.route == cascade::Route::basic ? "basic" : "advanced";
      d["final_probability"] = decision.final_probability;
      d["certainty_before"] = decision.certainty_before;
      if (decision.certainty_after) d["certainty_after"] = *decision.certainty_after;
    } catch (const Error& e) {
      if (e.code() != Errc::advanced_features_required) throw;
      // Escalation demanded without the advanced block: the actionable
      // "order the test" outcome.
      const double score = policy.triage.predict_one(rec, schema);
      const double p_b = policy.basic.predict_one(rec, schema);
      d["id"] = rec.id;
      d["escalate"] = true;
      d["score"] = score;
      d["route"] = "advanced-required";
      d["certainty_before"] = cascade::certainty(p_b);
    }
    lines += d.dump();
    lines += '\n';
  }
  out.decisions_jsonl = config.out_dir / "decisions.jsonl";
  jsonio::write_text_file(out.decisions_jsonl, lines);

  manifest.add_artifact(out.decisions_jsonl);
  manifest.add_note("rows", std::to_string(out.n_rows));
  manifest.add_note("row_errors", std::to_string(out.n_row_errors));
  for (const auto& err : row_errors) manifest.add_note("row_error", err);
  out.manifest = manifest.finish();
  return out;
}

ExplainOutputs run_explain(const RunConfig& config, const std::filesystem::path& policy_path,
                           const std::filesystem::path& input_csv,
                           const std::optional<std::filesystem::path>& background_path) {
  ManifestWriter manifest("explain", config.out_dir);
  const cascade::CascadePolicy policy = learners::load_policy(policy_path);

  const auto schema_file = config.schema_path ? *config.schema_path
                                              : config.out_dir / "schema.json";
  const data::FeatureSchema schema = data::load_schema(schema_file);
  const data::CohortTable patients = data::load_cohort(input_csv, schema);

  const auto bg_file = background_path ? *background_path
                                       : config.out_dir / "triage_background.json";
  explain::BackgroundSet background;
  background.rows = jsonio::decode_matrix(jsonio::read_json_file(bg_file).at("rows"));

  ExplainOutputs out;
  for (const auto& rec : patients.rows()) {
    const auto record = explain::explain_decision(policy, rec, schema, background);
    json j;
    j["id"] = record.patient_id;
    j["score"] = record.score;
    j["tau"] = record.tau;
    j["escalate"] = record.escalate;
    j["base_value"] = record.base_value;
    json entries = json::array();
    for (const auto& e : record.entries) {
      json ej;
      ej["feature"] = e.feature;
      ej["raw_value"] = e.raw_value;
      if (e.standardized_value) ej["standardized_value"] = *e.standardized_value;
      ej["phi"] = e.phi;
      ej["direction"] = e.direction;
      entries.push_back(std::move(ej));
    }
    j["entries"] = std::move(entries);

    const auto json_path = config.out_dir / ("explain_" + rec.id + ".json");
    jsonio::write_json_file(json_path, j);
    std::vector<std::string> csv_lines;
    for (const auto& e : record.entries) csv_lines.push_back(e.feature + "," + fmt17(e.phi));
    const auto csv_path = config.out_dir / ("explain_" + rec.id + ".csv");
    write_csv(csv_path, "feature,phi", csv_lines);

    manifest.add_artifact(json_path);
    manifest.add_artifact(csv_path);
    out.record_files.push_back(json_path);
    out.record_files.push_back(csv_path);
  }
  out.manifest = manifest.finish();
  return out;
}

}  // namespace triage::pipeline

