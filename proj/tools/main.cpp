// Command-line front end for the adaptive two-stage triage pipeline.
//
//   triage synth      generate a synthetic cohort CSV + schema
//   triage train      split, fit the three models, build escalation labels
//   triage threshold  pick the escalation threshold from the risk-coverage curve
//   triage evaluate   test-set metrics, baselines, paired tests, curve files
//   triage predict    per-patient routing decisions for new rows
//   triage explain    per-patient Shapley attribution of the escalation score
//
// Exit codes: 0 ok, 2 config error, 3 data error, 4 numeric failure.

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "triage/common.hpp"
#include "triage/pipeline/run.hpp"
#include "triage/version.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

triage::pipeline::RunConfig resolve_config(const GlobalArgs& args, bool allow_default_synth) {
  triage::pipeline::ConfigOverrides overrides;
  if (!args.out_dir.empty()) overrides.out_dir = args.out_dir;
  overrides.master_seed = args.seed;
  if (!args.config_path.empty()) {
    return triage::pipeline::load_run_config(args.config_path, overrides);
  }
  triage::require(allow_default_synth, triage::Errc::invalid_config,
                  "this command needs --config");
  auto cfg = triage::pipeline::default_synth_config();
  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  if (overrides.master_seed && cfg.synth) cfg.synth->seed = *overrides.master_seed;
  return cfg;
}

void say(const GlobalArgs& args, const std::string& line) {
  if (!args.quiet) std::cout << line << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive two-stage (basic/advanced/triage) prediction toolkit"};
  app.set_version_flag("--version", triage::kVersion);
  app.require_subcommand(1);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "Run configuration JSON");
  app.add_option("--out", args.out_dir, "Output directory (overrides the config)");
  app.add_option("--seed", args.seed, "Master seed for stages the config leaves unseeded");
  app.add_flag("--quiet", args.quiet, "Suppress progress output");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort");
  std::optional<std::size_t> synth_n;
  synth->add_option("--n", synth_n, "Override the cohort size");

  auto* train = app.add_subcommand("train", "Fit basic, advanced and triage models");
  auto* threshold = app.add_subcommand("threshold", "Select the escalation threshold");
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate policies on the held-out test set");
  bool no_bootstrap = false;
  evaluate->add_flag("--no-bootstrap", no_bootstrap,
                     "Point estimates only (skip CIs and paired tests)");

  auto* predict = app.add_subcommand("predict", "Route new patients through the cascade");
  std::string policy_path, input_csv, background_path;
  predict->add_option("--policy", policy_path, "Policy JSON (default <out>/policy.json)");
  predict->add_option("--input", input_csv, "Patient CSV")->required();

  auto* explain = app.add_subcommand("explain", "Explain escalation scores with Shapley values");
  explain->add_option("--policy", policy_path, "Policy JSON (default <out>/policy.json)");
  explain->add_option("--input", input_csv, "Patient CSV")->required();
  explain->add_option("--background", background_path,
                      "Background rows JSON (default <out>/triage_background.json)");

  CLI11_PARSE(app, argc, argv);

  try {
    namespace pl = triage::pipeline;
    if (synth->parsed()) {
      auto cfg = resolve_config(args, /*allow_default_synth=*/true);
      triage::require(cfg.synth.has_value(), triage::Errc::invalid_config,
                      "synth needs a synth block in the config");
      if (synth_n) cfg.synth->n_total = *synth_n;
      const auto out = pl::run_synth(cfg);
      say(args, "cohort: " + out.cohort_csv.string() + " (" + std::to_string(out.n_rows) +
                    " rows, " + std::to_string(out.n_advanced) + " advanced-available)");
    } else if (train->parsed()) {
      const auto cfg = resolve_config(args, true);
      const auto out = pl::run_train(cfg);
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.4f", out.triage_cv_auroc);
      say(args, "models written; triage CV AUROC " + std::string(buf));
    } else if (threshold->parsed()) {
      const auto cfg = resolve_config(args, true);
      const auto out = pl::run_threshold(cfg);
      char buf[96];
      std::snprintf(buf, sizeof(buf), "tau=%.6g (coverage %.3f, risk %.3f)", out.tau,
                    out.chosen.coverage, out.chosen.risk);
      say(args, buf);
    } else if (evaluate->parsed()) {
      auto cfg = resolve_config(args, true);
      if (no_bootstrap) cfg.bootstrap_enabled = false;
      const auto out = pl::run_evaluate(cfg);
      char buf[96];
      std::snprintf(buf, sizeof(buf), "report written; realized escalation rate %.3f",
                    out.realized_escalation_rate);
      say(args, std::string(buf) + " -> " + out.report_json.string());
    } else if (predict->parsed()) {
      const auto cfg = resolve_config(args, true);
      const std::filesystem::path policy =
          policy_path.empty() ? cfg.out_dir / "policy.json" : std::filesystem::path(policy_path);
      const auto out = pl::run_predict(cfg, policy, input_csv);
      say(args, "decisions: " + out.decisions_jsonl.string() + " (" + std::to_string(out.n_rows) +
                    " rows, " + std::to_string(out.n_row_errors) + " row errors)");
      if (out.n_row_errors > 0) return 3;
    } else if (explain->parsed()) {
      const auto cfg = resolve_config(args, true);
      const std::filesystem::path policy =
          policy_path.empty() ? cfg.out_dir / "policy.json" : std::filesystem::path(policy_path);
      std::optional<std::filesystem::path> background;
      if (!background_path.empty()) background = background_path;
      const auto out = pl::run_explain(cfg, policy, input_csv, background);
      say(args, std::to_string(out.record_files.size() / 2) + " explanation records written");
    }
  } catch (const triage::Error& e) {
    std::cerr << "error[" << triage::errc_tag(e.code()) << "]: " << e.message() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error[E_UNEXPECTED]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
