#include "triage/pipeline/config.hpp"

#include "jsonio.hpp"
#include "triage/common.hpp"
#include "triage/learners/grid.hpp"
#include "triage/rng.hpp"

namespace triage::pipeline {

using jsonio::json;

namespace {

std::vector<learners::ParamMap> parse_grid_axes(const json& j) {
  // {"C": [..], "gamma": [.. or "auto"]} -> cartesian product of the axes.
  std::vector<learners::ParamMap> grid{{}};
  for (const auto& [axis, values] : j.items()) {
    require(values.is_array() && !values.empty(), Errc::invalid_config,
            "grid axis '" + axis + "' must be a non-empty array");
    std::vector<learners::ParamMap> next;
    for (const auto& v : values) {
      for (auto point : grid) {
        if (v.is_string()) {
          require(v.get<std::string>() == "auto" && axis == "gamma", Errc::invalid_config,
                  "only gamma supports the 'auto' setting");
          // absent gamma means auto
        } else {
          require(v.is_number(), Errc::invalid_config,
                  "grid axis '" + axis + "' holds a non-numeric value");
          point[axis] = v.get<double>();
        }
        next.push_back(std::move(point));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

data::SynthConfig parse_synth(const json& j, bool* seed_given) {
  data::SynthConfig cfg;
  cfg.n_total = j.value("n_total", cfg.n_total);
  cfg.advanced_fraction = j.value("advanced_fraction", cfg.advanced_fraction);
  cfg.basic_noise = j.value("basic_noise", cfg.basic_noise);
  cfg.advanced_noise = j.value("advanced_noise", cfg.advanced_noise);
  cfg.conversion_base_rate = j.value("conversion_base_rate", cfg.conversion_base_rate);
  cfg.d_b = j.value("d_b", cfg.d_b);
  cfg.d_a = j.value("d_a", cfg.d_a);
  if (j.contains("seed")) {
    cfg.seed = j.at("seed").get<std::uint64_t>();
    *seed_given = true;
  }
  return cfg;
}

cascade::ThresholdStrategy parse_threshold(const json& j) {
  cascade::ThresholdStrategy s;
  const auto name = j.value("strategy", std::string("max-coverage-under-risk"));
  if (name == "max-coverage-under-risk") {
    s.kind = cascade::ThresholdStrategy::Kind::max_coverage_under_risk;
    s.r_max = j.value("r_max", s.r_max);
  } else if (name == "knee") {
    s.kind = cascade::ThresholdStrategy::Kind::knee;
  } else if (name == "fixed") {
    s.kind = cascade::ThresholdStrategy::Kind::fixed;
    require(j.contains("tau"), Errc::invalid_config, "fixed threshold strategy needs 'tau'");
    s.fixed_tau = j.at("tau").get<double>();
  } else {
    raise(Errc::invalid_config, "unknown threshold strategy '" + name + "'");
  }
  return s;
}

}  // namespace

void RunConfig::validate() const {
  require(cohort_path.has_value() || synth.has_value(), Errc::invalid_config,
          "config needs either a cohort path or a synth block");
  if (cohort_path) {
    require(schema_path.has_value(), Errc::invalid_config,
            "a cohort file needs an explicit schema path");
    require(std::filesystem::exists(*cohort_path), Errc::invalid_config,
            "cohort file does not exist: " + cohort_path->string());
  }
  if (schema_path) {
    require(std::filesystem::exists(*schema_path), Errc::invalid_config,
            "schema file does not exist: " + schema_path->string());
  }
  if (synth) synth->validate();
  require(delta > 0, Errc::non_positive_delta, "delta must be > 0");
  require(bootstrap_B >= 100, Errc::invalid_config, "bootstrap B must be >= 100");
  require(cv_k >= 2, Errc::bad_k, "cv k must be >= 2");
  require(unit_cost >= 0, Errc::invalid_config, "unit_cost must be >= 0");
  require(!basic_grid.empty() && !advanced_grid.empty() && !triage_grid.empty(),
          Errc::empty_grid, "hyperparameter grids must be non-empty");
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return load_run_config(path, {});
}

RunConfig load_run_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  require(std::filesystem::exists(path), Errc::invalid_config,
          "config file does not exist: " + path.string());
  const json j = jsonio::read_json_file(path);
  RunConfig cfg;
  cfg.basic_grid = learners::default_logreg_grid();
  cfg.advanced_grid = learners::default_logreg_grid();
  cfg.triage_grid = learners::default_svm_grid();

  bool split_seed_given = false, cv_seed_given = false, bootstrap_seed_given = false,
       baseline_seed_given = false, background_seed_given = false, synth_seed_given = false;

  if (j.contains("schema")) cfg.schema_path = j.at("schema").get<std::string>();
  if (j.contains("cohort")) cfg.cohort_path = j.at("cohort").get<std::string>();
  if (j.contains("synth")) cfg.synth = parse_synth(j.at("synth"), &synth_seed_given);

  if (j.contains("split")) {
    const auto& s = j.at("split");
    cfg.test_n = s.value("test_n", cfg.test_n);
    if (s.contains("seed")) {
      cfg.split_seed = s.at("seed").get<std::uint64_t>();
      split_seed_given = true;
    }
  }
  if (j.contains("cv")) {
    const auto& s = j.at("cv");
    cfg.cv_k = s.value("k", cfg.cv_k);
    cfg.cv_stratified = s.value("stratified", cfg.cv_stratified);
    if (s.contains("seed")) {
      cfg.cv_seed = s.at("seed").get<std::uint64_t>();
      cv_seed_given = true;
    }
  }
  if (j.contains("grids")) {
    const auto& g = j.at("grids");
    if (g.contains("basic")) cfg.basic_grid = parse_grid_axes(g.at("basic"));
    if (g.contains("advanced")) cfg.advanced_grid = parse_grid_axes(g.at("advanced"));
    if (g.contains("triage")) cfg.triage_grid = parse_grid_axes(g.at("triage"));
  }
  cfg.delta = j.value("delta", cfg.delta);
  if (j.contains("threshold")) cfg.threshold = parse_threshold(j.at("threshold"));
  cfg.unit_cost = j.value("unit_cost", cfg.unit_cost);
  if (j.contains("bootstrap")) {
    const auto& b = j.at("bootstrap");
    cfg.bootstrap_B = b.value("B", cfg.bootstrap_B);
    cfg.bootstrap_enabled = b.value("enabled", true);
    if (b.contains("seed")) {
      cfg.bootstrap_seed = b.at("seed").get<std::uint64_t>();
      bootstrap_seed_given = true;
    }
  }
  if (j.contains("baseline_seed")) {
    cfg.baseline_seed = j.at("baseline_seed").get<std::uint64_t>();
    baseline_seed_given = true;
  }
  if (j.contains("background")) {
    const auto& b = j.at("background");
    cfg.background_cap = b.value("cap", cfg.background_cap);
    if (b.contains("seed")) {
      cfg.background_seed = b.at("seed").get<std::uint64_t>();
      background_seed_given = true;
    }
  }
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();

  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  if (overrides.master_seed) {
    const std::uint64_t m = *overrides.master_seed;
    auto stage_seed = [m](std::uint64_t stage) { return Rng::derive(m, stage).next_u64(); };
    if (!split_seed_given) cfg.split_seed = stage_seed(1);
    if (!cv_seed_given) cfg.cv_seed = stage_seed(2);
    if (!bootstrap_seed_given) cfg.bootstrap_seed = stage_seed(3);
    if (!baseline_seed_given) cfg.baseline_seed = stage_seed(4);
    if (!background_seed_given) cfg.background_seed = stage_seed(5);
    if (cfg.synth && !synth_seed_given) cfg.synth->seed = stage_seed(6);
  }
  cfg.validate();
  return cfg;
}

RunConfig default_synth_config() {
  RunConfig cfg;
  cfg.synth = data::SynthConfig{};
  cfg.basic_grid = learners::default_logreg_grid();
  cfg.advanced_grid = learners::default_logreg_grid();
  cfg.triage_grid = learners::default_svm_grid();
  return cfg;
}

}  // namespace triage::pipeline
