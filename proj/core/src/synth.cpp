#include "triage/data/synth.hpp"

#include <cmath>
#include <cstdio>

#include "triage/common.hpp"
#include "triage/rng.hpp"

namespace triage::data {

namespace {

// Label sharpness: the conversion label is Bernoulli(sigmoid(a*(r - t))).
// The slope is steep so that in the noise-free feature limit labels are
// effectively determined by the latent risk, while the offset t fixes the
// expected positive rate.
constexpr double kRiskSlope = 400.0;

// Loadings cycle over these patterns; zeros make some basic columns pure
// noise so the basic feature set stays meaningfully weaker.
constexpr double kBasicLoadings[] = {0.44, -0.33, 0.25, 0.0, 0.30, -0.19, 0.0, 0.36, -0.27, 0.16};
constexpr double kAdvancedLoadings[] = {0.8, -0.6, 0.5, -0.7, 0.4, 0.9, -0.5, 0.65};

// Advanced loadings are scaled by 1/(K*sqrt(d_a * mean_sq)) so the pooled
// advanced block estimates the latent risk with noise K*sigma_a no matter
// how many advanced columns the schema carries.
constexpr double kAdvancedPrecision = 1.6;

// The categorical markers threshold an extra-noisy view of the risk so they
// stay informative without dominating the basic feature set.
constexpr double kCategoricalNoiseMult = 1.6;

double advanced_scale(std::size_t d_a) {
  double mean_sq = 0;
  for (double c : kAdvancedLoadings) mean_sq += c * c;
  mean_sq /= static_cast<double>(std::size(kAdvancedLoadings));
  return 1.0 / (kAdvancedPrecision * std::sqrt(static_cast<double>(d_a) * mean_sq));
}

double sigmoid(double t) { return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t)); }

// Acklam's rational approximation to the standard normal quantile,
// |error| < 1.2e-9 over (0,1).
double norm_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, x;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  return x;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  require(n_total >= 1, Errc::invalid_config, "n_total must be >= 1");
  require(advanced_fraction > 0.0 && advanced_fraction <= 1.0, Errc::invalid_config,
          "advanced_fraction must be in (0,1]");
  require(basic_noise >= 0.0 && advanced_noise >= 0.0, Errc::invalid_config,
          "noise levels must be >= 0");
  require(conversion_base_rate > 0.0 && conversion_base_rate < 1.0, Errc::invalid_config,
          "conversion_base_rate must be in (0,1)");
  require(d_b >= 3, Errc::invalid_config, "d_b must be >= 3 (two columns are categorical)");
  require(d_a >= 1, Errc::invalid_config, "d_a must be >= 1");
}

FeatureSchema synth_schema(const SynthConfig& cfg) {
  cfg.validate();
  FeatureSchema s;
  char buf[24];
  for (std::size_t j = 1; j + 2 <= cfg.d_b; ++j) {
    std::snprintf(buf, sizeof(buf), "basic_num_%02zu", j);
    s.basic_numeric.emplace_back(buf);
  }
  s.basic_categorical = {
      {"risk_marker", {"carrier", "noncarrier"}},
      {"cog_stage", {"stage_a", "stage_b", "stage_c", "stage_d"}},
  };
  for (std::size_t j = 1; j <= cfg.d_a; ++j) {
    std::snprintf(buf, sizeof(buf), "adv_%03zu", j);
    s.advanced_numeric.emplace_back(buf);
  }
  s.label_column = "converted";
  s.advanced_available_column = "has_advanced";
  s.id_column = "id";
  s.demographics = {
      {"age_years", DemoKind::numeric},   {"edu_years", DemoKind::numeric},
      {"sex", DemoKind::categorical},     {"site", DemoKind::categorical},
      {"risk_marker", DemoKind::categorical},
  };
  return s;
}

CohortTable generate_cohort(const SynthConfig& cfg) {
  cfg.validate();
  const FeatureSchema schema = synth_schema(cfg);
  const std::size_t n = cfg.n_total;
  const std::size_t n_num = cfg.d_b - 2;

  // Independent streams per column block keep the draws stable when only
  // one dimension of the config changes.
  Rng risk_rng = Rng::derive(cfg.seed, 1);
  Rng label_rng = Rng::derive(cfg.seed, 2);
  Rng basic_rng = Rng::derive(cfg.seed, 3);
  Rng marker_rng = Rng::derive(cfg.seed, 4);
  Rng stage_rng = Rng::derive(cfg.seed, 5);
  Rng adv_rng = Rng::derive(cfg.seed, 6);
  Rng demo_rng = Rng::derive(cfg.seed, 7);
  Rng avail_rng = Rng::derive(cfg.seed, 8);

  std::vector<double> risk(n);
  for (auto& r : risk) r = risk_rng.normal();

  // Threshold t makes E[sigmoid(a*(r-t))] equal the base rate; at this
  // slope the probit solution is exact to ~1e-6.
  const double t = norm_quantile(1.0 - cfg.conversion_base_rate);

  // Categorical cut points in the marginal scale of the noisy view.
  const double cat_noise = kCategoricalNoiseMult * cfg.basic_noise;
  const double cat_scale = std::sqrt(1.0 + cat_noise * cat_noise);
  const double marker_cut = norm_quantile(0.7) * cat_scale;
  const double stage_cut_1 = norm_quantile(0.25) * cat_scale;
  const double stage_cut_2 = 0.0;
  const double stage_cut_3 = norm_quantile(0.75) * cat_scale;
  static const char* kStages[] = {"stage_a", "stage_b", "stage_c", "stage_d"};

  const std::size_t n_advanced = static_cast<std::size_t>(
      std::ceil(cfg.advanced_fraction * static_cast<double>(n)));
  std::vector<char> has_advanced(n, 0);
  for (auto i : avail_rng.sample_without_replacement(n, std::min(n_advanced, n))) {
    has_advanced[i] = 1;
  }

  std::vector<PatientRecord> rows;
  rows.reserve(n);
  char idbuf[24];
  for (std::size_t i = 0; i < n; ++i) {
    PatientRecord rec;
    std::snprintf(idbuf, sizeof(idbuf), "p%06zu", i + 1);
    rec.id = idbuf;

    const double r = risk[i];
    rec.label = label_rng.uniform() < sigmoid(kRiskSlope * (r - t)) ? 1 : 0;

    rec.basic_numeric.reserve(n_num);
    for (std::size_t j = 0; j < n_num; ++j) {
      const double c = kBasicLoadings[j % std::size(kBasicLoadings)];
      rec.basic_numeric.push_back(c * r + cfg.basic_noise * basic_rng.normal());
    }

    const double marker_view = r + cat_noise * marker_rng.normal();
    rec.basic_categorical.push_back(marker_view > marker_cut ? "carrier" : "noncarrier");
    const double stage_view = r + cat_noise * stage_rng.normal();
    int stage = 0;
    if (stage_view > stage_cut_1) stage = 1;
    if (stage_view > stage_cut_2) stage = 2;
    if (stage_view > stage_cut_3) stage = 3;
    rec.basic_categorical.push_back(kStages[stage]);

    rec.advanced_available = has_advanced[i] != 0;
    if (rec.advanced_available) {
      rec.advanced.resize(cfg.d_a);
      const double s = advanced_scale(cfg.d_a);
      for (std::size_t j = 0; j < cfg.d_a; ++j) {
        const double c = s * kAdvancedLoadings[j % std::size(kAdvancedLoadings)];
        rec.advanced[j] = c * r + cfg.advanced_noise * adv_rng.normal();
      }
    }

    // Demographics independent of risk: a known null for fairness checks.
    const double age = 71.5 + 7.5 * demo_rng.normal();
    const double edu = 16.0 + 2.7 * demo_rng.normal();
    const char* sex = demo_rng.uniform() < 0.5 ? "female" : "male";
    const double site_u = demo_rng.uniform();
    const char* site = site_u < 0.5 ? "site_a" : (site_u < 0.8 ? "site_b" : "site_c");
    rec.demographics = {fmt(age), fmt(edu), sex, site, rec.basic_categorical[0]};

    rows.push_back(std::move(rec));
  }
  return CohortTable(schema, std::move(rows));
}

}  // namespace triage::data
