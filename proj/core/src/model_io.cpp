#include "triage/learners/model_io.hpp"

#include "jsonio.hpp"
#include "triage/common.hpp"

namespace triage::learners {

using jsonio::json;

namespace {

json preprocessor_to_json(const data::Preprocessor& prep) {
  json j;
  j["group"] = prep.group() == data::ColumnGroup::basic ? "basic" : "basic_and_advanced";
  json nums = json::array();
  for (const auto& s : prep.numeric_stats()) {
    nums.push_back(json{{"name", s.name},
                        {"mean", jsonio::encode_double(s.mean)},
                        {"stddev", jsonio::encode_double(s.stddev)},
                        {"median", jsonio::encode_double(s.median)}});
  }
  j["numeric"] = std::move(nums);
  json cats = json::array();
  for (const auto& s : prep.categorical_stats()) {
    cats.push_back(json{{"name", s.name}, {"categories", s.categories}, {"mode", s.mode}});
  }
  j["categorical"] = std::move(cats);
  j["n_basic_numeric"] = prep.n_basic_numeric();
  j["schema_fingerprint"] = prep.schema_fingerprint();
  return j;
}

data::Preprocessor preprocessor_from_json(const json& j) {
  const auto group = j.at("group").get<std::string>() == "basic"
                         ? data::ColumnGroup::basic
                         : data::ColumnGroup::basic_and_advanced;
  std::vector<data::NumericColumnStats> nums;
  for (const auto& s : j.at("numeric")) {
    nums.push_back({s.at("name").get<std::string>(),
                    jsonio::decode_double(s.at("mean").get<std::string>()),
                    jsonio::decode_double(s.at("stddev").get<std::string>()),
                    jsonio::decode_double(s.at("median").get<std::string>())});
  }
  std::vector<data::CategoricalColumnStats> cats;
  for (const auto& s : j.at("categorical")) {
    cats.push_back({s.at("name").get<std::string>(),
                    s.at("categories").get<std::vector<std::string>>(),
                    s.at("mode").get<std::string>()});
  }
  return data::Preprocessor::from_parts(group, std::move(nums), std::move(cats),
                                        j.at("n_basic_numeric").get<std::size_t>(),
                                        j.at("schema_fingerprint").get<std::string>());
}

json params_to_json(const ParamMap& params) {
  json j;
  for (const auto& [k, v] : params) j[k] = jsonio::encode_double(v);
  return j;
}

ParamMap params_from_json(const json& j) {
  ParamMap params;
  for (const auto& [k, v] : j.items()) params[k] = jsonio::decode_double(v.get<std::string>());
  return params;
}

}  // namespace

void save_classifier(const cascade::FittedClassifier& clf, const std::filesystem::path& path) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["preprocessor"] = preprocessor_to_json(clf.prep);
  j["hyperparameters"] = params_to_json(clf.params);
  if (const auto* lr = std::get_if<LogRegModel>(&clf.model.model)) {
    j["kind"] = "logreg";
    json m;
    m["weights"] = jsonio::encode_vector(lr->weights);
    m["intercept"] = jsonio::encode_double(lr->intercept);
    m["C"] = jsonio::encode_double(lr->C);
    m["converged"] = lr->converged;
    m["final_gradient_norm"] = jsonio::encode_double(lr->final_gradient_norm);
    m["iterations"] = lr->iterations;
    j["model"] = std::move(m);
  } else {
    const auto& svm = std::get<SvmModel>(clf.model.model);
    j["kind"] = "svm_rbf";
    json m;
    m["support_vectors"] = jsonio::encode_matrix(svm.support_vectors);
    m["dual_coeffs"] = jsonio::encode_vector(svm.dual_coeffs);
    m["bias"] = jsonio::encode_double(svm.bias);
    m["gamma"] = jsonio::encode_double(svm.gamma);
    m["C"] = jsonio::encode_double(svm.C);
    m["platt_A"] = jsonio::encode_double(svm.platt.A);
    m["platt_B"] = jsonio::encode_double(svm.platt.B);
    m["iterations"] = svm.iterations;
    m["kkt_gap"] = jsonio::encode_double(svm.kkt_gap);
    j["model"] = std::move(m);
  }
  jsonio::write_json_file(path, j);
}

cascade::FittedClassifier load_classifier(const std::filesystem::path& path) {
  const json j = jsonio::read_json_file(path);
  require(j.at("format_version").get<int>() == kModelFormatVersion, Errc::io_error,
          "unsupported model format version in " + path.string());

  cascade::FittedClassifier clf;
  clf.prep = preprocessor_from_json(j.at("preprocessor"));
  clf.params = params_from_json(j.at("hyperparameters"));
  const auto kind = j.at("kind").get<std::string>();
  const json& m = j.at("model");
  if (kind == "logreg") {
    LogRegModel lr;
    lr.weights = jsonio::decode_vector(m.at("weights"));
    lr.intercept = jsonio::decode_double(m.at("intercept").get<std::string>());
    lr.C = jsonio::decode_double(m.at("C").get<std::string>());
    lr.converged = m.at("converged").get<bool>();
    lr.final_gradient_norm = jsonio::decode_double(m.at("final_gradient_norm").get<std::string>());
    lr.iterations = m.at("iterations").get<int>();
    clf.model.model = std::move(lr);
  } else if (kind == "svm_rbf") {
    SvmModel svm;
    svm.support_vectors = jsonio::decode_matrix(m.at("support_vectors"));
    svm.dual_coeffs = jsonio::decode_vector(m.at("dual_coeffs"));
    svm.bias = jsonio::decode_double(m.at("bias").get<std::string>());
    svm.gamma = jsonio::decode_double(m.at("gamma").get<std::string>());
    svm.C = jsonio::decode_double(m.at("C").get<std::string>());
    svm.platt.A = jsonio::decode_double(m.at("platt_A").get<std::string>());
    svm.platt.B = jsonio::decode_double(m.at("platt_B").get<std::string>());
    svm.iterations = m.at("iterations").get<int>();
    svm.kkt_gap = jsonio::decode_double(m.at("kkt_gap").get<std::string>());
    clf.model.model = std::move(svm);
  } else {
    raise(Errc::io_error, "unknown model kind '" + kind + "' in " + path.string());
  }
  return clf;
}

std::string model_fingerprint(const std::filesystem::path& path) {
  return to_hex(fnv1a64(jsonio::read_text_file(path)));
}

void save_policy(const PolicyFile& policy, const std::filesystem::path& path) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["tau"] = jsonio::encode_double(policy.tau);
  j["delta"] = jsonio::encode_double(policy.delta);
  auto ref = [](const PolicyRef& r) {
    return json{{"path", r.path}, {"fingerprint", r.fingerprint}};
  };
  j["basic_model"] = ref(policy.basic);
  j["advanced_model"] = ref(policy.advanced);
  j["triage_model"] = ref(policy.triage);
  if (!policy.strategy.empty()) {
    json sel;
    sel["strategy"] = policy.strategy;
    sel["achieved_coverage"] = jsonio::encode_double(policy.achieved_coverage);
    sel["achieved_risk"] = jsonio::encode_double(policy.achieved_risk);
    sel["feasible"] = policy.feasible;
    if (!policy.warning.empty()) sel["warning"] = policy.warning;
    j["selection"] = std::move(sel);
  }
  jsonio::write_json_file(path, j);
}

PolicyFile load_policy_file(const std::filesystem::path& path) {
  const json j = jsonio::read_json_file(path);
  PolicyFile p;
  p.tau = jsonio::decode_double(j.at("tau").get<std::string>());
  p.delta = jsonio::decode_double(j.at("delta").get<std::string>());
  auto ref = [](const json& r) {
    return PolicyRef{r.at("path").get<std::string>(), r.at("fingerprint").get<std::string>()};
  };
  p.basic = ref(j.at("basic_model"));
  p.advanced = ref(j.at("advanced_model"));
  p.triage = ref(j.at("triage_model"));
  if (j.contains("selection")) {
    const auto& sel = j.at("selection");
    p.strategy = sel.value("strategy", std::string());
    if (sel.contains("achieved_coverage"))
      p.achieved_coverage = jsonio::decode_double(sel.at("achieved_coverage").get<std::string>());
    if (sel.contains("achieved_risk"))
      p.achieved_risk = jsonio::decode_double(sel.at("achieved_risk").get<std::string>());
    p.feasible = sel.value("feasible", true);
    p.warning = sel.value("warning", std::string());
  }
  return p;
}

cascade::CascadePolicy load_policy(const std::filesystem::path& path) {
  const PolicyFile file = load_policy_file(path);
  const auto base = path.parent_path();
  auto resolve = [&base](const PolicyRef& ref) {
    std::filesystem::path p(ref.path);
    if (p.is_relative()) p = base / p;
    require(model_fingerprint(p) == ref.fingerprint, Errc::io_error,
            "model file " + p.string() + " does not match the fingerprint in the policy");
    return load_classifier(p);
  };
  cascade::CascadePolicy policy;
  policy.tau = file.tau;
  policy.delta = file.delta;
  policy.basic = resolve(file.basic);
  policy.advanced = resolve(file.advanced);
  policy.triage = resolve(file.triage);
  return policy;
}

}  // namespace triage::learners
