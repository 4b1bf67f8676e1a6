#pragma once

#include <filesystem>
#include <string>

#include "triage/cascade/policy.hpp"

namespace triage::learners {

// Versioned JSON model files. Floats are stored as hex-float strings, so a
// load after save reproduces every parameter bit-for-bit.
inline constexpr int kModelFormatVersion = 1;

void save_classifier(const cascade::FittedClassifier& clf, const std::filesystem::path& path);
cascade::FittedClassifier load_classifier(const std::filesystem::path& path);

// Content fingerprint of a saved model file (FNV-1a over the bytes).
std::string model_fingerprint(const std::filesystem::path& path);

struct PolicyRef {
  std::string path;
  std::string fingerprint;
};

struct PolicyFile {
  double tau = 0;
  double delta = 0;
  PolicyRef basic;
  PolicyRef advanced;
  PolicyRef triage;
  // Selection provenance, recorded by the threshold stage.
  std::string strategy;
  double achieved_coverage = -1;
  double achieved_risk = -1;
  bool feasible = true;
  std::string warning;
};

void save_policy(const PolicyFile& policy, const std::filesystem::path& path);
PolicyFile load_policy_file(const std::filesystem::path& path);

// Loads the policy file plus the three referenced models (paths resolved
// relative to the policy file), verifying fingerprints.
cascade::CascadePolicy load_policy(const std::filesystem::path& path);

}  // namespace triage::learners
