#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace triage {

// Failure categories map onto CLI exit codes: config=2, data=3, numeric=4.
enum class Errc {
  // configuration / usage
  invalid_config,
  bad_k,
  bad_rate,
  non_positive_delta,
  empty_grid,
  too_many_groups,
  too_few_samples,
  // data / shape
  io_error,
  missing_column,
  duplicate_id,
  non_binary_label,
  missing_basic_value,
  unknown_category,
  missing_value,
  test_too_large,
  empty_fit,
  schema_mismatch,
  length_mismatch,
  width_mismatch,
  out_of_range,
  empty_group,
  empty_curve,
  empty_background,
  advanced_features_required,
  leakage_detected,
  // numeric
  single_class,
  no_positives,
  degenerate_sample,
  zero_expected,
  too_few_replicates,
  no_feasible_point,
  numeric_failure,
};

// Stable machine-parsable tag, e.g. "E_MISSING_COLUMN".
const char* errc_tag(Errc code);

// Process exit code for the category the code belongs to.
int errc_exit_code(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_tag(code)) + ": " + message),
        code_(code),
        message_(message) {}

  Errc code() const { return code_; }
  int exit_code() const { return errc_exit_code(code_); }
  const std::string& message() const { return message_; }

 private:
  Errc code_;
  std::string message_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool cond, Errc code, const std::string& message) {
  if (!cond) raise(code, message);
}

// FNV-1a 64-bit; used for artifact checksums and schema fingerprints.
std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a64(const std::string& s);
std::string to_hex(std::uint64_t value);

}  // namespace triage
