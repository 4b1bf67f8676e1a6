#include "triage/common.hpp"

namespace triage {

const char* errc_tag(Errc code) {
  switch (code) {
    case Errc::invalid_config: return "E_INVALID_CONFIG";
    case Errc::bad_k: return "E_BAD_K";
    case Errc::bad_rate: return "E_BAD_RATE";
    case Errc::non_positive_delta: return "E_NON_POSITIVE_DELTA";
    case Errc::empty_grid: return "E_EMPTY_GRID";
    case Errc::too_many_groups: return "E_TOO_MANY_GROUPS";
    case Errc::too_few_samples: return "E_TOO_FEW_SAMPLES";
    case Errc::io_error: return "E_IO";
    case Errc::missing_column: return "E_MISSING_COLUMN";
    case Errc::duplicate_id: return "E_DUPLICATE_ID";
    case Errc::non_binary_label: return "E_NON_BINARY_LABEL";
    case Errc::missing_basic_value: return "E_MISSING_BASIC_VALUE";
    case Errc::unknown_category: return "E_UNKNOWN_CATEGORY";
    case Errc::missing_value: return "E_MISSING_VALUE";
    case Errc::test_too_large: return "E_TEST_TOO_LARGE";
    case Errc::empty_fit: return "E_EMPTY_FIT";
    case Errc::schema_mismatch: return "E_SCHEMA_MISMATCH";
    case Errc::length_mismatch: return "E_LENGTH_MISMATCH";
    case Errc::width_mismatch: return "E_WIDTH_MISMATCH";
    case Errc::out_of_range: return "E_OUT_OF_RANGE";
    case Errc::empty_group: return "E_EMPTY_GROUP";
    case Errc::empty_curve: return "E_EMPTY_CURVE";
    case Errc::empty_background: return "E_EMPTY_BACKGROUND";
    case Errc::advanced_features_required: return "E_ADVANCED_FEATURES_REQUIRED";
    case Errc::leakage_detected: return "E_LEAKAGE_DETECTED";
    case Errc::single_class: return "E_SINGLE_CLASS";
    case Errc::no_positives: return "E_NO_POSITIVES";
    case Errc::degenerate_sample: return "E_DEGENERATE_SAMPLE";
    case Errc::zero_expected: return "E_ZERO_EXPECTED";
    case Errc::too_few_replicates: return "E_TOO_FEW_REPLICATES";
    case Errc::no_feasible_point: return "E_NO_FEASIBLE_POINT";
    case Errc::numeric_failure: return "E_NUMERIC_FAILURE";
  }
  return "E_UNKNOWN";
}

int errc_exit_code(Errc code) {
  switch (code) {
    case Errc::invalid_config:
    case Errc::bad_k:
    case Errc::bad_rate:
    case Errc::non_positive_delta:
    case Errc::empty_grid:
    case Errc::too_many_groups:
    case Errc::too_few_samples:
      return 2;
    case Errc::io_error:
    case Errc::missing_column:
    case Errc::duplicate_id:
    case Errc::non_binary_label:
    case Errc::missing_basic_value:
    case Errc::unknown_category:
    case Errc::missing_value:
    case Errc::test_too_large:
    case Errc::empty_fit:
    case Errc::schema_mismatch:
    case Errc::length_mismatch:
    case Errc::width_mismatch:
    case Errc::out_of_range:
    case Errc::empty_group:
    case Errc::empty_curve:
    case Errc::empty_background:
    case Errc::advanced_features_required:
    case Errc::leakage_detected:
      return 3;
    case Errc::single_class:
    case Errc::no_positives:
    case Errc::degenerate_sample:
    case Errc::zero_expected:
    case Errc::too_few_replicates:
    case Errc::no_feasible_point:
    case Errc::numeric_failure:
      return 4;
  }
  return 1;
}

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::string to_hex(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

}  // namespace triage
