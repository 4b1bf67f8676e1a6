#pragma once

// Internal JSON helpers shared by the serialization code. Not installed.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "triage/common.hpp"

#include <Eigen/Dense>

namespace triage::jsonio {

using json = nlohmann::json;

// Doubles are persisted as C99 hex-float strings so round-trips are exact
// to the bit, independent of any decimal shortest-representation logic.
std::string encode_double(double v);
double decode_double(const std::string& s);

json encode_vector(const Eigen::VectorXd& v);
Eigen::VectorXd decode_vector(const json& j);
json encode_matrix(const Eigen::MatrixXd& m);
Eigen::MatrixXd decode_matrix(const json& j);
json encode_doubles(const std::vector<double>& v);
std::vector<double> decode_doubles(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace triage::jsonio
