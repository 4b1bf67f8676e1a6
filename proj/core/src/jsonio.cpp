#include "jsonio.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace triage::jsonio {

std::string encode_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double decode_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  require(end != nullptr && *end == '\0' && end != s.c_str(), Errc::io_error,
          "malformed float literal '" + s + "'");
  return v;
}

json encode_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(encode_double(v[i]));
  return out;
}

Eigen::VectorXd decode_vector(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& item : j) v[i++] = decode_double(item.get<std::string>());
  return v;
}

json encode_matrix(const Eigen::MatrixXd& m) {
  json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(encode_double(m(r, c)));
  out["data"] = std::move(data);
  return out;
}

Eigen::MatrixXd decode_matrix(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  require(static_cast<Eigen::Index>(data.size()) == rows * cols, Errc::io_error,
          "matrix payload size mismatch");
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = decode_double(data[k++].get<std::string>());
  return m;
}

json encode_doubles(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(encode_double(x));
  return out;
}

std::vector<double> decode_doubles(const json& j) {
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& item : j) v.push_back(decode_double(item.get<std::string>()));
  return v;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io_error, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), Errc::io_error, "cannot write " + path.string());
  out << text;
  out.close();
  require(out.good(), Errc::io_error, "write failed for " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), Errc::io_error, "invalid JSON in " + path.string());
  return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace triage::jsonio
