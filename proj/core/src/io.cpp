#include "gatedist/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gatedist {

namespace {

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// byte offset -> "line:column" for parse diagnostics
std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

int require_positive_int(const Json& j, const std::string& key,
                         const std::string& context) {
  if (!j.contains(key))
    throw parse_error(context + ": missing required field '" + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
    throw parse_error(context + ": field '" + key + "' must be a positive integer");
  return v.get<int>();
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(path + ":" + locate(text, e.byte) + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  return parse_json_text(read_all(path), path);
}

Json matrix_to_json(const Matrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      data.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
  j["data"] = std::move(data);
  return j;
}

Matrix matrix_from_json(const Json& j, const std::string& context) {
  if (!j.is_object()) throw parse_error(context + ": expected a matrix object");
  const int rows = require_positive_int(j, "rows", context);
  const int cols = require_positive_int(j, "cols", context);
  if (!j.contains("data") || !j.at("data").is_array())
    throw parse_error(context + ": missing 'data' array");
  const Json& data = j.at("data");
  if (Eigen::Index(data.size()) != Eigen::Index(rows) * cols) {
    std::ostringstream msg;
    msg << context << ": 'data' has " << data.size() << " entries, expected rows*cols = "
        << Eigen::Index(rows) * cols;
    throw parse_error(msg.str());
  }
  Matrix m(rows, cols);
  Eigen::Index idx = 0;
  for (const Json& entry : data) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_number()) {
      throw parse_error(context + ": data entry " + std::to_string(idx) +
                        " is not a [re, im] pair");
    }
    m(idx / cols, idx % cols) = Complex(entry[0].get<double>(), entry[1].get<double>());
    ++idx;
  }
  if (!m.allFinite())
    throw parse_error(context + ": matrix has non-finite entries");
  return m;
}

MatrixFile read_matrix_file(const std::string& path) {
  const Json j = read_json_file(path);
  MatrixFile out;
  out.matrix = matrix_from_json(j, path);
  if (j.contains("label")) {
    if (!j.at("label").is_string())
      throw parse_error(path + ": 'label' must be a string");
    out.label = j.at("label").get<std::string>();
  }
  if (j.contains("n_s")) out.n_s = require_positive_int(j, "n_s", path);
  if (j.contains("n_b")) out.n_b = require_positive_int(j, "n_b", path);
  if (j.contains("ordering")) {
    if (!j.at("ordering").is_string())
      throw parse_error(path + ": 'ordering' must be a string");
    try {
      out.ordering = ordering_from_string(j.at("ordering").get<std::string>());
    } catch (const domain_error& e) {
      throw parse_error(path + ": " + e.what());
    }
  }
  return out;
}

void write_matrix_file(const std::string& path, const Matrix& m,
                       const std::optional<std::string>& label,
                       std::optional<int> n_s, std::optional<int> n_b,
                       std::optional<Ordering> ordering) {
  Json j = matrix_to_json(m);
  if (label) j["label"] = *label;
  if (n_s) j["n_s"] = *n_s;
  if (n_b) j["n_b"] = *n_b;
  if (ordering) j["ordering"] = to_string(*ordering);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error(path + ": cannot open file for writing");
  out << j.dump(2) << "\n";
}

RealVector real_vector_from_json(const Json& j, const std::string& context) {
  if (!j.is_array()) throw parse_error(context + ": expected an array of numbers");
  RealVector v(j.size());
  Eigen::Index i = 0;
  for (const Json& x : j) {
    if (!x.is_number())
      throw parse_error(context + ": entry " + std::to_string(i) + " is not a number");
    v(i++) = x.get<double>();
  }
  if (!v.allFinite()) throw parse_error(context + ": non-finite entries");
  return v;
}

Json real_vector_to_json(const RealVector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

ControlProblem read_problem_file(const std::string& path) {
  const Json j = read_json_file(path);
  if (!j.is_object()) throw parse_error(path + ": expected a problem object");

  ControlProblem p;
  p.n_s = require_positive_int(j, "n_s", path);
  p.n_b = require_positive_int(j, "n_b", path);
  p.segments = require_positive_int(j, "segments", path);
  if (!j.contains("dt") || !j.at("dt").is_number())
    throw parse_error(path + ": missing numeric field 'dt'");
  p.dt = j.at("dt").get<double>();

  p.ordering = Ordering::SystemFirst;
  if (j.contains("ordering")) {
    try {
      p.ordering = ordering_from_string(j.at("ordering").get<std::string>());
    } catch (const domain_error& e) {
      throw parse_error(path + ": " + e.what());
    }
  }

  if (j.contains("h_drift"))
    p.h_drift = matrix_from_json(j.at("h_drift"), path + ": h_drift");
  if (!j.contains("h_controls") || !j.at("h_controls").is_array() ||
      j.at("h_controls").empty())
    throw parse_error(path + ": 'h_controls' must be a non-empty array");
  int k = 0;
  for (const Json& h : j.at("h_controls")) {
    p.h_controls.push_back(
        matrix_from_json(h, path + ": h_controls[" + std::to_string(k) + "]"));
    ++k;
  }
  if (!j.contains("g_target"))
    throw parse_error(path + ": missing 'g_target'");
  p.g_target = matrix_from_json(j.at("g_target"), path + ": g_target");

  if (!j.contains("theta_set") || !j.at("theta_set").is_object())
    throw parse_error(path + ": missing 'theta_set' object");
  const Json& ts = j.at("theta_set");
  const std::string kind = ts.value("kind", "box");
  const int dim = int(p.h_controls.size()) * p.segments;
  auto expand = [&](const char* key) {
    if (!ts.contains(key))
      throw parse_error(path + ": theta_set missing '" + std::string(key) + "'");
    const Json& v = ts.at(key);
    if (v.is_number()) return RealVector::Constant(dim, v.get<double>()).eval();
    return real_vector_from_json(v, path + ": theta_set." + key);
  };
  if (kind == "box") {
    p.theta_set = ThetaBox{expand("lo"), expand("hi")};
  } else if (kind == "ball") {
    if (!ts.contains("radius") || !ts.at("radius").is_number())
      throw parse_error(path + ": theta_set missing numeric 'radius'");
    p.theta_set = ThetaBall{expand("center"), ts.at("radius").get<double>()};
  } else {
    throw parse_error(path + ": theta_set.kind must be 'box' or 'ball'");
  }

  try {
    validate_problem(p);
  } catch (const std::invalid_argument& e) {
    throw parse_error(path + ": " + e.what());
  }
  return p;
}

void write_problem_file(const std::string& path, const ControlProblem& p) {
  Json j;
  j["n_s"] = p.n_s;
  j["n_b"] = p.n_b;
  j["ordering"] = to_string(p.ordering);
  j["segments"] = p.segments;
  j["dt"] = p.dt;
  if (p.h_drift.size() != 0) j["h_drift"] = matrix_to_json(p.h_drift);
  Json hc = Json::array();
  for (const Matrix& h : p.h_controls) hc.push_back(matrix_to_json(h));
  j["h_controls"] = std::move(hc);
  j["g_target"] = matrix_to_json(p.g_target);
  Json ts;
  if (const auto* box = std::get_if<ThetaBox>(&p.theta_set)) {
    ts["kind"] = "box";
    ts["lo"] = real_vector_to_json(box->lo);
    ts["hi"] = real_vector_to_json(box->hi);
  } else {
    const auto& ball = std::get<ThetaBall>(p.theta_set);
    ts["kind"] = "ball";
    ts["center"] = real_vector_to_json(ball.center);
    ts["radius"] = ball.radius;
  }
  j["theta_set"] = std::move(ts);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error(path + ": cannot open file for writing");
  out << j.dump(2) << "\n";
}

std::string file_hash_hex(const std::string& path) {
  const std::string bytes = read_all(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

std::string format_double(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace gatedist
