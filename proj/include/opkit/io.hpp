// Matrix Market / JSON matrix files and JSON report documents.
#pragma once

#include "opkit/core.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace opkit {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

enum class MatrixFormat { matrix_market, json };

namespace detail {

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

inline double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) parse_fail(line, "invalid number '" + s + "'");
  return v;
}

inline long long parse_index(const std::string& s, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) parse_fail(line, "invalid integer '" + s + "'");
  return v;
}

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(ErrorKind::IOError, "cannot format number");
  return std::string(buf, ptr);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrix Market

inline ComplexMatrix parse_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) detail::parse_fail(1, "empty input");
  ++lineno;
  const auto head = detail::tokens(line);
  if (head.size() != 5 || detail::lower(head[0]) != "%%matrixmarket" || detail::lower(head[1]) != "matrix")
    detail::parse_fail(lineno, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'");
  const std::string layout = detail::lower(head[2]);
  const std::string field = detail::lower(head[3]);
  const std::string symmetry = detail::lower(head[4]);
  if (layout != "array" && layout != "coordinate") detail::parse_fail(lineno, "unknown format '" + head[2] + "'");
  if (field == "pattern") throw Error(ErrorKind::UnsupportedFormat, "pattern matrices are not supported");
  if (field != "complex" && field != "real" && field != "integer")
    detail::parse_fail(lineno, "unknown field '" + head[3] + "'");
  if (symmetry == "skew-symmetric") throw Error(ErrorKind::UnsupportedFormat, "skew-symmetric matrices are not supported");
  if (symmetry != "general" && symmetry != "hermitian" && symmetry != "symmetric")
    detail::parse_fail(lineno, "unknown symmetry '" + head[4] + "'");
  const bool is_complex = field == "complex";
  const bool mirrored = symmetry != "general";
  const bool conj_mirror = symmetry == "hermitian";

  // Skip comments and blank lines up to the size line.
  std::vector<std::string> size;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    size = detail::tokens(line);
    if (!size.empty()) break;
  }
  const std::size_t want = layout == "array" ? 2 : 3;
  if (size.size() != want) detail::parse_fail(lineno, "malformed size line");
  const long long rows = detail::parse_index(size[0], lineno);
  const long long cols = detail::parse_index(size[1], lineno);
  if (rows < 0 || cols < 0) detail::parse_fail(lineno, "negative dimension");
  if (mirrored && rows != cols) detail::parse_fail(lineno, "symmetric storage requires a square matrix");
  ComplexMatrix m = ComplexMatrix::Zero(rows, cols);

  const std::size_t per_entry = is_complex ? 2 : 1;
  const auto read_value = [&](const std::vector<std::string>& tk, std::size_t offset) {
    const double re = detail::parse_double(tk[offset], lineno);
    const double im = is_complex ? detail::parse_double(tk[offset + 1], lineno) : 0.0;
    return Complex(re, im);
  };
  const auto next_entry = [&](std::vector<std::string>& tk) {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '%') continue;
      tk = detail::tokens(line);
      if (!tk.empty()) return true;
    }
    return false;
  };
  const auto place = [&](long long i, long long j, Complex v) {
    m(i, j) = v;
    if (mirrored && i != j) m(j, i) = conj_mirror ? std::conj(v) : v;
  };

  std::vector<std::string> tk;
  if (layout == "array") {
    // Column-major; symmetric storage holds the lower triangle only.
    for (long long j = 0; j < cols; ++j) {
      for (long long i = mirrored ? j : 0; i < rows; ++i) {
        if (!next_entry(tk)) detail::parse_fail(lineno, "unexpected end of data");
        if (tk.size() != per_entry) detail::parse_fail(lineno, "wrong number of values in entry");
        place(i, j, read_value(tk, 0));
      }
    }
  } else {
    const long long nnz = detail::parse_index(size[2], lineno);
    if (nnz < 0) detail::parse_fail(lineno, "negative entry count");
    for (long long k = 0; k < nnz; ++k) {
      if (!next_entry(tk)) detail::parse_fail(lineno, "unexpected end of data");
      if (tk.size() != 2 + per_entry) detail::parse_fail(lineno, "wrong number of fields in entry");
      const long long i = detail::parse_index(tk[0], lineno) - 1;
      const long long j = detail::parse_index(tk[1], lineno) - 1;
      if (i < 0 || i >= rows || j < 0 || j >= cols) detail::parse_fail(lineno, "index out of range");
      place(i, j, read_value(tk, 2));
    }
  }
  if (next_entry(tk)) detail::parse_fail(lineno, "trailing data");
  return m;
}

/// `array complex general`, column-major, shortest round-trip decimals.
inline std::string format_matrix_market(const ComplexMatrix& m) {
  std::ostringstream out;
  out << "%%MatrixMarket matrix array complex general\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      out << detail::format_double(m(i, j).real()) << ' ' << detail::format_double(m(i, j).imag()) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON matrices

inline void require_finite_json(const Json& j, const std::string& where = "$") {
  if (j.is_number_float() && !std::isfinite(j.get<double>()))
    throw Error(ErrorKind::NonFiniteValue, "non-finite number at " + where);
  if (j.is_object())
    for (auto it = j.begin(); it != j.end(); ++it) require_finite_json(it.value(), where + "." + it.key());
  if (j.is_array())
    for (std::size_t i = 0; i < j.size(); ++i) require_finite_json(j[i], where + "[" + std::to_string(i) + "]");
}

inline Json matrix_to_json(const ComplexMatrix& m) {
  require_finite(m, "matrix");
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  try {
    const long long rows = j.at("rows").get<long long>();
    const long long cols = j.at("cols").get<long long>();
    if (rows < 0 || cols < 0) throw Error(ErrorKind::ParseError, "negative dimension");
    const Json& re = j.at("re");
    const Json& im = j.contains("im") ? j.at("im") : Json::array();
    const std::size_t count = static_cast<std::size_t>(rows * cols);
    if (re.size() != count || (!im.empty() && im.size() != count))
      throw Error(ErrorKind::ParseError, "re/im length does not match rows*cols");
    ComplexMatrix m(rows, cols);
    for (long long i = 0; i < rows; ++i)
      for (long long c = 0; c < cols; ++c) {
        const std::size_t k = static_cast<std::size_t>(i * cols + c);
        m(i, c) = Complex(re[k].get<double>(), im.empty() ? 0.0 : im[k].get<double>());
      }
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("matrix JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IOError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IOError, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorKind::IOError, "write failed for '" + path + "'");
}

inline MatrixFormat guess_format(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && detail::lower(path.substr(dot)) == ".json") return MatrixFormat::json;
  return MatrixFormat::matrix_market;
}

inline ComplexMatrix read_matrix(const std::string& path, MatrixFormat format) {
  const std::string text = read_file(path);
  if (format == MatrixFormat::json) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::ParseError, std::string("JSON: ") + e.what());
    }
    return matrix_from_json(j);
  }
  std::istringstream in(text);
  return parse_matrix_market(in);
}

inline ComplexMatrix read_matrix(const std::string& path) { return read_matrix(path, guess_format(path)); }

inline void write_matrix(const ComplexMatrix& m, const std::string& path, MatrixFormat format) {
  require_finite(m, "matrix");
  if (format == MatrixFormat::json) write_file(path, matrix_to_json(m).dump(2) + "\n");
  else write_file(path, format_matrix_market(m));
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::IOError, "digest computation failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

// ---------------------------------------------------------------------------
// Reports

struct InputDigest {
  std::string path;
  std::string sha256;

  bool operator==(const InputDigest&) const = default;
};

inline InputDigest digest_file(const std::string& path) { return {path, sha256_hex(read_file(path))}; }

struct ReportDocument {
  std::string command;
  std::vector<InputDigest> inputs;
  Json results = Json::object();
  std::map<std::string, double> tolerances_used;
  std::optional<std::uint64_t> seed;
  std::string version = kVersion;

  bool operator==(const ReportDocument& o) const {
    return command == o.command && inputs == o.inputs && results == o.results &&
           tolerances_used == o.tolerances_used && seed == o.seed && version == o.version;
  }
};

inline Json report_to_json(const ReportDocument& r) {
  Json inputs = Json::array();
  for (const InputDigest& d : r.inputs) inputs.push_back({{"path", d.path}, {"sha256", d.sha256}});
  Json tol = Json::object();
  for (const auto& [k, v] : r.tolerances_used) tol[k] = v;
  Json j{{"command", r.command}, {"inputs", inputs},     {"results", r.results},
         {"tolerances_used", tol}, {"version", r.version}};
  j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  require_finite_json(j);
  return j;
}

inline ReportDocument report_from_json(const Json& j) {
  try {
    ReportDocument r;
    r.command = j.at("command").get<std::string>();
    for (const Json& d : j.at("inputs")) r.inputs.push_back({d.at("path").get<std::string>(), d.at("sha256").get<std::string>()});
    r.results = j.at("results");
    for (auto it = j.at("tolerances_used").begin(); it != j.at("tolerances_used").end(); ++it)
      r.tolerances_used[it.key()] = it.value().get<double>();
    if (j.contains("seed") && !j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
    r.version = j.at("version").get<std::string>();
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("report JSON: ") + e.what());
  }
}

/// Pretty-printed, keys sorted, trailing newline.
inline std::string serialize_report(const ReportDocument& r) { return report_to_json(r).dump(2) + "\n"; }

inline ReportDocument parse_report(const std::string& text) {
  try {
    return report_from_json(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("report JSON: ") + e.what());
  }
}

inline void write_report(const ReportDocument& r, const std::string& path) { write_file(path, serialize_report(r)); }

}  // namespace opkit
