#ifndef LPEQ_IO_HPP
#define LPEQ_IO_HPP

// Problem ingestion (JSON or CSV) and curve CSV emission.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpeq/builtin_problems.hpp"
#include "lpeq/linalg.hpp"
#include "lpeq/solvers.hpp"

namespace lpeq {

/// Shortest-roundtrip text for v rounded to 12 significant digits, with no
/// locale involvement.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

/// v rounded to 12 significant digits (so JSON dumps are stable).
inline double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  const std::string s = format_number(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

namespace detail {

inline Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  Matrix a(static_cast<Eigen::Index>(rows.size()),
           rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return a;
}

inline Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// {"name"?: string, "A": [[number]], "b": [number]}
inline SensingProblem parse_problem_json(const std::string& text, const Tolerances& tol = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Input, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::Input, "problem JSON must be an object");
  if (!doc.contains("A")) fail(ErrorKind::Input, "field \"A\" is missing");
  if (!doc.contains("b")) fail(ErrorKind::Input, "field \"b\" is missing");
  const auto& ja = doc["A"];
  const auto& jb = doc["b"];
  if (!ja.is_array() || ja.empty()) fail(ErrorKind::Input, "field \"A\" must be a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < ja.size(); ++i) {
    if (!ja[i].is_array()) fail(ErrorKind::Input, "A[" + std::to_string(i) + "] is not an array");
    std::vector<double> row;
    for (size_t j = 0; j < ja[i].size(); ++j) {
      if (!ja[i][j].is_number()) {
        fail(ErrorKind::Input, "A[" + std::to_string(i) + "][" + std::to_string(j) + "] is not a number");
      }
      row.push_back(ja[i][j].get<double>());
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(ErrorKind::Input, "A[" + std::to_string(i) + "] has " + std::to_string(row.size()) +
                                 " entries, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (!jb.is_array()) fail(ErrorKind::Input, "field \"b\" must be an array");
  std::vector<double> b;
  for (size_t i = 0; i < jb.size(); ++i) {
    if (!jb[i].is_number()) fail(ErrorKind::Input, "b[" + std::to_string(i) + "] is not a number");
    b.push_back(jb[i].get<double>());
  }
  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail(ErrorKind::Input, "field \"name\" must be a string");
    name = doc["name"].get<std::string>();
  }
  return SensingProblem::make(detail::rows_to_matrix(rows), detail::to_vector(b), name, tol);
}

/// Matrix rows (comma separated), a blank line, then b as one row.
inline SensingProblem parse_problem_csv(const std::string& text, const Tolerances& tol = {},
                                        std::string name = {}) {
  std::vector<std::vector<double>> rows;
  std::vector<double> b;
  bool in_b = false;
  bool have_b = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = detail::trim(line);
    if (body.empty()) {
      if (!rows.empty()) in_b = true;
      continue;
    }
    if (have_b) fail(ErrorKind::Input, "line " + std::to_string(line_no) + ": unexpected data after b");
    std::vector<double> values;
    size_t start = 0;
    int field = 0;
    while (true) {
      ++field;
      const size_t comma = body.find(',', start);
      const std::string_view cell = detail::trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        fail(ErrorKind::Input, "line " + std::to_string(line_no) + ", field " + std::to_string(field) +
                                   ": not a number: '" + std::string(cell) + "'");
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (in_b) {
      b = std::move(values);
      have_b = true;
    } else {
      if (!rows.empty() && values.size() != rows.front().size()) {
        fail(ErrorKind::Input, "line " + std::to_string(line_no) + ": row has " +
                                   std::to_string(values.size()) + " fields, expected " +
                                   std::to_string(rows.front().size()));
      }
      rows.push_back(std::move(values));
    }
  }
  if (rows.empty()) fail(ErrorKind::Input, "CSV problem has no matrix rows");
  if (!have_b) fail(ErrorKind::Input, "CSV problem is missing the blank line and b row");
  return SensingProblem::make(detail::rows_to_matrix(rows), detail::to_vector(b), std::move(name), tol);
}

/// Reads a problem file; JSON when the first non-blank character is '{'.
inline SensingProblem load_problem(const std::string& path, const Tolerances& tol = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Input, "cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_problem_json(text, tol);
  return parse_problem_csv(text, tol, path);
}

/// "t,objective" (d = 1) or "s,t,objective" (d = 2), row-major, 12 significant digits.
inline std::string emit_csv(const std::vector<CurvePoint>& points, int d) {
  if (d != 1 && d != 2) fail(ErrorKind::Parameter, "emit_csv: d must be 1 or 2");
  std::string out = d == 1 ? "t,objective\n" : "s,t,objective\n";
  for (const CurvePoint& pt : points) {
    for (int k = 0; k < d; ++k) {
      out += format_number(pt.params(k));
      out += ',';
    }
    out += format_number(pt.objective);
    out += '\n';
  }
  return out;
}

}  // namespace lpeq

#endif  // LPEQ_IO_HPP
