/*
 * Copyright 2026 The maxcon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MAXCON_IO_HPP_
#define MAXCON_IO_HPP_

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "maxcon/errors.hpp"
#include "maxcon/residual_system.hpp"

namespace maxcon {

namespace detail {

// Strips a trailing '#' comment and returns whether anything remains.
inline bool strip_comment(std::string& line) {
  const auto pos = line.find('#');
  if (pos != std::string::npos) line.erase(pos);
  return line.find_first_not_of(" \t\r\n") != std::string::npos;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);  // round-trips exactly
  return buf;
}

}  // namespace detail

/// Match file: one correspondence per line `x1 y1 x2 y2`, '#' comments
/// allowed. Throws ParseError with the offending 1-based line number.
inline std::vector<PointMatch> read_matches(std::istream& in) {
  std::vector<PointMatch> matches;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::strip_comment(line)) continue;
    std::istringstream fields(line);
    PointMatch m;
    if (!(fields >> m.p.x() >> m.p.y() >> m.q.x() >> m.q.y()))
      throw ParseError("expected `x1 y1 x2 y2`", lineno);
    double extra;
    if (fields >> extra) throw ParseError("trailing fields on match line", lineno);
    if (!std::isfinite(m.p.x()) || !std::isfinite(m.p.y()) ||
        !std::isfinite(m.q.x()) || !std::isfinite(m.q.y()))
      throw ParseError("non-finite coordinate", lineno);
    matches.push_back(m);
  }
  return matches;
}

inline std::vector<PointMatch> read_matches_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open match file: " + path);
  return read_matches(in);
}

inline void write_matches(std::ostream& out,
                          const std::vector<PointMatch>& matches) {
  for (const auto& m : matches)
    out << detail::format_double(m.p.x()) << ' '
        << detail::format_double(m.p.y()) << ' '
        << detail::format_double(m.q.x()) << ' '
        << detail::format_double(m.q.y()) << '\n';
}

/// Instance file: header `n d epsilon`, then one line per row
/// `group_index b a_1 ... a_d` with 0-based group indices.
inline ProblemInstance read_instance(std::istream& in) {
  std::string line;
  int lineno = 0;
  int n = 0, d = 0;
  double epsilon = 0;
  bool have_header = false;

  struct Row {
    int group;
    double b;
    std::vector<double> a;
  };
  std::vector<Row> rows;

  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::strip_comment(line)) continue;
    std::istringstream fields(line);
    if (!have_header) {
      if (!(fields >> n >> d >> epsilon))
        throw ParseError("expected header `n d epsilon`", lineno);
      if (n < 1 || d < 1) throw ParseError("header requires n >= 1, d >= 1", lineno);
      if (epsilon < 0) throw ParseError("epsilon must be >= 0", lineno);
      have_header = true;
      continue;
    }
    Row row;
    if (!(fields >> row.group >> row.b))
      throw ParseError("expected `group_index b a_1 ... a_d`", lineno);
    row.a.resize(d);
    for (int k = 0; k < d; ++k)
      if (!(fields >> row.a[k]))
        throw ParseError("row has fewer than d coefficients", lineno);
    double extra;
    if (fields >> extra) throw ParseError("row has more than d coefficients", lineno);
    if (row.group < 0 || row.group >= n)
      throw ParseError("group index out of range", lineno);
    rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("missing header `n d epsilon`", 1);
  if (rows.empty()) throw ParseError("instance has no rows", lineno);

  ProblemInstance inst;
  inst.epsilon = epsilon;
  inst.system.coeffs.resize(rows.size(), d);
  inst.system.offsets.resize(rows.size());
  inst.system.row_group.resize(rows.size());
  inst.system.num_groups = n;
  for (size_t j = 0; j < rows.size(); ++j) {
    for (int k = 0; k < d; ++k) inst.system.coeffs(j, k) = rows[j].a[k];
    inst.system.offsets[j] = rows[j].b;
    inst.system.row_group[j] = rows[j].group;
  }
  inst.validate();
  return inst;
}

inline ProblemInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return read_instance(in);
}

inline void write_instance(std::ostream& out, const ProblemInstance& inst) {
  out << inst.system.size() << ' ' << inst.system.dim() << ' '
      << detail::format_double(inst.epsilon) << '\n';
  for (int j = 0; j < inst.system.num_rows(); ++j) {
    out << inst.system.row_group[j] << ' '
        << detail::format_double(inst.system.offsets[j]);
    for (int k = 0; k < inst.system.dim(); ++k)
      out << ' ' << detail::format_double(inst.system.coeffs(j, k));
    out << '\n';
  }
}

inline void write_instance_file(const std::string& path,
                                const ProblemInstance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_instance(out, inst);
}

/// One `0`/`1` per line, n lines, 1 = inlier.
inline void write_inlier_mask(std::ostream& out, int n,
                              const std::vector<int>& inliers) {
  std::vector<char> mask(n, 0);
  for (int i : inliers) mask[i] = 1;
  for (int i = 0; i < n; ++i) out << int(mask[i]) << '\n';
}

}  // namespace maxcon

#endif  // MAXCON_IO_HPP_
