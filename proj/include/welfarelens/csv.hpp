/*
 * Copyright 2026 The WelfareLens Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WELFARELENS_CSV_HPP_
#define WELFARELENS_CSV_HPP_

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "welfarelens/dataset.hpp"
#include "welfarelens/error.hpp"

namespace welfarelens {

// Shortest round-trip decimal representation; "nan"/"inf" for non-finite.
inline std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

inline double ParseDouble(std::string_view token) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
    token.remove_suffix(1);
  }
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
    Fail(ErrorCode::kData, "cannot parse number '" + std::string(token) + "'");
  }
  return value;
}

inline std::vector<std::string_view> SplitCsvLine(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

// Writes `content` to `path` through a temporary file and rename, so readers
// never observe a partially written file.
inline void WriteFileAtomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorCode::kIo, "cannot write " + tmp.string());
    out << content;
    if (!out) Fail(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot rename to " + path.string() + ": " + ec.message());
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string DatasetHeader(std::size_t dim, bool oracle) {
  std::string header = "y,d";
  for (std::size_t j = 1; j <= dim; ++j) header += ",x" + std::to_string(j);
  if (oracle) header += ",y0,y1,e_true,tau_true";
  return header;
}

inline std::string DatasetToCsv(const ObservedDataset& ds) {
  std::string out = DatasetHeader(ds.dim, false) + "\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out += FormatDouble(ds.y[i]) + "," + std::to_string(ds.d[i]);
    for (double v : ds.Row(i)) out += "," + FormatDouble(v);
    out += "\n";
  }
  return out;
}

inline std::string OracleToCsv(const OracleDataset& ods) {
  const ObservedDataset& ds = ods.base;
  std::string out = DatasetHeader(ds.dim, true) + "\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out += FormatDouble(ds.y[i]) + "," + std::to_string(ds.d[i]);
    for (double v : ds.Row(i)) out += "," + FormatDouble(v);
    out += "," + FormatDouble(ods.y0[i]) + "," + FormatDouble(ods.y1[i]) + "," +
           FormatDouble(ods.e_true[i]) + "," + FormatDouble(ods.tau_true[i]) + "\n";
  }
  return out;
}

// Parsed dataset file. `oracle` is populated only when the oracle columns are
// present in the header.
struct LoadedDataset {
  ObservedDataset observed;
  bool has_oracle = false;
  OracleDataset oracle;
};

inline LoadedDataset ParseDatasetCsv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) Fail(ErrorCode::kData, "empty dataset file");

  const auto header = SplitCsvLine(lines.front());
  if (header.size() < 3 || header[0] != "y" || header[1] != "d") {
    Fail(ErrorCode::kData, "dataset header must start with y,d,x1");
  }
  std::size_t dim = 0;
  while (2 + dim < header.size() && header[2 + dim] == "x" + std::to_string(dim + 1)) ++dim;
  if (dim == 0) Fail(ErrorCode::kData, "dataset header has no covariate columns");
  const std::size_t tail = header.size() - 2 - dim;
  const bool oracle = tail == 4;
  if (tail != 0 && !(oracle && header[2 + dim] == "y0" && header[3 + dim] == "y1" &&
                     header[4 + dim] == "e_true" && header[5 + dim] == "tau_true")) {
    Fail(ErrorCode::kData, "unexpected columns after covariates in dataset header");
  }

  LoadedDataset out;
  out.has_oracle = oracle;
  ObservedDataset& ds = out.observed;
  ds.dim = dim;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = SplitCsvLine(lines[li]);
    if (fields.size() != header.size()) {
      Fail(ErrorCode::kData, "line " + std::to_string(li + 1) + ": expected " +
                                 std::to_string(header.size()) + " fields");
    }
    ds.y.push_back(ParseDouble(fields[0]));
    const double dv = ParseDouble(fields[1]);
    // Non-integral treatment values become -1 so validation flags them.
    const bool integral = std::isfinite(dv) && dv == std::trunc(dv) && std::abs(dv) < 1e9;
    ds.d.push_back(integral ? static_cast<int>(dv) : -1);
    for (std::size_t j = 0; j < dim; ++j) ds.x.push_back(ParseDouble(fields[2 + j]));
    if (oracle) {
      out.oracle.y0.push_back(ParseDouble(fields[2 + dim]));
      out.oracle.y1.push_back(ParseDouble(fields[3 + dim]));
      out.oracle.e_true.push_back(ParseDouble(fields[4 + dim]));
      out.oracle.tau_true.push_back(ParseDouble(fields[5 + dim]));
    }
  }
  if (oracle) out.oracle.base = ds;
  return out;
}

inline LoadedDataset LoadDatasetCsv(const std::filesystem::path& path) {
  return ParseDatasetCsv(ReadFile(path));
}

}  // namespace welfarelens

#endif  // WELFARELENS_CSV_HPP_
