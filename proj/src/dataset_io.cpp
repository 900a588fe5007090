/*
 * Copyright 2026 The tsauc Authors.
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
#include "tsauc/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "tsauc/errors.hpp"
#include "tsauc/report.hpp"

namespace tsauc {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& f, const std::filesystem::path& path,
                    std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
  if (ec != std::errc{} || ptr != f.data() + f.size())
    throw ParseError(path.string() + ":" + std::to_string(line_no) +
                     ": malformed number '" + f + "'");
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw IoError("format_double: conversion failed");
  return std::string(buf, ptr);
}

LabeledDataset read_feature_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open feature matrix: " + path.string());

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line))
    throw ParseError(path.string() + ": empty file");
  ++line_no;

  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || header.front() != "subject_id")
    throw ParseError(path.string() + ": malformed header, missing column 'subject_id'");
  if (header.back() != "label")
    throw ParseError(path.string() + ": malformed header, missing column 'label'");
  if (header.size() < 3)
    throw ParseError(path.string() + ": malformed header, no feature columns");

  LabeledDataset ds;
  ds.feature_names.assign(header.begin() + 1, header.end() - 1);
  const std::size_t d = ds.feature_names.size();

  std::vector<std::string> ids;
  std::vector<double> values;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != d + 2)
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(d + 2) + " fields, got " +
                       std::to_string(fields.size()));
    ids.push_back(fields.front());
    for (std::size_t c = 0; c < d; ++c)
      values.push_back(parse_double(fields[c + 1], path, line_no));
    const std::string& lab = fields.back();
    if (lab != "0" && lab != "1")
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": label must be 0 or 1, got '" + lab + "'");
    labels.push_back(lab == "1" ? 1 : 0);
  }
  if (ids.empty()) throw ParseError(path.string() + ": no data rows");

  const Eigen::Index n = static_cast<Eigen::Index>(ids.size());
  ds.ids = std::move(ids);
  ds.X.resize(n, static_cast<Eigen::Index>(d));
  ds.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ds.y[i] = labels[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(d); ++c)
      ds.X(i, c) = values[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(c)];
  }
  validate_structure(ds);
  return ds;
}

void write_feature_matrix(const std::filesystem::path& path, const LabeledDataset& ds) {
  std::string out = "subject_id";
  for (const std::string& name : ds.feature_names) out += "," + name;
  out += ",label\n";
  for (Eigen::Index i = 0; i < ds.n_rows(); ++i) {
    out += ds.ids[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < ds.n_features(); ++c)
      out += "," + format_double(ds.X(i, c));
    out += ",";
    out += ds.y[i] == 1 ? '1' : '0';
    out += '\n';
  }
  atomic_write(path, out);
}

std::map<std::string, int> read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open labels file: " + path.string());

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  ++line_no;
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() != 2 || header[0] != "subject_id" || header[1] != "label")
    throw ParseError(path.string() + ": expected header 'subject_id,label'");

  std::map<std::string, int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 2)
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected 2 fields");
    if (fields[1] != "0" && fields[1] != "1")
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": label must be 0 or 1, got '" + fields[1] + "'");
    if (!labels.emplace(fields[0], fields[1] == "1" ? 1 : 0).second)
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": duplicate subject_id '" + fields[0] + "'");
  }
  return labels;
}

}  // namespace tsauc
