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
#include "tsauc/dataset.hpp"

#include <unordered_set>

#include "tsauc/errors.hpp"

namespace tsauc {

void validate_structure(const LabeledDataset& ds) {
  const Eigen::Index n = ds.X.rows();
  const Eigen::Index d = ds.X.cols();
  if (n < 1) throw ValidationError("dataset: no subjects");
  if (d < 1) throw ValidationError("dataset: need at least 1 feature");
  if (static_cast<Eigen::Index>(ds.ids.size()) != n)
    throw ValidationError("dataset: ids/X row mismatch");
  if (ds.y.size() != n) throw ValidationError("dataset: y/X row mismatch");
  if (static_cast<Eigen::Index>(ds.feature_names.size()) != d)
    throw ValidationError("dataset: feature_names/X column mismatch");
  if (!ds.X.allFinite()) throw ValidationError("dataset: non-finite feature value");
  for (Eigen::Index i = 0; i < n; ++i)
    if (ds.y[i] != 0 && ds.y[i] != 1)
      throw ValidationError("dataset: label must be 0 or 1");

  std::unordered_set<std::string> seen;
  for (const auto& id : ds.ids)
    if (!seen.insert(id).second)
      throw ValidationError("dataset: duplicate subject_id '" + id + "'");
}

void validate(const LabeledDataset& ds) {
  validate_structure(ds);
  if (ds.n_rows() < 4) throw ValidationError("dataset: need at least 4 subjects");
  if (ds.n_pos() == 0 || ds.n_neg() == 0)
    throw StatError("dataset: both classes must be present");
}

LabeledDataset subset_rows(const LabeledDataset& ds, const std::vector<int>& rows) {
  LabeledDataset out;
  out.feature_names = ds.feature_names;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), ds.X.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  out.ids.reserve(rows.size());
  Eigen::Index k = 0;
  for (int r : rows) {
    out.X.row(k) = ds.X.row(r);
    out.y[k] = ds.y[r];
    out.ids.push_back(ds.ids[static_cast<std::size_t>(r)]);
    ++k;
  }
  return out;
}

LabeledDataset subset_columns(const LabeledDataset& ds, const std::vector<int>& cols) {
  LabeledDataset out;
  out.ids = ds.ids;
  out.y = ds.y;
  out.X.resize(ds.X.rows(), static_cast<Eigen::Index>(cols.size()));
  out.feature_names.reserve(cols.size());
  Eigen::Index k = 0;
  for (int c : cols) {
    out.X.col(k) = ds.X.col(c);
    out.feature_names.push_back(ds.feature_names[static_cast<std::size_t>(c)]);
    ++k;
  }
  return out;
}

}  // namespace tsauc
