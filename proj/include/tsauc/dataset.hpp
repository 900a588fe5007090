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
#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace tsauc {

/// A labeled cohort: one row of X per subject, y[i] == 1 for fallers.
/// Subject ids must be unique; both classes must be present; n >= 4.
struct LabeledDataset {
  std::vector<std::string> ids;
  std::vector<std::string> feature_names;
  Eigen::MatrixXd X;   // n x D
  Eigen::ArrayXi y;    // 0/1

  Eigen::Index n_rows() const { return X.rows(); }
  Eigen::Index n_features() const { return X.cols(); }
  Eigen::Index n_pos() const { return (y == 1).count(); }
  Eigen::Index n_neg() const { return n_rows() - n_pos(); }
};

/// Shape, finiteness, label-domain and id-uniqueness checks; the interchange
/// CSV only has to satisfy these. Throws ValidationError.
void validate_structure(const LabeledDataset& ds);

/// validate_structure plus the statistical preconditions of the tests:
/// n >= 4 and both classes present (StatError when a class is missing).
void validate(const LabeledDataset& ds);

/// Row subset in the given order; ids/labels follow.
LabeledDataset subset_rows(const LabeledDataset& ds, const std::vector<int>& rows);

/// Column subset in the given order; feature names follow.
LabeledDataset subset_columns(const LabeledDataset& ds, const std::vector<int>& cols);

}  // namespace tsauc
