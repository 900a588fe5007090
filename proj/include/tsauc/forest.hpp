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
#include <cstdint>
#include <vector>

#include "tsauc/dataset.hpp"

namespace tsauc {

struct Hyperparams {
  int leaf_size = 8;         // minimum in-bag samples per leaf
  int features_per_tree = 4; // features drawn once per tree, used for all splits
  int n_trees = 200;
  std::uint64_t seed = 0;
};

struct TreeNode {
  int feature = -1;         // -1 marks a leaf
  double threshold = 0.0;   // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  double pos_fraction = 0.0;  // leaf payload: in-bag positive-class fraction
  int n_samples = 0;          // leaf payload: in-bag sample count

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;       // nodes[0] is the root
  std::vector<int> feature_subset;   // ascending column ids, size M
};

/// A trained forest. Trees, in-bag counts, and feature subsets are exposed
/// so that out-of-bag bookkeeping and the permutation-importance procedure
/// can address individual trees.
struct ForestModel {
  std::vector<Tree> trees;
  std::vector<std::vector<int>> inbag_counts;  // [tree][row] bootstrap multiplicity
  Hyperparams hp;
  Eigen::Index n_features = 0;
  Eigen::Index n_rows = 0;
};

/// Per-subject OOB aggregation: posterior[i] is the mean positive-class leaf
/// fraction over the trees whose bootstrap excluded subject i.
struct OobScores {
  std::vector<int> oob_tree_count;
  Eigen::VectorXd posterior;
};

/// Trains hp.n_trees CART trees on bootstrap samples of size n (drawn with
/// replacement over the canonical subject order, so row permutations do not
/// change the model). Each tree draws features_per_tree columns without
/// replacement once and uses only those; splits maximize Gini impurity
/// decrease, the threshold sits on the smallest right-side value (strict
/// less-than routing, so splits depend only on the order of feature values);
/// ties break toward the lowest feature index, then the lowest threshold.
/// A node becomes a leaf when it is pure, when no split leaves both children
/// with >= leaf_size samples, or when no split improves impurity.
/// Deterministic given (ds, hp) under any thread schedule.
ForestModel train(const LabeledDataset& ds, const Hyperparams& hp);

/// Leaf positive fraction for one tree at row x.
double tree_posterior(const Tree& tree, const Eigen::RowVectorXd& x);

/// Mean leaf positive fraction over all trees.
double predict_posterior(const ForestModel& model, const Eigen::RowVectorXd& x);

/// OOB posteriors for every subject of the training set. Throws StatError
/// naming the subject if any subject was in-bag in every tree (retrain with
/// more trees).
OobScores oob_posteriors(const ForestModel& model, const LabeledDataset& ds);

}  // namespace tsauc
