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

#include <cstdint>
#include <vector>

#include "tsauc/forest.hpp"
#include "tsauc/rank_stats.hpp"

namespace tsauc {

/// Hyperparameter grid for the AUC maximization. Defaults follow the bounded
/// ranges the search is restricted to: shallow trees (leaf size 8..19),
/// simple trees (1..8 features), 200 trees per forest.
struct SearchSpace {
  std::vector<int> ls_values = {8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19};
  std::vector<int> m_values = {1, 2, 3, 4, 5, 6, 7, 8};
  int n_trees = 200;
  std::uint64_t seed = 0;
};

struct GridPoint {
  int ls = 0;
  int m = 0;
  double auc = 0.0;
};

/// Output of the two-sample test: the maximal OOB AUC over the grid, the
/// winning hyperparameters, the retrained star model's OOB scores, and the
/// one-sided MWW p-value computed from them.
struct TsAucResult {
  double auc_star = 0.0;
  Hyperparams best_hp;
  OobScores oob_scores;
  double p_value = 1.0;
  std::vector<GridPoint> auc_grid;
};

/// Runs the full test: trains one forest per (LS, M) grid point (each with a
/// seed derived from (space.seed, ls, m)), scores its OOB posteriors by AUC,
/// selects the maximizer (ties prefer smaller M, then larger LS), retrains
/// the star model with a fresh derived seed, and applies the one-sided MWW
/// test to its OOB posteriors. m values exceeding the feature count are
/// dropped from the grid. Deterministic given (ds, space).
TsAucResult ts_auc_test(const LabeledDataset& ds, const SearchSpace& space);

/// Hyperparameters used for the grid forest at (ls, m): the seed is derived
/// from (space.seed, "grid", ls, m), so any grid cell can be reproduced
/// in isolation.
Hyperparams grid_hyperparams(const SearchSpace& space, int ls, int m);

/// Hyperparameters of the retrained star model at (ls, m): same shape, seed
/// derived from (space.seed, "star", ls, m) so the final scores do not reuse
/// the search-time stream.
Hyperparams star_hyperparams(const SearchSpace& space, int ls, int m);

struct FeatureImportance {
  int feature = -1;       // column id in the dataset
  double d = 0.0;         // mean OOB error increase after permutation
  double sigma = 0.0;     // std of the increase over trees containing the feature
  double importance = 0.0;  // I = d / sigma; 0 when degenerate
  int trees = 0;          // trees whose subset contains the feature
  bool degenerate = false;  // sigma == 0 or trees < 2
};

struct ImportanceReport {
  std::vector<FeatureImportance> per_feature;  // indexed by column
  std::vector<int> ranking;                    // columns, descending importance
};

struct ModelSizePoint {
  int k = 0;
  double mean_auc = 0.0;
  double std_auc = 0.0;
};

struct ModelSizeSelection {
  std::vector<ModelSizePoint> auc_by_model_size;
  int selected_feature_count = 0;
};

/// Permutation importance per feature: for every tree whose subset contains
/// feature j, the tree's OOB misclassification error (posterior threshold
/// 0.5) is recomputed after permuting feature j's values among that tree's
/// OOB subjects; d_j and sigma_j are the mean and standard deviation of the
/// per-tree increases over exactly those trees, and I_j = d_j / sigma_j.
/// Permutations are seeded from (model.hp.seed, tree, feature).
ImportanceReport permutation_importance(const ForestModel& model,
                                        const LabeledDataset& ds);

/// Nested-model selection: for k = 1..D trains forests on the top-k features
/// of `ranking` across `runs` seeds, records mean and std of the OOB AUC,
/// and selects the smallest k whose mean is at least the maximum mean minus
/// the standard deviation at that maximum. features_per_tree is clamped to k.
ModelSizeSelection select_model_size(const LabeledDataset& ds,
                                     const Hyperparams& hp,
                                     const std::vector<int>& ranking,
                                     int runs = 20);

namespace detail {

/// Rows that are OOB for the given tree.
std::vector<int> oob_rows(const ForestModel& model, std::size_t tree_index);

/// Misclassification error (posterior > 0.5 predicts positive) of one tree
/// over `rows`. When `permutation` is given, feature `permute_feature` of
/// rows[i] is read from rows[(*permutation)[i]] instead.
double tree_oob_error(const Tree& tree, const std::vector<int>& rows,
                      const LabeledDataset& ds, int permute_feature = -1,
                      const std::vector<int>* permutation = nullptr);

}  // namespace detail

}  // namespace tsauc
