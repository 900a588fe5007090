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
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/synthetic.hpp"
#include "tsauc/errors.hpp"
#include "tsauc/random.hpp"
#include "tsauc/ts_auc.hpp"

using namespace tsauc;

namespace {

SearchSpace small_space(std::uint64_t seed) {
  SearchSpace space;
  space.ls_values = {4, 6, 8};
  space.m_values = {1, 2};
  space.n_trees = 80;
  space.seed = seed;
  return space;
}

bool grids_equal(const std::vector<GridPoint>& a, const std::vector<GridPoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].ls != b[i].ls || a[i].m != b[i].m || a[i].auc != b[i].auc)
      return false;
  return true;
}

}  // namespace

TEST_SUITE("ts_auc") {

TEST_CASE("grid AUC entries satisfy the U/(N_F N_NF) identity exactly") {
  const LabeledDataset ds = synth::gaussian_dataset(41, 10, 20, 4, 0.8, 2);
  const SearchSpace space = small_space(3);
  const TsAucResult res = ts_auc_test(ds, space);
  REQUIRE(res.auc_grid.size() == 6);

  for (const GridPoint& g : res.auc_grid) {
    const ForestModel model = train(ds, grid_hyperparams(space, g.ls, g.m));
    const OobScores scores = oob_posteriors(model, ds);
    const GroupedScores grouped = split_by_label(scores.posterior, ds.y);
    CHECK(auc_from_u(u_statistic(grouped), grouped.pos.size(),
                     grouped.neg.size()) == g.auc);
  }

  // auc_star is the grid maximum.
  double best = 0.0;
  for (const GridPoint& g : res.auc_grid) best = std::max(best, g.auc);
  CHECK(res.auc_star == best);

  // The reported OOB scores come from the retrained star model, and the
  // p-value is one-sided MWW on them.
  const ForestModel star = train(ds, res.best_hp);
  const OobScores star_scores = oob_posteriors(star, ds);
  CHECK((star_scores.posterior - res.oob_scores.posterior).cwiseAbs().maxCoeff() == 0.0);
  CHECK(res.p_value ==
        mww_pvalue(split_by_label(star_scores.posterior, ds.y), Alternative::greater));
}

TEST_CASE("star seed differs from the grid seed of the same cell") {
  const SearchSpace space = small_space(17);
  CHECK(grid_hyperparams(space, 8, 2).seed != star_hyperparams(space, 8, 2).seed);
}

TEST_CASE("full grid determinism") {
  const LabeledDataset ds = synth::gaussian_dataset(42, 8, 16, 4, 1.0, 2);
  const SearchSpace space = small_space(9);
  const TsAucResult a = ts_auc_test(ds, space);
  const TsAucResult b = ts_auc_test(ds, space);
  CHECK(a.auc_star == b.auc_star);
  CHECK(a.p_value == b.p_value);
  CHECK(a.best_hp.leaf_size == b.best_hp.leaf_size);
  CHECK(a.best_hp.features_per_tree == b.best_hp.features_per_tree);
  CHECK(a.best_hp.seed == b.best_hp.seed);
  CHECK(grids_equal(a.auc_grid, b.auc_grid));
}

TEST_CASE("AUC grid is invariant under monotone transforms of a feature") {
  const LabeledDataset ds = synth::gaussian_dataset(43, 9, 15, 3, 0.7, 1);
  const SearchSpace space = small_space(21);
  const TsAucResult base = ts_auc_test(ds, space);

  LabeledDataset warped = ds;
  warped.X.col(0) = warped.X.col(0).array().exp();
  warped.X.col(2) = 5.0 * warped.X.col(2).array() - 3.0;
  const TsAucResult transformed = ts_auc_test(warped, space);
  CHECK(grids_equal(base.auc_grid, transformed.auc_grid));
  CHECK(base.auc_star == transformed.auc_star);
  CHECK(base.p_value == transformed.p_value);
}

TEST_CASE("ties in the grid prefer smaller M then larger LS") {
  // With leaf_size == n every forest degenerates to prevalence leaves, so
  // every grid point has the same AUC and the tie rule decides.
  const LabeledDataset ds = synth::gaussian_dataset(44, 6, 10, 4);
  SearchSpace space;
  space.ls_values = {16, 17};  // >= n forces single-leaf trees for both
  space.m_values = {1, 2, 3};
  space.n_trees = 60;
  space.seed = 4;
  const TsAucResult res = ts_auc_test(ds, space);
  double best = 0.0;
  for (const GridPoint& g : res.auc_grid) best = std::max(best, g.auc);
  std::vector<GridPoint> winners;
  for (const GridPoint& g : res.auc_grid)
    if (g.auc == best) winners.push_back(g);
  const int min_m =
      std::min_element(winners.begin(), winners.end(), [](auto& a, auto& b) {
        return a.m < b.m;
      })->m;
  int max_ls = 0;
  for (const GridPoint& g : winners)
    if (g.m == min_m) max_ls = std::max(max_ls, g.ls);
  CHECK(res.best_hp.features_per_tree == min_m);
  CHECK(res.best_hp.leaf_size == max_ls);
}

TEST_CASE("grid m values above D are dropped; empty grids error") {
  const LabeledDataset ds = synth::gaussian_dataset(45, 6, 10, 2, 1.0, 1);
  SearchSpace space = small_space(5);
  space.m_values = {1, 2, 7};  // 7 > D silently dropped
  const TsAucResult res = ts_auc_test(ds, space);
  CHECK(res.auc_grid.size() == 6);

  space.m_values = {5, 9};
  CHECK_THROWS_AS(ts_auc_test(ds, space), ValidationError);
  space.m_values = {};
  CHECK_THROWS_AS(ts_auc_test(ds, space), ValidationError);
}

TEST_CASE("p-value falls as the planted shift grows (family mean over seeds)") {
  double mean_null = 0.0, mean_strong = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const LabeledDataset null_ds = synth::gaussian_dataset(100 + s, 10, 25, 5);
    const LabeledDataset strong_ds =
        synth::gaussian_dataset(200 + s, 10, 25, 5, 2.0, 3);
    mean_null += ts_auc_test(null_ds, small_space(s)).p_value;
    mean_strong += ts_auc_test(strong_ds, small_space(s)).p_value;
  }
  CHECK(mean_strong / 5.0 < mean_null / 5.0);
  CHECK(mean_strong / 5.0 < 0.05);
}

TEST_CASE("identity permutation leaves the per-tree OOB error unchanged") {
  const LabeledDataset ds = synth::planted_feature_dataset(46, 60, 3);
  const ForestModel model = train(ds, Hyperparams{5, 2, 40, 8});
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const std::vector<int> rows = detail::oob_rows(model, t);
    if (rows.empty()) continue;
    std::vector<int> identity(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) identity[i] = static_cast<int>(i);
    const double baseline = detail::tree_oob_error(model.trees[t], rows, ds);
    for (int f : model.trees[t].feature_subset)
      CHECK(detail::tree_oob_error(model.trees[t], rows, ds, f, &identity) ==
            baseline);
  }
}

TEST_CASE("the planted feature dominates the importance ranking") {
  const LabeledDataset ds = synth::planted_feature_dataset(47, 80, 4);
  const ForestModel model = train(ds, Hyperparams{8, 1, 150, 12});
  const ImportanceReport report = permutation_importance(model, ds);
  CHECK(report.ranking.front() == 0);
  const FeatureImportance& planted = report.per_feature[0];
  CHECK_FALSE(planted.degenerate);
  for (int f = 1; f < 4; ++f)
    CHECK(planted.importance > report.per_feature[static_cast<std::size_t>(f)].importance);
}

TEST_CASE("importance report is complete and flags degenerate features") {
  const LabeledDataset ds = synth::gaussian_dataset(48, 8, 12, 5);
  const ForestModel model = train(ds, Hyperparams{3, 2, 2, 3});  // 2 trees only
  const ImportanceReport report = permutation_importance(model, ds);
  CHECK(report.per_feature.size() == 5);
  CHECK(report.ranking.size() == 5);
  for (const FeatureImportance& fi : report.per_feature) {
    if (fi.trees < 2) {
      CHECK(fi.degenerate);
      CHECK(fi.importance == 0.0);
    }
  }
}

TEST_CASE("select_model_size returns 1 for a single feature") {
  const LabeledDataset ds = synth::planted_feature_dataset(49, 40, 1);
  const ModelSizeSelection sel =
      select_model_size(ds, Hyperparams{4, 1, 50, 6}, {0}, 5);
  CHECK(sel.selected_feature_count == 1);
  CHECK(sel.auc_by_model_size.size() == 1);
}

TEST_CASE("duplicated informative columns select a single-feature model") {
  LabeledDataset ds = synth::planted_feature_dataset(50, 70, 1);
  LabeledDataset dup = ds;
  dup.X.resize(ds.n_rows(), 4);
  for (int c = 0; c < 4; ++c) dup.X.col(c) = ds.X.col(0);
  dup.feature_names = {"f0", "f1", "f2", "f3"};
  const ModelSizeSelection sel =
      select_model_size(dup, Hyperparams{6, 2, 60, 7}, {0, 1, 2, 3}, 10);
  CHECK(sel.selected_feature_count == 1);
}

TEST_CASE("select_model_size picks the planted feature alone") {
  // One shifted coordinate carries all the signal; the classes overlap, so
  // extra noise features dilute the per-tree subsets instead of adding
  // ensemble diversity.
  const LabeledDataset ds = synth::gaussian_dataset(51, 45, 45, 5, 1.5, 1);
  const Hyperparams hp{8, 2, 100, 9};
  const ForestModel model = train(ds, hp);
  const ImportanceReport imp = permutation_importance(model, ds);
  REQUIRE(imp.ranking.front() == 0);
  const ModelSizeSelection sel = select_model_size(ds, hp, imp.ranking, 10);
  CHECK(sel.selected_feature_count == 1);
  CHECK(sel.auc_by_model_size.size() == 5);
  for (std::size_t k = 0; k < sel.auc_by_model_size.size(); ++k) {
    CHECK(sel.auc_by_model_size[k].k == static_cast<int>(k) + 1);
    CHECK(sel.auc_by_model_size[k].mean_auc >= 0.0);
    CHECK(sel.auc_by_model_size[k].mean_auc <= 1.0);
  }
}

TEST_CASE("select_model_size validates the ranking") {
  const LabeledDataset ds = synth::gaussian_dataset(52, 6, 8, 3);
  CHECK_THROWS_AS(select_model_size(ds, Hyperparams{2, 1, 10, 0}, {0, 1}, 5),
                  ValidationError);
  CHECK_THROWS_AS(select_model_size(ds, Hyperparams{2, 1, 10, 0}, {0, 1, 1}, 5),
                  ValidationError);
  CHECK_THROWS_AS(select_model_size(ds, Hyperparams{2, 1, 10, 0}, {0, 1, 2}, 0),
                  ValidationError);
}

TEST_CASE("single-class and too-small cohorts are rejected") {
  LabeledDataset ds = synth::gaussian_dataset(53, 1, 12, 3);
  CHECK_THROWS_AS(ts_auc_test(ds, small_space(1)), StatError);
}

}  // TEST_SUITE
