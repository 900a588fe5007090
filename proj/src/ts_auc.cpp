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
#include "tsauc/ts_auc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsauc/errors.hpp"
#include "tsauc/parallel.hpp"
#include "tsauc/random.hpp"

namespace tsauc {

namespace {

constexpr std::uint64_t kGridStreamTag = 0x6772696400000000ULL;  // "grid"
constexpr std::uint64_t kStarStreamTag = 0x7374617200000000ULL;  // "star"
constexpr std::uint64_t kPermStreamTag = 0x7065726d00000000ULL;  // "perm"
constexpr std::uint64_t kSizeStreamTag = 0x73697a6500000000ULL;  // "size"

double oob_auc(const ForestModel& model, const LabeledDataset& ds) {
  const OobScores scores = oob_posteriors(model, ds);
  const GroupedScores g = split_by_label(scores.posterior, ds.y);
  return auc_from_u(u_statistic(g), g.pos.size(), g.neg.size());
}

}  // namespace

Hyperparams grid_hyperparams(const SearchSpace& space, int ls, int m) {
  Hyperparams hp;
  hp.leaf_size = ls;
  hp.features_per_tree = m;
  hp.n_trees = space.n_trees;
  hp.seed = derive_seed(space.seed, {kGridStreamTag, static_cast<std::uint64_t>(ls),
                                     static_cast<std::uint64_t>(m)});
  return hp;
}

Hyperparams star_hyperparams(const SearchSpace& space, int ls, int m) {
  Hyperparams hp;
  hp.leaf_size = ls;
  hp.features_per_tree = m;
  hp.n_trees = space.n_trees;
  hp.seed = derive_seed(space.seed, {kStarStreamTag, static_cast<std::uint64_t>(ls),
                                     static_cast<std::uint64_t>(m)});
  return hp;
}

TsAucResult ts_auc_test(const LabeledDataset& ds, const SearchSpace& space) {
  validate(ds);
  if (ds.n_pos() < 2 || ds.n_neg() < 2)
    throw StatError("ts_auc_test: both classes need at least 2 members");
  if (space.ls_values.empty() || space.m_values.empty() || space.n_trees < 1)
    throw ValidationError("ts_auc_test: empty search space");

  const int d = static_cast<int>(ds.n_features());
  std::vector<int> m_values;
  for (int m : space.m_values)
    if (m >= 1 && m <= d) m_values.push_back(m);
  if (m_values.empty())
    throw ValidationError("ts_auc_test: no m value is compatible with D=" +
                          std::to_string(d));

  std::vector<GridPoint> grid;
  grid.reserve(space.ls_values.size() * m_values.size());
  for (int ls : space.ls_values)
    for (int m : m_values) grid.push_back({ls, m, 0.0});

  parallel_for(grid.size(), [&](std::size_t i) {
    const Hyperparams hp = grid_hyperparams(space, grid[i].ls, grid[i].m);
    grid[i].auc = oob_auc(train(ds, hp), ds);
  });

  // argmax AUC; ties prefer the simpler model: smaller M, then larger LS.
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const GridPoint& a = grid[i];
    const GridPoint& b = grid[best];
    const bool better = a.auc > b.auc ||
                        (a.auc == b.auc &&
                         (a.m < b.m || (a.m == b.m && a.ls > b.ls)));
    if (better) best = i;
  }

  TsAucResult result;
  result.auc_grid = std::move(grid);
  result.auc_star = result.auc_grid[best].auc;
  result.best_hp = star_hyperparams(space, result.auc_grid[best].ls,
                                    result.auc_grid[best].m);

  const ForestModel star = train(ds, result.best_hp);
  result.oob_scores = oob_posteriors(star, ds);
  result.p_value = mww_pvalue(split_by_label(result.oob_scores.posterior, ds.y),
                              Alternative::greater);
  return result;
}

namespace detail {

std::vector<int> oob_rows(const ForestModel& model, std::size_t tree_index) {
  std::vector<int> rows;
  const std::vector<int>& inbag = model.inbag_counts[tree_index];
  for (std::size_t i = 0; i < inbag.size(); ++i)
    if (inbag[i] == 0) rows.push_back(static_cast<int>(i));
  return rows;
}

double tree_oob_error(const Tree& tree, const std::vector<int>& rows,
                      const LabeledDataset& ds, int permute_feature,
                      const std::vector<int>* permutation) {
  if (rows.empty()) return 0.0;
  Eigen::RowVectorXd x(ds.n_features());
  int wrong = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x = ds.X.row(rows[i]);
    if (permutation != nullptr && permute_feature >= 0)
      x[permute_feature] = ds.X(rows[(*permutation)[i]], permute_feature);
    const int predicted = tree_posterior(tree, x) > 0.5 ? 1 : 0;
    wrong += predicted != ds.y[rows[i]];
  }
  return static_cast<double>(wrong) / static_cast<double>(rows.size());
}

}  // namespace detail

ImportanceReport permutation_importance(const ForestModel& model,
                                        const LabeledDataset& ds) {
  validate(ds);
  if (ds.n_rows() != model.n_rows || ds.n_features() != model.n_features)
    throw ValidationError("permutation_importance: dataset does not match model");

  const int d = static_cast<int>(model.n_features);
  const std::size_t n_trees = model.trees.size();

  // increases[t] holds (feature, error increase) for tree t.
  std::vector<std::vector<std::pair<int, double>>> increases(n_trees);
  parallel_for(n_trees, [&](std::size_t t) {
    const std::vector<int> rows = detail::oob_rows(model, t);
    if (rows.empty()) return;
    const double baseline = detail::tree_oob_error(model.trees[t], rows, ds);
    for (int f : model.trees[t].feature_subset) {
      Rng rng(derive_seed(model.hp.seed,
                          {kPermStreamTag, static_cast<std::uint64_t>(t),
                           static_cast<std::uint64_t>(f)}));
      const std::vector<int> perm = rng.permutation(static_cast<int>(rows.size()));
      const double permuted =
          detail::tree_oob_error(model.trees[t], rows, ds, f, &perm);
      increases[t].emplace_back(f, permuted - baseline);
    }
  });

  std::vector<std::vector<double>> by_feature(static_cast<std::size_t>(d));
  for (const auto& tree_incs : increases)
    for (const auto& [f, inc] : tree_incs)
      by_feature[static_cast<std::size_t>(f)].push_back(inc);

  ImportanceReport report;
  report.per_feature.resize(static_cast<std::size_t>(d));
  for (int f = 0; f < d; ++f) {
    FeatureImportance& fi = report.per_feature[static_cast<std::size_t>(f)];
    fi.feature = f;
    const std::vector<double>& inc = by_feature[static_cast<std::size_t>(f)];
    fi.trees = static_cast<int>(inc.size());
    if (!inc.empty()) {
      fi.d = std::accumulate(inc.begin(), inc.end(), 0.0) /
             static_cast<double>(inc.size());
      if (inc.size() >= 2) {
        double ss = 0.0;
        for (double v : inc) ss += (v - fi.d) * (v - fi.d);
        fi.sigma = std::sqrt(ss / static_cast<double>(inc.size() - 1));
      }
    }
    fi.degenerate = fi.trees < 2 || fi.sigma == 0.0;
    fi.importance = fi.degenerate ? 0.0 : fi.d / fi.sigma;
  }

  report.ranking.resize(static_cast<std::size_t>(d));
  std::iota(report.ranking.begin(), report.ranking.end(), 0);
  std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](int a, int b) {
    return report.per_feature[static_cast<std::size_t>(a)].importance >
           report.per_feature[static_cast<std::size_t>(b)].importance;
  });
  return report;
}

ModelSizeSelection select_model_size(const LabeledDataset& ds,
                                     const Hyperparams& hp,
                                     const std::vector<int>& ranking,
                                     int runs) {
  validate(ds);
  const int d = static_cast<int>(ds.n_features());
  std::vector<int> sorted_ranking = ranking;
  std::sort(sorted_ranking.begin(), sorted_ranking.end());
  if (static_cast<int>(sorted_ranking.size()) != d)
    throw ValidationError("select_model_size: ranking must cover all features");
  for (int f = 0; f < d; ++f)
    if (sorted_ranking[static_cast<std::size_t>(f)] != f)
      throw ValidationError("select_model_size: ranking must cover all features");
  if (runs < 1) throw ValidationError("select_model_size: runs must be >= 1");

  ModelSizeSelection sel;
  sel.auc_by_model_size.resize(static_cast<std::size_t>(d));

  struct Task {
    int k;
    int run;
  };
  std::vector<Task> tasks;
  tasks.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(runs));
  for (int k = 1; k <= d; ++k)
    for (int r = 0; r < runs; ++r) tasks.push_back({k, r});

  std::vector<double> aucs(tasks.size());
  // Column subsets are built once per k to avoid repeating the copy per run.
  std::vector<LabeledDataset> subsets(static_cast<std::size_t>(d));
  for (int k = 1; k <= d; ++k) {
    const std::vector<int> cols(ranking.begin(), ranking.begin() + k);
    subsets[static_cast<std::size_t>(k - 1)] = subset_columns(ds, cols);
  }

  parallel_for(tasks.size(), [&](std::size_t i) {
    const Task& task = tasks[i];
    Hyperparams hpk = hp;
    hpk.features_per_tree = std::min(hp.features_per_tree, task.k);
    hpk.seed = derive_seed(hp.seed,
                           {kSizeStreamTag, static_cast<std::uint64_t>(task.k),
                            static_cast<std::uint64_t>(task.run)});
    const LabeledDataset& sub = subsets[static_cast<std::size_t>(task.k - 1)];
    aucs[i] = oob_auc(train(sub, hpk), sub);
  });

  for (int k = 1; k <= d; ++k) {
    double sum = 0.0;
    for (int r = 0; r < runs; ++r)
      sum += aucs[static_cast<std::size_t>((k - 1) * runs + r)];
    const double mean = sum / static_cast<double>(runs);
    double ss = 0.0;
    for (int r = 0; r < runs; ++r) {
      const double v = aucs[static_cast<std::size_t>((k - 1) * runs + r)];
      ss += (v - mean) * (v - mean);
    }
    const double sd = runs >= 2 ? std::sqrt(ss / static_cast<double>(runs - 1)) : 0.0;
    sel.auc_by_model_size[static_cast<std::size_t>(k - 1)] = {k, mean, sd};
  }

  // Smallest model within one standard deviation of the best mean.
  std::size_t best = 0;
  for (std::size_t i = 1; i < sel.auc_by_model_size.size(); ++i)
    if (sel.auc_by_model_size[i].mean_auc > sel.auc_by_model_size[best].mean_auc)
      best = i;
  const double threshold = sel.auc_by_model_size[best].mean_auc -
                           sel.auc_by_model_size[best].std_auc;
  for (const ModelSizePoint& p : sel.auc_by_model_size) {
    if (p.mean_auc >= threshold) {
      sel.selected_feature_count = p.k;
      break;
    }
  }
  return sel;
}

}  // namespace tsauc
