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
#include "tsauc/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsauc/errors.hpp"
#include "tsauc/parallel.hpp"
#include "tsauc/random.hpp"

namespace tsauc {

namespace {

constexpr std::uint64_t kTreeStreamTag = 0x7472656500000000ULL;  // "tree"
constexpr double kMinGain = 1e-12;

struct SplitCandidate {
  double gain = -1.0;
  int feature = -1;
  double threshold = 0.0;

  bool better_than(const SplitCandidate& o) const {
    if (gain != o.gain) return gain > o.gain;
    if (feature != o.feature) return feature < o.feature;
    return threshold < o.threshold;
  }
};

/// Gini gain surrogate for a node of size n with `pos` positives, up to the
/// constant (pos^2 + neg^2)/n of the parent: larger is purer.
double purity_score(double pos, double neg) {
  const double n = pos + neg;
  return (pos * pos + neg * neg) / n;
}

class TreeBuilder {
 public:
  TreeBuilder(const LabeledDataset& ds, const Hyperparams& hp,
              const std::vector<int>& feature_subset)
      : ds_(ds), hp_(hp), subset_(feature_subset) {}

  Tree build(std::vector<int> rows) {
    Tree tree;
    tree.feature_subset = subset_;
    build_node(tree, rows.begin(), rows.end());
    return tree;
  }

 private:
  using RowIt = std::vector<int>::iterator;

  int build_node(Tree& tree, RowIt first, RowIt last) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    const auto n = static_cast<double>(last - first);
    double pos = 0.0;
    for (RowIt it = first; it != last; ++it) pos += ds_.y[*it];
    const double neg = n - pos;

    SplitCandidate best;
    if (pos > 0.0 && neg > 0.0 && n >= 2.0 * hp_.leaf_size)
      best = find_best_split(first, last, pos, neg);

    if (best.feature < 0) {
      TreeNode& leaf = tree.nodes[static_cast<std::size_t>(node_id)];
      leaf.pos_fraction = pos / n;
      leaf.n_samples = static_cast<int>(n);
      return node_id;
    }

    RowIt mid = std::partition(first, last, [&](int r) {
      return ds_.X(r, best.feature) <= best.threshold;
    });
    const int left = build_node(tree, first, mid);
    const int right = build_node(tree, mid, last);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(node_id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    return node_id;
  }

  SplitCandidate find_best_split(RowIt first, RowIt last, double pos, double neg) {
    const auto n = static_cast<std::size_t>(last - first);
    const double parent_score = purity_score(pos, neg);
    SplitCandidate best;

    scratch_.assign(first, last);
    for (int f : subset_) {
      std::sort(scratch_.begin(), scratch_.end(), [&](int a, int b) {
        return ds_.X(a, f) < ds_.X(b, f);
      });
      double pos_left = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        pos_left += ds_.y[scratch_[i]];
        const double lo = ds_.X(scratch_[i], f);
        const double hi = ds_.X(scratch_[i + 1], f);
        if (lo == hi) continue;
        const std::size_t n_left = i + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < static_cast<std::size_t>(hp_.leaf_size) ||
            n_right < static_cast<std::size_t>(hp_.leaf_size))
          continue;
        // Threshold sits on the largest left-side value and routing is
        // x <= threshold, so split behaviour depends only on the order of
        // feature values: strictly increasing transforms of a column leave
        // every routing decision unchanged.
        const double threshold = lo;
        const double neg_left = static_cast<double>(n_left) - pos_left;
        const double pos_right = pos - pos_left;
        const double neg_right = neg - neg_left;
        const double gain = purity_score(pos_left, neg_left) +
                            purity_score(pos_right, neg_right) - parent_score;
        if (gain <= kMinGain) continue;
        SplitCandidate cand{gain, f, threshold};
        if (best.feature < 0 || cand.better_than(best)) best = cand;
      }
    }
    return best;
  }

  const LabeledDataset& ds_;
  const Hyperparams& hp_;
  const std::vector<int>& subset_;
  std::vector<int> scratch_;
};

/// Canonical subject order: bootstrap draws address subjects by sorted id,
/// so shuffling dataset rows yields the same model.
std::vector<int> canonical_order(const LabeledDataset& ds) {
  std::vector<int> order(static_cast<std::size_t>(ds.n_rows()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return ds.ids[static_cast<std::size_t>(a)] < ds.ids[static_cast<std::size_t>(b)];
  });
  return order;
}

}  // namespace

ForestModel train(const LabeledDataset& ds, const Hyperparams& hp) {
  validate(ds);
  const int n = static_cast<int>(ds.n_rows());
  const int d = static_cast<int>(ds.n_features());
  if (hp.features_per_tree < 1 || hp.features_per_tree > d)
    throw ValidationError("train: features_per_tree must be in [1, D]");
  if (hp.leaf_size < 1) throw ValidationError("train: leaf_size must be >= 1");
  if (hp.n_trees < 1) throw ValidationError("train: n_trees must be >= 1");

  const std::vector<int> canon = canonical_order(ds);

  ForestModel model;
  model.hp = hp;
  model.n_features = d;
  model.n_rows = n;
  model.trees.resize(static_cast<std::size_t>(hp.n_trees));
  model.inbag_counts.assign(static_cast<std::size_t>(hp.n_trees),
                            std::vector<int>(static_cast<std::size_t>(n), 0));

  parallel_for(static_cast<std::size_t>(hp.n_trees), [&](std::size_t t) {
    Rng rng(derive_seed(hp.seed, {kTreeStreamTag, static_cast<std::uint64_t>(t)}));

    std::vector<int>& inbag = model.inbag_counts[t];
    std::vector<int> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int row = canon[rng.uniform(static_cast<std::uint64_t>(n))];
      rows.push_back(row);
      ++inbag[static_cast<std::size_t>(row)];
    }

    std::vector<int> subset =
        rng.sample_without_replacement(d, hp.features_per_tree);
    std::sort(subset.begin(), subset.end());

    TreeBuilder builder(ds, hp, subset);
    model.trees[t] = builder.build(std::move(rows));
  });

  return model;
}

double tree_posterior(const Tree& tree, const Eigen::RowVectorXd& x) {
  int node = 0;
  for (;;) {
    const TreeNode& nd = tree.nodes[static_cast<std::size_t>(node)];
    if (nd.is_leaf()) return nd.pos_fraction;
    node = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
}

double predict_posterior(const ForestModel& model, const Eigen::RowVectorXd& x) {
  if (x.size() != model.n_features)
    throw ValidationError("predict_posterior: feature count mismatch");
  if (!x.allFinite())
    throw ValidationError("predict_posterior: non-finite input");
  double sum = 0.0;
  for (const Tree& tree : model.trees) sum += tree_posterior(tree, x);
  return sum / static_cast<double>(model.trees.size());
}

OobScores oob_posteriors(const ForestModel& model, const LabeledDataset& ds) {
  if (ds.n_rows() != model.n_rows || ds.n_features() != model.n_features)
    throw ValidationError("oob_posteriors: dataset does not match model shape");
  const Eigen::Index n = ds.n_rows();
  OobScores scores;
  scores.oob_tree_count.assign(static_cast<std::size_t>(n), 0);
  scores.posterior = Eigen::VectorXd::Zero(n);

  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const std::vector<int>& inbag = model.inbag_counts[t];
    for (Eigen::Index i = 0; i < n; ++i) {
      if (inbag[static_cast<std::size_t>(i)] != 0) continue;
      scores.posterior[i] += tree_posterior(model.trees[t], ds.X.row(i));
      ++scores.oob_tree_count[static_cast<std::size_t>(i)];
    }
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = scores.oob_tree_count[static_cast<std::size_t>(i)];
    if (c == 0)
      throw StatError("subject '" + ds.ids[static_cast<std::size_t>(i)] +
                      "' was never out-of-bag; increase n_trees");
    scores.posterior[i] /= static_cast<double>(c);
  }
  return scores;
}

}  // namespace tsauc
