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
#include "tsauc/rank_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tsauc/errors.hpp"

namespace tsauc {

namespace {

constexpr Eigen::Index kExactTestMaxN = 12;  // C(12,6) = 924 assignments

double normal_sf(double z) {  // P(Z >= z) for standard normal
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double clamp_pvalue(double p) {
  return std::min(1.0, std::max(p, std::numeric_limits<double>::min()));
}

bool has_ties(std::vector<double> pooled) {
  std::sort(pooled.begin(), pooled.end());
  return std::adjacent_find(pooled.begin(), pooled.end()) != pooled.end();
}

std::vector<double> pool_scores(const GroupedScores& g) {
  std::vector<double> pooled;
  pooled.reserve(static_cast<std::size_t>(g.pos.size() + g.neg.size()));
  pooled.insert(pooled.end(), g.pos.data(), g.pos.data() + g.pos.size());
  pooled.insert(pooled.end(), g.neg.data(), g.neg.data() + g.neg.size());
  return pooled;
}

/// U for the assignment of `pos_idx` (ascending) as the positive group.
double u_of_subset(const std::vector<double>& pooled,
                   const std::vector<int>& pos_idx) {
  double u = 0.0;
  std::vector<bool> is_pos(pooled.size(), false);
  for (int i : pos_idx) is_pos[static_cast<std::size_t>(i)] = true;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    if (!is_pos[i]) continue;
    for (std::size_t j = 0; j < pooled.size(); ++j) {
      if (is_pos[j]) continue;
      if (pooled[i] > pooled[j])
        u += 1.0;
      else if (pooled[i] == pooled[j])
        u += 0.5;
    }
  }
  return u;
}

}  // namespace

void validate(const GroupedScores& g) {
  if (g.pos.size() < 1 || g.neg.size() < 1)
    throw ValidationError("grouped scores: both groups must be non-empty");
  if (!g.pos.allFinite() || !g.neg.allFinite())
    throw ValidationError("grouped scores: non-finite score");
}

double u_statistic(const GroupedScores& g) {
  validate(g);
  const Eigen::Index n_pos = g.pos.size();
  const Eigen::Index n_neg = g.neg.size();
  const Eigen::Index n = n_pos + n_neg;

  std::vector<std::pair<double, bool>> pooled;  // (score, is_pos)
  pooled.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n_pos; ++i) pooled.emplace_back(g.pos[i], true);
  for (Eigen::Index j = 0; j < n_neg; ++j) pooled.emplace_back(g.neg[j], false);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Midranks: a run of t equal values spanning 1-based positions [b+1, b+t]
  // all receive rank (2b + t + 1) / 2. Rank sums of halves stay exact in
  // double up to far larger n than we ever see.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (pooled[k].second) rank_sum_pos += midrank;
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  return rank_sum_pos - np * (np + 1.0) / 2.0;
}

double auc_from_u(double u, Eigen::Index n_pos, Eigen::Index n_neg) {
  if (n_pos < 1 || n_neg < 1)
    throw ValidationError("auc_from_u: group sizes must be >= 1");
  const double pairs = static_cast<double>(n_pos) * static_cast<double>(n_neg);
  if (u < 0.0 || u > pairs)
    throw ValidationError("auc_from_u: u outside [0, n_pos*n_neg]");
  return u / pairs;
}

double mww_pvalue(const GroupedScores& g, Alternative alt) {
  validate(g);
  const Eigen::Index n = g.pos.size() + g.neg.size();
  if (n <= kExactTestMaxN && !has_ties(pool_scores(g)))
    return mww_pvalue_exact(g, alt);
  return mww_pvalue_normal(g, alt);
}

double mww_pvalue_exact(const GroupedScores& g, Alternative alt) {
  validate(g);
  const std::vector<double> pooled = pool_scores(g);
  const int n = static_cast<int>(pooled.size());
  const int m = static_cast<int>(g.pos.size());

  const double u_obs = u_statistic(g);

  // Enumerate all C(n, m) assignments in lexicographic order.
  std::vector<int> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  long total = 0;
  long count_ge = 0;
  long count_le = 0;
  const double eps = 1e-9;
  for (;;) {
    const double u = u_of_subset(pooled, idx);
    ++total;
    if (u >= u_obs - eps) ++count_ge;
    if (u <= u_obs + eps) ++count_le;

    int k = m - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - m + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < m; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }

  const double p_ge = static_cast<double>(count_ge) / static_cast<double>(total);
  const double p_le = static_cast<double>(count_le) / static_cast<double>(total);
  const double p = alt == Alternative::greater
                       ? p_ge
                       : std::min(1.0, 2.0 * std::min(p_ge, p_le));
  return clamp_pvalue(p);
}

double mww_pvalue_normal(const GroupedScores& g, Alternative alt) {
  validate(g);
  const double n1 = static_cast<double>(g.pos.size());
  const double n2 = static_cast<double>(g.neg.size());
  const double n = n1 + n2;
  const double u = u_statistic(g);
  const double mu = n1 * n2 / 2.0;

  // Tie-corrected variance: (n1 n2 / 12) * [(n + 1) - sum(t^3 - t) / (n (n-1))]
  std::vector<double> pooled = pool_scores(g);
  std::sort(pooled.begin(), pooled.end());
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (var <= 0.0) return 1.0;  // all pooled scores identical
  const double sigma = std::sqrt(var);

  if (alt == Alternative::greater) {
    const double z = (u - mu - 0.5) / sigma;
    return clamp_pvalue(normal_sf(z));
  }
  const double z = std::max(0.0, (std::abs(u - mu) - 0.5) / sigma);
  return clamp_pvalue(2.0 * normal_sf(z));
}

CorrectionResult correct(const std::vector<double>& pvalues, double alpha,
                         CorrectionMethod method) {
  if (pvalues.empty()) throw ValidationError("correct: empty p-value list");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ValidationError("correct: alpha must be in (0, 1)");
  for (double p : pvalues)
    if (!(p >= 0.0 && p <= 1.0))
      throw ValidationError("correct: p-value outside [0, 1]");

  const std::size_t m = pvalues.size();
  CorrectionResult res;
  res.method = method;
  res.levels.resize(m);
  res.decisions.assign(m, false);

  switch (method) {
    case CorrectionMethod::bonferroni: {
      const double level = alpha / static_cast<double>(m);
      for (std::size_t i = 0; i < m; ++i) {
        res.levels[i] = level;
        res.decisions[i] = pvalues[i] < level;
      }
      break;
    }
    case CorrectionMethod::sidak: {
      const double level = 1.0 - std::pow(1.0 - alpha, 1.0 / static_cast<double>(m));
      for (std::size_t i = 0; i < m; ++i) {
        res.levels[i] = level;
        res.decisions[i] = pvalues[i] < level;
      }
      break;
    }
    case CorrectionMethod::holm: {
      std::vector<std::size_t> order(m);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pvalues[a] < pvalues[b];
      });
      bool stopped = false;
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = order[k];
        res.levels[i] = alpha / static_cast<double>(m - k);
        if (!stopped && pvalues[i] < res.levels[i])
          res.decisions[i] = true;
        else
          stopped = true;
      }
      break;
    }
  }
  return res;
}

GroupedScores split_by_label(const Eigen::VectorXd& scores,
                             const Eigen::ArrayXi& labels) {
  if (scores.size() != labels.size())
    throw ValidationError("split_by_label: size mismatch");
  const Eigen::Index n_pos = (labels == 1).count();
  const Eigen::Index n_neg = labels.size() - n_pos;
  GroupedScores g;
  g.pos.resize(n_pos);
  g.neg.resize(n_neg);
  Eigen::Index ip = 0;
  Eigen::Index in = 0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (labels[i] == 1)
      g.pos[ip++] = scores[i];
    else
      g.neg[in++] = scores[i];
  }
  return g;
}

std::string to_string(CorrectionMethod m) {
  switch (m) {
    case CorrectionMethod::bonferroni: return "bonferroni";
    case CorrectionMethod::holm: return "holm";
    case CorrectionMethod::sidak: return "sidak";
  }
  return "unknown";
}

}  // namespace tsauc
