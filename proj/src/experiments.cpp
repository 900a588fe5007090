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
#include "tsauc/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "tsauc/errors.hpp"
#include "tsauc/mmd.hpp"
#include "tsauc/parallel.hpp"
#include "tsauc/random.hpp"

namespace tsauc {

namespace {

constexpr std::uint64_t kSubsampleTag = 0x73756273ULL;   // "subs"
constexpr std::uint64_t kTsAucTag = 0x74736175ULL;       // "tsau"
constexpr std::uint64_t kMmdTag = 0x6d6d6474ULL;         // "mmdt"
constexpr int kMaxRedraws = 100;

}  // namespace

namespace detail {

std::vector<int> draw_subsample(const LabeledDataset& ds, ReductionMode mode,
                                double fraction, Rng& rng) {
  const int n = static_cast<int>(ds.n_rows());
  if (mode == ReductionMode::uniform_population) {
    const int k = std::max(4, static_cast<int>(std::lround(fraction * n)));
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      std::vector<int> rows = rng.sample_without_replacement(n, k);
      int pos = 0;
      for (int r : rows) pos += ds.y[r];
      if (pos >= 2 && k - pos >= 2) {
        std::sort(rows.begin(), rows.end());
        return rows;
      }
    }
    throw StatError("run_reduction: no feasible subsample after " +
                    std::to_string(kMaxRedraws) + " redraws at fraction " +
                    std::to_string(fraction));
  }

  // nonfaller_only: keep every faller, subsample the non-fallers.
  std::vector<int> fallers, non_fallers;
  for (int i = 0; i < n; ++i)
    (ds.y[i] == 1 ? fallers : non_fallers).push_back(i);
  const int k_nf = static_cast<int>(
      std::lround(fraction * static_cast<double>(non_fallers.size())));
  if (k_nf < 2)
    throw StatError("run_reduction: fraction " + std::to_string(fraction) +
                    " leaves fewer than 2 non-fallers");
  std::vector<int> picked = rng.sample_without_replacement(
      static_cast<int>(non_fallers.size()), k_nf);
  std::vector<int> rows = fallers;
  for (int p : picked) rows.push_back(non_fallers[static_cast<std::size_t>(p)]);
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace detail

std::string to_string(TestMethod m) {
  switch (m) {
    case TestMethod::ts_auc: return "ts_auc";
    case TestMethod::mmd: return "mmd";
    case TestMethod::mww_raw: return "mww_raw";
    case TestMethod::mww_bonferroni: return "mww_bonferroni";
    case TestMethod::mww_holm: return "mww_holm";
    case TestMethod::mww_sidak: return "mww_sidak";
  }
  return "unknown";
}

std::string to_string(ReductionMode m) {
  return m == ReductionMode::uniform_population ? "uniform_population"
                                                : "nonfaller_only";
}

ReductionCurve run_reduction(const LabeledDataset& ds, const ReductionProtocol& proto) {
  validate(ds);
  if (proto.fractions.empty())
    throw ValidationError("run_reduction: empty fraction list");
  for (std::size_t i = 0; i < proto.fractions.size(); ++i) {
    const double f = proto.fractions[i];
    if (!(f > 0.0 && f <= 1.0))
      throw ValidationError("run_reduction: fractions must lie in (0, 1]");
    if (i > 0 && !(f < proto.fractions[i - 1]))
      throw ValidationError("run_reduction: fractions must be strictly decreasing");
  }
  if (proto.repeats < 1)
    throw ValidationError("run_reduction: repeats must be >= 1");
  if (!(proto.alpha > 0.0 && proto.alpha < 1.0))
    throw ValidationError("run_reduction: alpha must be in (0, 1)");

  const std::size_t n_cells = proto.fractions.size() *
                              static_cast<std::size_t>(proto.repeats);
  // One cell = one subsample on which all six methods run.
  std::vector<std::vector<ReductionRow>> cell_rows(n_cells);

  parallel_for(n_cells, [&](std::size_t cell) {
    const std::size_t fi = cell / static_cast<std::size_t>(proto.repeats);
    const int repeat = static_cast<int>(cell % static_cast<std::size_t>(proto.repeats));
    const double fraction = proto.fractions[fi];

    const std::uint64_t cell_seed =
        derive_seed(proto.seed, {kSubsampleTag, static_cast<std::uint64_t>(fi),
                                 static_cast<std::uint64_t>(repeat)});
    Rng rng(cell_seed);
    const std::vector<int> rows = detail::draw_subsample(ds, proto.mode, fraction, rng);
    const LabeledDataset sub = subset_rows(ds, rows);

    std::vector<ReductionRow>& out = cell_rows[cell];
    out.reserve(kAllMethods.size());

    SearchSpace space = proto.search;
    space.seed = derive_seed(cell_seed, {kTsAucTag});
    const TsAucResult ts = ts_auc_test(sub, space);
    out.push_back({TestMethod::ts_auc, fraction, repeat,
                   ts.p_value < proto.alpha, ts.p_value});

    const MmdResult mmd = mmd_test(sub, proto.mmd_permutations,
                                   derive_seed(cell_seed, {kMmdTag}));
    out.push_back({TestMethod::mmd, fraction, repeat,
                   mmd.p_value < proto.alpha, mmd.p_value});

    // Univariate MWW per feature (two-sided), group-level decision: any
    // feature significant / any feature surviving the correction.
    std::vector<double> pvals;
    pvals.reserve(static_cast<std::size_t>(sub.n_features()));
    for (Eigen::Index f = 0; f < sub.n_features(); ++f) {
      const GroupedScores g = split_by_label(sub.X.col(f), sub.y);
      pvals.push_back(mww_pvalue(g, Alternative::two_sided));
    }
    const double min_p = *std::min_element(pvals.begin(), pvals.end());
    const bool any_raw =
        std::any_of(pvals.begin(), pvals.end(),
                    [&](double p) { return p < proto.alpha; });
    out.push_back({TestMethod::mww_raw, fraction, repeat, any_raw, min_p});

    const auto corrected_any = [&](CorrectionMethod cm) {
      const CorrectionResult cr = correct(pvals, proto.alpha, cm);
      return std::any_of(cr.decisions.begin(), cr.decisions.end(),
                         [](bool b) { return b; });
    };
    out.push_back({TestMethod::mww_bonferroni, fraction, repeat,
                   corrected_any(CorrectionMethod::bonferroni), min_p});
    out.push_back({TestMethod::mww_holm, fraction, repeat,
                   corrected_any(CorrectionMethod::holm), min_p});
    out.push_back({TestMethod::mww_sidak, fraction, repeat,
                   corrected_any(CorrectionMethod::sidak), min_p});
  });

  ReductionCurve curve;
  curve.rows.reserve(n_cells * kAllMethods.size());
  for (const auto& rows : cell_rows)
    curve.rows.insert(curve.rows.end(), rows.begin(), rows.end());

  for (TestMethod method : kAllMethods) {
    for (std::size_t fi = 0; fi < proto.fractions.size(); ++fi) {
      int significant = 0;
      for (const ReductionRow& row : curve.rows)
        if (row.method == method && row.fraction == proto.fractions[fi])
          significant += row.decision;
      curve.aggregated.push_back(
          {method, proto.fractions[fi],
           static_cast<double>(significant) / static_cast<double>(proto.repeats)});
    }
  }
  return curve;
}

}  // namespace tsauc
