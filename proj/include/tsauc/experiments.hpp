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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tsauc/dataset.hpp"
#include "tsauc/ts_auc.hpp"

namespace tsauc {

enum class ReductionMode { uniform_population, nonfaller_only };

/// Methods compared by the reduction studies.
enum class TestMethod {
  ts_auc,
  mmd,
  mww_raw,          // any feature with uncorrected p < alpha
  mww_bonferroni,   // any feature surviving Bonferroni
  mww_holm,
  mww_sidak,
};

inline constexpr std::array<TestMethod, 6> kAllMethods = {
    TestMethod::ts_auc,       TestMethod::mmd,      TestMethod::mww_raw,
    TestMethod::mww_bonferroni, TestMethod::mww_holm, TestMethod::mww_sidak};

std::string to_string(TestMethod m);
std::string to_string(ReductionMode m);

/// Population-reduction protocol: retain the listed fractions (strictly
/// decreasing, default 0.95 down to 0.35 by 0.10), `repeats` random
/// subsamples per fraction. uniform_population subsamples the whole cohort
/// (redrawing when a class drops below 2 members); nonfaller_only removes
/// only non-fallers and keeps every faller.
struct ReductionProtocol {
  ReductionMode mode = ReductionMode::uniform_population;
  std::vector<double> fractions = {0.95, 0.85, 0.75, 0.65, 0.55, 0.45, 0.35};
  int repeats = 12;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  SearchSpace search;        // forest grid for the inner ts-AUC runs
  int mmd_permutations = 1000;
};

struct ReductionRow {
  TestMethod method;
  double fraction = 0.0;
  int repeat = 0;
  bool decision = false;
  double p_value = 1.0;  // min feature p for the univariate methods
};

struct CurvePoint {
  TestMethod method;
  double fraction = 0.0;
  double fraction_significant = 0.0;
};

struct ReductionCurve {
  std::vector<ReductionRow> rows;      // one per (method, fraction, repeat)
  std::vector<CurvePoint> aggregated;  // one per (method, fraction)
};

/// Runs every method at every (fraction, repeat) and aggregates the share of
/// significant outcomes. Deterministic given (ds, proto). Throws StatError
/// when a feasible subsample cannot be drawn in 100 attempts.
ReductionCurve run_reduction(const LabeledDataset& ds, const ReductionProtocol& proto);

class Rng;

namespace detail {

/// One subsample draw (sorted row indices). uniform_population redraws until
/// both classes keep >= 2 members; nonfaller_only keeps every faller.
std::vector<int> draw_subsample(const LabeledDataset& ds, ReductionMode mode,
                                double fraction, Rng& rng);

}  // namespace detail

}  // namespace tsauc
