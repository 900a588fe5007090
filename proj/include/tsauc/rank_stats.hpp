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

/// Scores for the two groups under comparison. `pos` holds the positive
/// class (fallers), `neg` the negative class (non-fallers). Both must be
/// non-empty and finite.
struct GroupedScores {
  Eigen::VectorXd pos;
  Eigen::VectorXd neg;
};

enum class Alternative { greater, two_sided };

enum class CorrectionMethod { bonferroni, holm, sidak };

/// Per-test adjusted significance levels and accept/reject decisions.
/// For Bonferroni and Sidak, decisions[i] <=> p[i] < levels[i]. For Holm the
/// step-down procedure additionally stops at the first non-rejection in
/// ascending p order.
struct CorrectionResult {
  CorrectionMethod method;
  std::vector<double> levels;
  std::vector<bool> decisions;
};

/// Throws ValidationError if either group is empty or any score non-finite.
void validate(const GroupedScores& g);

/// Mann-Whitney U with half credit for ties:
///   U = sum_{i in pos} sum_{j in neg} [ 1(p_i > n_j) + 1/2 * 1(p_i == n_j) ]
/// Computed via midranks in O(n log n); exactly equal to the pairwise sum.
double u_statistic(const GroupedScores& g);

/// Empirical AUC = U / (n_pos * n_neg), the fraction of correctly ordered
/// pos/neg pairs with ties counted half.
double auc_from_u(double u, Eigen::Index n_pos, Eigen::Index n_neg);

/// One- or two-sided MWW p-value. Dispatches to the exact permutation
/// enumeration when n_pos + n_neg <= 12 and the pooled scores are tie-free,
/// otherwise to the tie-corrected normal approximation with continuity
/// correction. `greater` tests whether pos is stochastically larger.
double mww_pvalue(const GroupedScores& g, Alternative alt);

/// Exact p by enumerating all C(n, n_pos) group assignments of the pooled
/// scores. Intended for small n; cost grows as the binomial coefficient.
double mww_pvalue_exact(const GroupedScores& g, Alternative alt);

/// Normal approximation with tie-corrected variance and continuity
/// correction. Returns 1 when the pooled scores are all identical.
double mww_pvalue_normal(const GroupedScores& g, Alternative alt);

/// Adjusted significance levels for m = pvalues.size() simultaneous tests:
///   bonferroni: alpha / m for every test
///   sidak:      1 - (1 - alpha)^(1/m) for every test
///   holm:       alpha / (m - k + 1) for the k-th smallest p, step-down with
///               stop at the first failure
/// Throws ValidationError on an empty p list, p outside [0,1], or alpha
/// outside (0,1).
CorrectionResult correct(const std::vector<double>& pvalues, double alpha,
                         CorrectionMethod method);

/// Splits scores into GroupedScores by binary label (1 = pos).
GroupedScores split_by_label(const Eigen::VectorXd& scores,
                             const Eigen::ArrayXi& labels);

std::string to_string(CorrectionMethod m);

}  // namespace tsauc
