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
#include "tsauc/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tsauc/errors.hpp"
#include "tsauc/parallel.hpp"
#include "tsauc/random.hpp"

namespace tsauc {

namespace {

constexpr std::uint64_t kPermutationTag = 0x6d6d6470ULL;  // "mmdp"

/// Pooled standardization; constant columns carry no information and are
/// zeroed instead of dividing by zero.
Eigen::MatrixXd standardize(const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd Z = X.rowwise() - X.colwise().mean();
  for (Eigen::Index c = 0; c < Z.cols(); ++c) {
    const double sd = std::sqrt(Z.col(c).squaredNorm() / static_cast<double>(n - 1));
    if (sd > 0.0)
      Z.col(c) /= sd;
    else
      Z.col(c).setZero();
  }
  return Z;
}

struct KernelData {
  Eigen::MatrixXd K;
  double bandwidth = 0.0;
};

/// Gaussian kernel on the standardized pool with the median-heuristic
/// bandwidth. Throws StatError when all points coincide.
KernelData kernel_from(const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  const Eigen::MatrixXd Z = standardize(X);
  const Eigen::VectorXd sq_norm = Z.rowwise().squaredNorm();
  const Eigen::MatrixXd sq_dist =
      (sq_norm.replicate(1, n) + sq_norm.transpose().replicate(n, 1) -
       2.0 * Z * Z.transpose())
          .cwiseMax(0.0);

  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d.push_back(std::sqrt(sq_dist(i, j)));
  const std::size_t m = d.size();
  std::nth_element(d.begin(), d.begin() + m / 2, d.end());
  double h = d[m / 2];
  if (m % 2 == 0) {
    std::nth_element(d.begin(), d.begin() + (m / 2 - 1), d.begin() + m / 2);
    h = (h + d[m / 2 - 1]) / 2.0;
  }
  if (!(h > 0.0))
    throw StatError("mmd_test: zero median pairwise distance (all points identical)");

  KernelData kd;
  kd.bandwidth = h;
  kd.K = ((-0.5 / (h * h)) * sq_dist).array().exp();
  return kd;
}

/// Unbiased MMD^2 for a 0/1 assignment of pooled rows into groups of sizes
/// (n_pos, n_neg): within-group sums exclude the diagonal; the cross term is
/// full.
double mmd2_unbiased(const Eigen::MatrixXd& K, const std::vector<char>& is_pos,
                     double n_pos, double n_neg) {
  double s_pp = 0.0, s_nn = 0.0, s_pn = 0.0;
  const Eigen::Index n = K.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double k = K(i, j);
      const bool pi = is_pos[static_cast<std::size_t>(i)];
      const bool pj = is_pos[static_cast<std::size_t>(j)];
      if (pi && pj)
        s_pp += k;
      else if (!pi && !pj)
        s_nn += k;
      else
        s_pn += k;
    }
  }
  return 2.0 * s_pp / (n_pos * (n_pos - 1.0)) +
         2.0 * s_nn / (n_neg * (n_neg - 1.0)) - 2.0 * s_pn / (n_pos * n_neg);
}

}  // namespace

namespace detail {

Eigen::MatrixXd mmd_kernel_matrix(const LabeledDataset& ds) {
  validate(ds);
  return kernel_from(ds.X).K;
}

}  // namespace detail

MmdResult mmd_test(const LabeledDataset& ds, int n_permutations,
                   std::uint64_t seed) {
  validate(ds);
  if (ds.n_pos() < 2 || ds.n_neg() < 2)
    throw StatError("mmd_test: both groups need at least 2 members");
  if (n_permutations < 99)
    throw ValidationError("mmd_test: need at least 99 permutations");

  const Eigen::Index n = ds.n_rows();
  const double n_pos = static_cast<double>(ds.n_pos());
  const double n_neg = static_cast<double>(ds.n_neg());
  const KernelData kd = kernel_from(ds.X);

  std::vector<char> observed(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i)
    observed[static_cast<std::size_t>(i)] = ds.y[i] == 1;
  const double stat = mmd2_unbiased(kd.K, observed, n_pos, n_neg);

  std::vector<char> exceed(static_cast<std::size_t>(n_permutations), 0);
  parallel_for(static_cast<std::size_t>(n_permutations), [&](std::size_t p) {
    Rng rng(derive_seed(seed, {kPermutationTag, static_cast<std::uint64_t>(p)}));
    const std::vector<int> perm = rng.permutation(static_cast<int>(n));
    std::vector<char> labels(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n_pos); ++i)
      labels[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = 1;
    exceed[p] = mmd2_unbiased(kd.K, labels, n_pos, n_neg) >= stat;
  });

  int count = 0;
  for (char e : exceed) count += e;

  MmdResult result;
  result.mmd2_u = stat;
  result.p_value = (1.0 + static_cast<double>(count)) /
                   (1.0 + static_cast<double>(n_permutations));
  result.bandwidth = kd.bandwidth;
  result.n_permutations = n_permutations;
  return result;
}

}  // namespace tsauc
