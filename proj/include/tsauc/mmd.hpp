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

#include "tsauc/dataset.hpp"

namespace tsauc {

struct MmdResult {
  double mmd2_u = 0.0;      // unbiased squared MMD; may be negative
  double p_value = 1.0;     // (1 + #{permuted >= observed}) / (1 + B)
  double bandwidth = 0.0;   // median pairwise distance of the standardized pool
  int n_permutations = 0;
};

/// Unbiased squared MMD two-sample test with Gaussian kernel and permutation
/// null. Features are standardized to zero mean / unit variance over the
/// pooled sample (constant columns are zeroed); the kernel bandwidth is the
/// median pairwise Euclidean distance of the standardized pool. The null
/// distribution is obtained by relabeling the pooled rows n_permutations
/// times; the one-sided p-value uses add-one smoothing. Throws StatError
/// when all points coincide (zero median distance). Deterministic per seed.
MmdResult mmd_test(const LabeledDataset& ds, int n_permutations,
                   std::uint64_t seed);

namespace detail {

/// Gaussian kernel matrix exp(-||a-b||^2 / (2 h^2)) of the standardized pool;
/// exposed for spectral checks in tests.
Eigen::MatrixXd mmd_kernel_matrix(const LabeledDataset& ds);

}  // namespace detail

}  // namespace tsauc
