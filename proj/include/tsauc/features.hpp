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
#include <array>
#include <string>
#include <string_view>

#include "tsauc/signal_ingest.hpp"

namespace tsauc {

inline constexpr int kFeatureCount = 17;

/// Canonical feature order; also the column order of the feature-matrix CSV.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "RangeX",        "MaxX",          "MinX",  "VarianceX", "VelocityX",
    "AccelerationX", "F95X",          "RangeY", "MaxY",     "MinY",
    "VarianceY",     "VelocityY",     "AccelerationY", "F95Y", "DistC",
    "EllArea",       "AngularDeviation"};

/// The 17 posturographic features of one recording, in canonical order.
struct FeatureVector {
  std::string subject_id;
  Eigen::Matrix<double, kFeatureCount, 1> values;

  double operator[](std::string_view name) const;
};

/// Index of a feature name in kFeatureNames; throws ValidationError if absent.
int feature_index(std::string_view name);

/// Computes all 17 features. Positional features are relative to the
/// trajectory centroid; see the definitions in the implementation. Requires
/// at least 16 samples (spectral estimate); a degenerate trajectory (all
/// points identical) yields zero variances, F95 = 0 and EllArea = 0 rather
/// than an error.
FeatureVector extract_features(const Statokinesigram& s);

/// Smallest discrete frequency below which at least 95% of the series'
/// spectral energy lies. The series is de-meaned; the one-sided periodogram
/// uses a rectangular window, no zero padding, and resolution rate_hz / n;
/// the DC bin is excluded. Returns 0 for a zero-power (constant) series.
/// Requires n >= 16.
double f95(const Eigen::VectorXd& series, double rate_hz);

/// Area of the 95% coverage confidence ellipse: pi * 5.991 * sqrt(det(Cov)),
/// with the unbiased 2x2 sample covariance of (x, y).
double ellipse_area_95(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace tsauc
