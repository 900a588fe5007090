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
#include "tsauc/features.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "tsauc/errors.hpp"

namespace tsauc {

namespace {

constexpr double kChi2TwoDof95 = 5.991;  // chi^2_2 quantile at 0.95
constexpr Eigen::Index kMinSamples = 16;

double mean_abs_diff(const Eigen::ArrayXd& v) {
  const Eigen::Index n = v.size();
  return (v.tail(n - 1) - v.head(n - 1)).abs().mean();
}

double mean_abs_second_diff(const Eigen::ArrayXd& v) {
  const Eigen::Index n = v.size();
  return (v.tail(n - 2) - 2.0 * v.segment(1, n - 2) + v.head(n - 2)).abs().mean();
}

}  // namespace

double FeatureVector::operator[](std::string_view name) const {
  return values[feature_index(name)];
}

int feature_index(std::string_view name) {
  for (int i = 0; i < kFeatureCount; ++i)
    if (kFeatureNames[static_cast<std::size_t>(i)] == name) return i;
  throw ValidationError("unknown feature name: " + std::string(name));
}

double f95(const Eigen::VectorXd& series, double rate_hz) {
  const Eigen::Index n = series.size();
  if (n < kMinSamples)
    throw ValidationError("f95: series shorter than 16 samples");
  if (!(rate_hz > 0.0)) throw ValidationError("f95: rate must be positive");

  std::vector<double> centered(static_cast<std::size_t>(n));
  const double mean = series.mean();
  for (Eigen::Index i = 0; i < n; ++i)
    centered[static_cast<std::size_t>(i)] = series[i] - mean;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, centered);

  // One-sided power: interior bins carry the energy of their conjugate
  // mirror; the Nyquist bin (even n) does not.
  const Eigen::Index n_bins = n / 2;
  Eigen::ArrayXd power(n_bins);
  for (Eigen::Index j = 1; j <= n_bins; ++j) {
    const double two_sided = std::norm(spectrum[static_cast<std::size_t>(j)]);
    const bool is_nyquist = (n % 2 == 0) && (j == n_bins);
    power[j - 1] = is_nyquist ? two_sided : 2.0 * two_sided;
  }

  const double total = power.sum();
  if (total <= 0.0) return 0.0;

  double cum = 0.0;
  for (Eigen::Index j = 0; j < n_bins; ++j) {
    cum += power[j];
    if (cum >= 0.95 * total * (1.0 - 1e-12))
      return static_cast<double>(j + 1) * rate_hz / static_cast<double>(n);
  }
  return static_cast<double>(n_bins) * rate_hz / static_cast<double>(n);
}

double ellipse_area_95(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = x.size();
  if (n != y.size() || n < 2)
    throw ValidationError("ellipse_area_95: need matched series with n >= 2");
  const Eigen::ArrayXd dx = x.array() - x.mean();
  const Eigen::ArrayXd dy = y.array() - y.mean();
  const double denom = static_cast<double>(n - 1);
  const double var_x = dx.square().sum() / denom;
  const double var_y = dy.square().sum() / denom;
  const double cov = (dx * dy).sum() / denom;
  const double det = std::max(0.0, var_x * var_y - cov * cov);
  return std::numbers::pi * kChi2TwoDof95 * std::sqrt(det);
}

FeatureVector extract_features(const Statokinesigram& s) {
  validate(s);
  const Eigen::Index n = s.x.size();
  if (n < kMinSamples)
    throw ValidationError("extract_features: fewer than 16 samples for '" +
                          s.subject_id + "'");

  const double rate = s.rate_hz;
  const Eigen::ArrayXd dx = s.x.array() - s.x.mean();
  const Eigen::ArrayXd dy = s.y.array() - s.y.mean();
  const double denom = static_cast<double>(n - 1);

  const double max_x = dx.maxCoeff();
  const double min_x = dx.minCoeff();
  const double max_y = dy.maxCoeff();
  const double min_y = dy.minCoeff();
  const double var_x = dx.square().sum() / denom;
  const double var_y = dy.square().sum() / denom;

  const double vel_x = mean_abs_diff(s.x.array()) * rate;
  const double vel_y = mean_abs_diff(s.y.array()) * rate;
  const double acc_x = mean_abs_second_diff(s.x.array()) * rate * rate;
  const double acc_y = mean_abs_second_diff(s.y.array()) * rate * rate;

  const double dist_c = (dx.square() + dy.square()).sqrt().mean();

  // Mean absolute angle (degrees) between the centroid->point vector and the
  // positive antero-posterior axis. atan2(0, 0) == 0, so points sitting on
  // the centroid contribute zero.
  double angle_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    angle_sum += std::abs(std::atan2(dx[i], dy[i]));
  const double angular_dev =
      angle_sum / static_cast<double>(n) * 180.0 / std::numbers::pi;

  FeatureVector f;
  f.subject_id = s.subject_id;
  f.values[0] = max_x - min_x;              // RangeX
  f.values[1] = max_x;                      // MaxX
  f.values[2] = min_x;                      // MinX
  f.values[3] = var_x;                      // VarianceX
  f.values[4] = vel_x;                      // VelocityX
  f.values[5] = acc_x;                      // AccelerationX
  f.values[6] = f95(s.x, rate);             // F95X
  f.values[7] = max_y - min_y;              // RangeY
  f.values[8] = max_y;                      // MaxY
  f.values[9] = min_y;                      // MinY
  f.values[10] = var_y;                     // VarianceY
  f.values[11] = vel_y;                     // VelocityY
  f.values[12] = acc_y;                     // AccelerationY
  f.values[13] = f95(s.y, rate);            // F95Y
  f.values[14] = dist_c;                    // DistC
  f.values[15] = ellipse_area_95(s.x, s.y); // EllArea
  f.values[16] = angular_dev;               // AngularDeviation

  if (!f.values.allFinite())
    throw ValidationError("extract_features: non-finite feature for '" +
                          s.subject_id + "'");
  return f;
}

}  // namespace tsauc
