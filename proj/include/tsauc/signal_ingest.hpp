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
#include <filesystem>
#include <string>

namespace tsauc {

inline constexpr double kDefaultRateHz = 25.0;

/// A raw center-of-pressure recording: timestamps in seconds (strictly
/// increasing, at least 2 samples), medio-lateral x and antero-posterior y
/// in centimeters.
struct RawRecording {
  std::string subject_id;
  Eigen::VectorXd t;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

/// A uniformly sampled CoP trajectory at rate_hz.
struct Statokinesigram {
  std::string subject_id;
  double rate_hz = kDefaultRateHz;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

void validate(const RawRecording& rec);
void validate(const Statokinesigram& s);

/// Reads a trajectory CSV: optional leading `# key: value` comment lines
/// (`# subject_id: NAME` overrides the file-stem id), then a `t,x,y` header,
/// then one `t,x,y` float row per sample. Throws ParseError with the line
/// number on malformed rows and ValidationError on invariant violations
/// (non-increasing t, non-finite values).
RawRecording read_recording(const std::filesystem::path& path);

/// Resamples an irregular recording onto the uniform grid
/// t_k = t_0 + k / rate_hz covering [t_0, t_last]. Each output is the
/// average of the input samples inside (t_k - w/2, t_k + w/2), weighted by
/// the time interval each sample represents (half the gap to its
/// neighbours). Grid points with an empty window are filled by linear
/// interpolation between the nearest filled neighbours. window_s <= 0
/// selects the default window of 2 / rate_hz.
Statokinesigram resample(const RawRecording& rec, double rate_hz = kDefaultRateHz,
                         double window_s = 0.0);

}  // namespace tsauc
