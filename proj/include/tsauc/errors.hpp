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

#include <stdexcept>
#include <string>

namespace tsauc {

/// Missing files, unreadable directories, failed writes. CLI exit code 1.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input content (bad CSV rows, missing columns). CLI exit code 2.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally valid input that violates a documented invariant
/// (non-increasing timestamps, non-finite values, short recordings).
/// CLI exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Data on which the requested statistic is undefined (single-class
/// cohorts, degenerate point clouds, infeasible subsamples). CLI exit code 3.
struct StatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tsauc
