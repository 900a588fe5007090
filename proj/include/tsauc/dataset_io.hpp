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

#include <filesystem>
#include <map>
#include <string>

#include "tsauc/dataset.hpp"

namespace tsauc {

/// Reads a feature-matrix CSV: header `subject_id,<feature...>,label`, one
/// row per subject, label in {0, 1} with 1 = faller. Throws ParseError with
/// the offending line (and the missing column name for bad headers).
LabeledDataset read_feature_matrix(const std::filesystem::path& path);

/// Writes the interchange CSV with shortest round-trip float formatting.
/// The write is atomic (temp file + rename).
void write_feature_matrix(const std::filesystem::path& path, const LabeledDataset& ds);

/// Reads a labels CSV: header `subject_id,label`, label in {0, 1}.
std::map<std::string, int> read_labels(const std::filesystem::path& path);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

}  // namespace tsauc
