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

#include <json.hpp>

#include <filesystem>
#include <string>

namespace tsauc {

/// Reports preserve key insertion order so identical runs serialize
/// byte-identically.
using Json = nlohmann::ordered_json;

/// FNV-1a 64-bit content hash, 16 hex digits. Used to stamp input files into
/// reports so a report can be traced back to its exact input.
std::string fnv1a64_hex(const std::string& bytes);
std::string hash_file(const std::filesystem::path& path);

/// Current UTC time, ISO-8601. The only non-reproducible report field.
std::string iso8601_utc_now();

/// Writes via a temp file in the same directory plus rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace tsauc
