// Copyright 2026 The labeldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Line-oriented dataset files.
//
// Records file: one "feature_id,label" pair per line, labels 1-based.
// Feature table: one "feature_id,v_1,...,v_m" row per line; ids must cover
// 0..F-1 exactly once, in any order. Blank lines and lines starting with '#'
// are ignored in both files.

#ifndef LABELDP_DATASET_IO_H_
#define LABELDP_DATASET_IO_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "labeldp/sco.h"

namespace labeldp {

absl::StatusOr<Dataset> ParseDataset(const std::string& records_text,
                                     const std::string& features_text);
absl::StatusOr<Dataset> ReadDataset(const std::string& records_path,
                                    const std::string& features_path);

std::string FormatRecords(const Dataset& data);
std::string FormatFeatureTable(const FeatureTable& features);

}  // namespace labeldp

#endif  // LABELDP_DATASET_IO_H_
