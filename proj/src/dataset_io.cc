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

#include "labeldp/dataset_io.h"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"

namespace labeldp {

namespace {

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Calls `row` with the comma-separated fields of every non-comment line.
template <typename RowFn>
absl::Status ForEachRow(const std::string& text, RowFn row) {
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
    if (absl::Status s = row(fields); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": ", s.message()));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Dataset> ParseDataset(const std::string& records_text,
                                     const std::string& features_text) {
  std::map<FeatureId, Feature> rows;
  absl::Status features_ok = ForEachRow(
      features_text, [&](const std::vector<absl::string_view>& fields) {
        FeatureId id;
        if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(fields[0]), &id)) {
          return absl::InvalidArgumentError("bad feature id");
        }
        Feature x(static_cast<Eigen::Index>(fields.size() - 1));
        for (size_t i = 1; i < fields.size(); ++i) {
          if (!absl::SimpleAtod(absl::StripAsciiWhitespace(fields[i]),
                                &x[i - 1])) {
            return absl::InvalidArgumentError("bad feature value");
          }
        }
        if (!rows.emplace(id, std::move(x)).second) {
          return absl::InvalidArgumentError(
              absl::StrCat("duplicate feature id ", id));
        }
        return absl::OkStatus();
      });
  if (!features_ok.ok()) return features_ok;

  Dataset data;
  for (auto& [id, x] : rows) {
    if (id != static_cast<FeatureId>(data.features.size())) {
      return absl::InvalidArgumentError(
          absl::StrCat("feature ids must be 0..F-1, missing ",
                       data.features.size()));
    }
    data.features.push_back(std::move(x));
  }

  absl::Status records_ok = ForEachRow(
      records_text, [&](const std::vector<absl::string_view>& fields) {
        if (fields.size() != 2) {
          return absl::InvalidArgumentError("expected feature_id,label");
        }
        DataPoint point;
        if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(fields[0]),
                              &point.feature_id) ||
            !absl::SimpleAtoi(absl::StripAsciiWhitespace(fields[1]),
                              &point.label.value)) {
          return absl::InvalidArgumentError("bad record");
        }
        if (point.feature_id < 0 ||
            point.feature_id >= static_cast<FeatureId>(data.features.size())) {
          return absl::InvalidArgumentError(
              absl::StrCat("unknown feature id ", point.feature_id));
        }
        if (point.label.value < 1) {
          return absl::InvalidArgumentError("labels are 1-based");
        }
        data.points.push_back(point);
        return absl::OkStatus();
      });
  if (!records_ok.ok()) return records_ok;
  return data;
}

absl::StatusOr<Dataset> ReadDataset(const std::string& records_path,
                                    const std::string& features_path) {
  absl::StatusOr<std::string> records = ReadFile(records_path);
  if (!records.ok()) return records.status();
  absl::StatusOr<std::string> features = ReadFile(features_path);
  if (!features.ok()) return features.status();
  return ParseDataset(*records, *features);
}

std::string FormatRecords(const Dataset& data) {
  std::string out;
  for (const DataPoint& point : data.points) {
    absl::StrAppend(&out, point.feature_id, ",", point.label.value, "\n");
  }
  return out;
}

std::string FormatFeatureTable(const FeatureTable& features) {
  std::string out;
  for (size_t id = 0; id < features.size(); ++id) {
    absl::StrAppend(&out, id);
    for (Eigen::Index i = 0; i < features[id].size(); ++i) {
      absl::StrAppend(&out, ",", absl::StrFormat("%.17g", features[id][i]));
    }
    absl::StrAppend(&out, "\n");
  }
  return out;
}

}  // namespace labeldp
