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

#include "bench/experiment_config.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "labeldp/mechanisms.h"

namespace labeldp::bench {

namespace {

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> items;
  for (absl::string_view item : absl::StrSplit(value, ',')) {
    item = absl::StripAsciiWhitespace(item);
    if (!item.empty()) items.emplace_back(item);
  }
  return items;
}

template <typename T>
absl::StatusOr<std::vector<T>> ParseIntList(const std::string& key,
                                            const std::string& value) {
  std::vector<T> out;
  for (const std::string& item : SplitList(value)) {
    T parsed;
    if (!absl::SimpleAtoi(item, &parsed)) {
      return absl::InvalidArgumentError(
          absl::StrCat(key, ": '", item, "' is not an integer"));
    }
    out.push_back(parsed);
  }
  return out;
}

absl::StatusOr<bool> ParseBool(const std::string& key,
                               const std::string& value) {
  const std::string v = absl::AsciiStrToLower(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  return absl::InvalidArgumentError(
      absl::StrCat(key, ": '", value, "' is not a boolean"));
}

}  // namespace

double EpsilonSpec::Resolve(int num_labels) const {
  return log_k ? std::log(static_cast<double>(num_labels)) : value;
}

std::string EpsilonSpec::ToString() const {
  return log_k ? "lnK" : absl::StrCat(value);
}

absl::StatusOr<EpsilonSpec> EpsilonSpec::Parse(const std::string& text) {
  const std::string lower = absl::AsciiStrToLower(text);
  if (lower == "lnk" || lower == "ln(k)") return EpsilonSpec{0.0, true};
  EpsilonSpec spec;
  if (!absl::SimpleAtod(text, &spec.value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon: '", text, "' is not a number or lnK"));
  }
  return spec;
}

int ExperimentConfig::SubsetSizeFor(int k, double epsilon) const {
  return d_override.value_or(RecommendedSubsetSize(k, epsilon));
}

absl::Status ExperimentConfig::Validate() const {
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (risk_samples < 1) {
    return absl::InvalidArgumentError("risk_samples must be >= 1");
  }
  if (gradient_sets < 1) {
    return absl::InvalidArgumentError("gradient_sets must be >= 1");
  }
  if (threads < 1) return absl::InvalidArgumentError("threads must be >= 1");
  if (!(c_gamma >= 0.0)) {
    return absl::InvalidArgumentError("c_gamma must be >= 0");
  }
  if (!inject.empty() && inject != "optimum" && inject != "zero") {
    return absl::InvalidArgumentError("inject must be 'optimum' or 'zero'");
  }
  for (int64_t n : sample_sizes) {
    if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  }
  for (int k : num_labels) {
    for (const EpsilonSpec& eps_spec : epsilons) {
      MechanismParams params{eps_spec.Resolve(k), k, std::nullopt};
      if (absl::Status s = params.Validate(); !s.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat("cell K=", k, " eps=", eps_spec.ToString(), ": ",
                         s.message()));
      }
      for (Mechanism m : mechanisms) {
        if (m != Mechanism::kDSubset) continue;
        params.subset_size = SubsetSizeFor(k, params.epsilon);
        if (absl::Status s = params.Validate(); !s.ok()) {
          return absl::InvalidArgumentError(
              absl::StrCat("cell K=", k, " eps=", eps_spec.ToString(), ": ",
                           s.message()));
        }
      }
    }
  }
  return absl::OkStatus();
}

absl::Status ApplySetting(ExperimentConfig& config, const std::string& key,
                          const std::string& value) {
  if (key == "mechanism") {
    config.mechanisms.clear();
    for (const std::string& item : SplitList(value)) {
      absl::StatusOr<Mechanism> m = ParseMechanism(item);
      if (!m.ok()) return m.status();
      config.mechanisms.push_back(*m);
    }
  } else if (key == "epsilon") {
    config.epsilons.clear();
    for (const std::string& item : SplitList(value)) {
      absl::StatusOr<EpsilonSpec> e = EpsilonSpec::Parse(item);
      if (!e.ok()) return e.status();
      config.epsilons.push_back(*e);
    }
  } else if (key == "k") {
    absl::StatusOr<std::vector<int>> ks = ParseIntList<int>(key, value);
    if (!ks.ok()) return ks.status();
    config.num_labels = *ks;
  } else if (key == "n") {
    absl::StatusOr<std::vector<int64_t>> ns = ParseIntList<int64_t>(key, value);
    if (!ns.ok()) return ns.status();
    config.sample_sizes = *ns;
  } else if (key == "trials" || key == "gradient_sets" || key == "threads") {
    int parsed;
    if (!absl::SimpleAtoi(value, &parsed)) {
      return absl::InvalidArgumentError(
          absl::StrCat(key, ": '", value, "' is not an integer"));
    }
    (key == "trials"          ? config.trials
     : key == "gradient_sets" ? config.gradient_sets
                              : config.threads) = parsed;
  } else if (key == "risk_samples") {
    if (!absl::SimpleAtoi(value, &config.risk_samples)) {
      return absl::InvalidArgumentError("risk_samples: not an integer");
    }
  } else if (key == "seed") {
    if (!absl::SimpleAtoi(value, &config.seed)) {
      return absl::InvalidArgumentError(
          absl::StrCat("seed: '", value, "' is not an unsigned integer"));
    }
  } else if (key == "c_gamma") {
    if (!absl::SimpleAtod(value, &config.c_gamma)) {
      return absl::InvalidArgumentError("c_gamma: not a number");
    }
  } else if (key == "out") {
    config.out = value;
  } else if (key == "d_override") {
    if (value.empty()) {
      config.d_override.reset();
    } else {
      int d;
      if (!absl::SimpleAtoi(value, &d)) {
        return absl::InvalidArgumentError("d_override: not an integer");
      }
      config.d_override = d;
    }
  } else if (key == "gradient_family") {
    if (value == "random") {
      config.gradient_family = GradientFamily::kRandom;
    } else if (value == "basis") {
      config.gradient_family = GradientFamily::kBasis;
    } else if (value == "zero") {
      config.gradient_family = GradientFamily::kZero;
    } else {
      return absl::InvalidArgumentError(
          "gradient_family must be random, basis or zero");
    }
  } else if (key == "wall_time" || key == "corrupt_likelihood") {
    absl::StatusOr<bool> b = ParseBool(key, value);
    if (!b.ok()) return b.status();
    (key == "wall_time" ? config.wall_time : config.corrupt_likelihood) = *b;
  } else if (key == "inject") {
    config.inject = value;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown config key '", key, "'"));
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentConfig> ParseConfigText(const std::string& text,
                                                 ExperimentConfig base) {
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    if (size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": expected key = value"));
    }
    const std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    const std::string value(absl::StripAsciiWhitespace(line.substr(eq + 1)));
    if (absl::Status s = ApplySetting(base, key, value); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": ", s.message()));
    }
  }
  return base;
}

absl::StatusOr<ExperimentConfig> ReadConfigFile(const std::string& path,
                                                ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str(), std::move(base));
}

}  // namespace labeldp::bench
