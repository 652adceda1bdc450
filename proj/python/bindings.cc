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

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "bench/commands.h"
#include "bench/experiment_config.h"
#include "labeldp/estimation.h"
#include "labeldp/hard_instances.h"
#include "labeldp/mechanisms.h"
#include "labeldp/random.h"
#include "labeldp/sco.h"
#include "labeldp/vector_randomizer.h"
#include "pybind11/eigen.h"
#include "pybind11/pybind11.h"
#include "pybind11/stl.h"

namespace py = pybind11;

namespace labeldp {
namespace {

[[noreturn]] void Raise(const absl::Status& s) {
  const std::string msg(s.message());
  switch (s.code()) {
    case absl::StatusCode::kInvalidArgument:
      throw py::value_error(msg);
    case absl::StatusCode::kNotFound:
      throw py::key_error(msg);
    default:
      throw std::runtime_error(msg);
  }
}

template <typename T>
T Unwrap(absl::StatusOr<T> v) {
  if (!v.ok()) Raise(v.status());
  return *std::move(v);
}

Mechanism ToMechanism(const std::string& name) {
  return Unwrap(ParseMechanism(name));
}

MechanismParams Params(const std::string& mechanism, double epsilon, int k,
                       std::optional<int> d) {
  MechanismParams params{epsilon, k, d};
  if (absl::Status s = ValidateFor(ToMechanism(mechanism), params); !s.ok()) {
    Raise(s);
  }
  return params;
}

SanitizedSubset ToSubset(const std::string& mechanism, int k,
                         const std::vector<int>& members) {
  return Unwrap(SanitizedSubset::Create(ToMechanism(mechanism), k, members));
}

HardInstance Instance(int k, int64_t n, double epsilon, double c_gamma) {
  return Unwrap(MakeHardInstance(
      Unwrap(MakeHardTheta(k, n, epsilon, std::nullopt, c_gamma))));
}

std::tuple<int, std::string, std::string> RunCommand(
    const std::string& command, const std::string& config_text) {
  bench::ExperimentConfig config =
      Unwrap(bench::ParseConfigText(config_text));
  if (absl::Status s = config.Validate(); !s.ok()) Raise(s);
  std::ostringstream out, err;
  int code;
  if (command == "verify-privacy") {
    code = bench::RunVerifyPrivacy(config, out, err);
  } else if (command == "verify-estimators") {
    code = bench::RunVerifyEstimators(config, out, err);
  } else if (command == "sweep") {
    code = bench::RunSweep(config, out, err);
  } else if (command == "reduce-demo") {
    code = bench::RunReduceDemo(config, out, err);
  } else {
    throw py::value_error("unknown command '" + command + "'");
  }
  return {code, out.str(), err.str()};
}

}  // namespace
}  // namespace labeldp

PYBIND11_MODULE(_labeldp, m) {
  using namespace labeldp;
  m.doc() = "Label-private stochastic convex optimization core.";

  m.def(
      "randomize",
      [](const std::string& mechanism, int y, double epsilon, int k,
         std::optional<int> d, uint64_t seed, uint64_t index) {
        RandomnessStream rng(seed, {index, Purpose::kLabelRandomization});
        const SanitizedSubset s =
            Unwrap(Randomize(ToMechanism(mechanism), Label{y},
                             Params(mechanism, epsilon, k, d), rng));
        return std::vector<int>(s.members().begin(), s.members().end());
      },
      py::arg("mechanism"), py::arg("y"), py::arg("epsilon"), py::arg("k"),
      py::arg("d") = py::none(), py::arg("seed") = 0, py::arg("index") = 0);

  m.def(
      "likelihood",
      [](const std::string& mechanism, const std::vector<int>& subset, int y,
         double epsilon, int k, std::optional<int> d) {
        return Unwrap(Likelihood(ToMechanism(mechanism),
                                 ToSubset(mechanism, k, subset), Label{y},
                                 Params(mechanism, epsilon, k, d)));
      },
      py::arg("mechanism"), py::arg("subset"), py::arg("y"),
      py::arg("epsilon"), py::arg("k"), py::arg("d") = py::none());

  m.def(
      "verify_ldp_ratio",
      [](const std::string& mechanism, double epsilon, int k,
         std::optional<int> d) {
        return Unwrap(VerifyLdpRatio(ToMechanism(mechanism),
                                     Params(mechanism, epsilon, k, d)));
      },
      py::arg("mechanism"), py::arg("epsilon"), py::arg("k"),
      py::arg("d") = py::none());

  m.def("recommended_subset_size", &RecommendedSubsetSize, py::arg("k"),
        py::arg("epsilon"));

  m.def(
      "gradient_estimate",
      [](const std::string& mechanism, const std::vector<int>& subset,
         const Eigen::MatrixXd& gradients, double epsilon,
         std::optional<int> d) {
        const int k = static_cast<int>(gradients.cols());
        return Unwrap(GradientEstimate(ToSubset(mechanism, k, subset),
                                       {gradients, 1.0},
                                       Params(mechanism, epsilon, k, d)));
      },
      py::arg("mechanism"), py::arg("subset"), py::arg("gradients"),
      py::arg("epsilon"), py::arg("d") = py::none());

  m.def(
      "estimator_moments",
      [](const std::string& mechanism, int y, const Eigen::MatrixXd& gradients,
         double epsilon, std::optional<int> d, double lipschitz_bound) {
        const int k = static_cast<int>(gradients.cols());
        const MomentReport r = Unwrap(EstimatorMomentsBruteForce(
            ToMechanism(mechanism), Label{y}, {gradients, lipschitz_bound},
            Params(mechanism, epsilon, k, d)));
        py::dict out;
        out["mean"] = r.mean;
        out["second_moment"] = r.second_moment;
        out["bound"] = r.bound;
        out["mean_error"] = r.mean_error;
        out["pairwise_cov"] = r.pairwise_cov;
        return out;
      },
      py::arg("mechanism"), py::arg("y"), py::arg("gradients"),
      py::arg("epsilon"), py::arg("d") = py::none(),
      py::arg("lipschitz_bound") = 1.0);

  m.def(
      "learning_rate",
      [](double radius, double lipschitz, int64_t n, int k, double epsilon) {
        return Unwrap(LearningRate(radius, lipschitz, n, k, epsilon));
      },
      py::arg("radius"), py::arg("lipschitz"), py::arg("n"), py::arg("k"),
      py::arg("epsilon"));

  m.def(
      "hard_instance",
      [](int k, int64_t n, double epsilon, double c_gamma) {
        const HardInstance inst = Instance(k, n, epsilon, c_gamma);
        py::dict out;
        out["theta"] = inst.distribution.probabilities;
        out["gamma"] = inst.distribution.gamma;
        out["alpha"] = inst.alpha;
        out["direction"] = inst.direction;
        return out;
      },
      py::arg("k"), py::arg("n"), py::arg("epsilon"),
      py::arg("c_gamma") = kDefaultGammaScale);

  m.def(
      "closed_form_excess_risk",
      [](const Eigen::VectorXd& w, int64_t n, double epsilon, double c_gamma) {
        const int k = static_cast<int>(w.size());
        return Unwrap(
            ClosedFormExcessRisk(w, Instance(k, n, epsilon, c_gamma)));
      },
      py::arg("w"), py::arg("n"), py::arg("epsilon"),
      py::arg("c_gamma") = kDefaultGammaScale);

  m.def(
      "train_hard_instance",
      [](const std::string& mechanism, int k, double epsilon, int64_t n,
         uint64_t seed, std::optional<int> d, double c_gamma) {
        const HardInstance inst = Instance(k, n, epsilon, c_gamma);
        const Dataset data = SampleHardDataset(inst, n, seed);
        TrainConfig config;
        config.mechanism = ToMechanism(mechanism);
        config.params = Params(mechanism, epsilon, k, d);
        config.domain = {k, 1.0};
        config.seed = seed;
        py::gil_scoped_release release;
        return Unwrap(Train(data, LinearLabelLoss(k), config))
            .averaged_iterate;
      },
      py::arg("mechanism"), py::arg("k"), py::arg("epsilon"), py::arg("n"),
      py::arg("seed") = 0, py::arg("d") = py::none(),
      py::arg("c_gamma") = kDefaultGammaScale);

  m.def(
      "djw_randomize",
      [](const Eigen::VectorXd& v, const Eigen::MatrixXd& basis,
         double l1_bound, double epsilon, uint64_t seed) {
        RandomnessStream rng(seed, {0, Purpose::kVectorRandomization});
        return Unwrap(DjwVectorRandomize(v, basis, l1_bound, epsilon, rng));
      },
      py::arg("v"), py::arg("basis"), py::arg("l1_bound"), py::arg("epsilon"),
      py::arg("seed") = 0);

  m.def("run_command", &RunCommand, py::arg("command"),
        py::arg("config_text") = "",
        "Runs a bench subcommand on config text; returns (exit_code, csv, "
        "diagnostics).");
}
