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

#include "labeldp/vector_randomizer.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "labeldp/mechanism_types.h"

namespace labeldp {

double DjwOutputScale(double l1_bound, double epsilon) {
  const double e = std::exp(epsilon);
  return l1_bound * (e + 1.0) / (e - 1.0);
}

double DjwSecondMomentBound(double l1_bound, int dimension, double epsilon) {
  return kDjwVarianceConstant * l1_bound * l1_bound * dimension /
         std::min(1.0, epsilon * epsilon);
}

absl::StatusOr<Eigen::VectorXd> DjwVectorRandomize(
    const Eigen::VectorXd& v, const Eigen::MatrixXd& basis, double l1_bound,
    double epsilon, RandomnessStream& rng) {
  if (!std::isfinite(epsilon) || epsilon < kMinEpsilon) {
    return absl::InvalidArgumentError("epsilon must be >= 1e-6");
  }
  if (!(l1_bound > 0.0)) {
    return absl::InvalidArgumentError("l1_bound must be positive");
  }
  if (basis.rows() != v.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "basis has ", basis.rows(), " rows, vector has ", v.size()));
  }
  const Eigen::Index r = basis.cols();
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  if (r > 0 &&
      (gram - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff() >
          kOrthonormalityTolerance) {
    return absl::InvalidArgumentError("basis is not orthonormal");
  }
  const Eigen::VectorXd coords = basis.transpose() * v;
  if ((basis * coords - v).norm() > kSpanTolerance) {
    return absl::InvalidArgumentError("vector is not in the span of basis");
  }
  const double l1 = coords.lpNorm<1>();
  if (l1 > l1_bound * (1.0 + 1e-12)) {
    return absl::InvalidArgumentError(
        absl::StrCat("l1 norm ", l1, " exceeds bound ", l1_bound));
  }
  if (r == 0) return Eigen::VectorXd::Zero(v.size());

  // Vertex of the l1 ball with mean `coords`.
  Eigen::Index axis = 0;
  double sign = 1.0;
  double u = rng.UniformDouble() * l1_bound;
  bool picked = false;
  for (Eigen::Index j = 0; j < r; ++j) {
    const double mass = std::abs(coords[j]);
    if (u < mass) {
      axis = j;
      sign = coords[j] < 0.0 ? -1.0 : 1.0;
      picked = true;
      break;
    }
    u -= mass;
  }
  if (!picked) {
    axis = static_cast<Eigen::Index>(rng.UniformInt(r));
    sign = rng.Bernoulli(0.5) ? 1.0 : -1.0;
  }

  const double scale = DjwOutputScale(l1_bound, epsilon);
  const double agree = std::exp(epsilon) / (std::exp(epsilon) + 1.0);
  Eigen::VectorXd z(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    z[j] = rng.Bernoulli(0.5) ? scale : -scale;
  }
  z[axis] = rng.Bernoulli(agree) ? sign * scale : -sign * scale;
  return basis * z;
}

Eigen::MatrixXd OrthonormalSpanBasis(const Eigen::MatrixXd& vectors,
                                     double tolerance) {
  if (vectors.cols() == 0 || vectors.cwiseAbs().maxCoeff() == 0.0) {
    return Eigen::MatrixXd(vectors.rows(), 0);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vectors);
  qr.setThreshold(tolerance);
  const Eigen::Index rank = qr.rank();
  Eigen::MatrixXd q = qr.householderQ();
  return q.leftCols(rank);
}

}  // namespace labeldp
