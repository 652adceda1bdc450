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

// Unbiased eps-LDP randomizer for vectors in a public subspace, in the style
// of Duchi, Jordan and Wainwright's hypercube sampling.
//
// With an orthonormal basis Q (m x r) and v = Q c, ||c||_1 <= l1_bound:
//   1. Draw a vertex of the l1 ball: (j, sign(c_j)) with probability
//      |c_j| / l1_bound, otherwise a uniform coordinate with a uniform sign.
//      The vertex l1_bound * s * e_j has mean c.
//   2. Draw z uniform on {-B, +B}^r, then set z_j = +B*s with probability
//      e^eps / (e^eps + 1) and -B*s otherwise, where
//      B = l1_bound (e^eps + 1) / (e^eps - 1).
//   3. Return Q z.
//
// Conditioned on the vertex, every z has probability either
// (e^eps/(e^eps+1)) / 2^(r-1) or (1/(e^eps+1)) / 2^(r-1), so the output
// satisfies eps-LDP. E[Q z] = v and
//   E||Q z - v||^2 = r B^2 - ||c||^2 <= kDjwVarianceConstant * l1^2 r / min(1, eps^2)
// since eps^2 coth^2(eps/2) peaks at eps = 1 with value 4.683.

#ifndef LABELDP_VECTOR_RANDOMIZER_H_
#define LABELDP_VECTOR_RANDOMIZER_H_

#include "Eigen/Dense"
#include "absl/status/statusor.h"
#include "labeldp/random.h"

namespace labeldp {

inline constexpr double kDjwVarianceConstant = 5.0;
inline constexpr double kOrthonormalityTolerance = 1e-8;
inline constexpr double kSpanTolerance = 1e-6;

// C * l1_bound^2 * dim / min(1, eps^2).
double DjwSecondMomentBound(double l1_bound, int dimension, double epsilon);

// Magnitude B of every output coordinate in the basis representation.
double DjwOutputScale(double l1_bound, double epsilon);

// `basis` holds orthonormal columns. Fails when the columns are not
// orthonormal within kOrthonormalityTolerance, when v is farther than
// kSpanTolerance from their span, or when the basis coordinates of v exceed
// l1_bound in l1 norm.
absl::StatusOr<Eigen::VectorXd> DjwVectorRandomize(
    const Eigen::VectorXd& v, const Eigen::MatrixXd& basis, double l1_bound,
    double epsilon, RandomnessStream& rng);

// Orthonormal basis for the column span of `vectors`, rank decided with
// relative tolerance `tolerance`. Returns an m x 0 matrix for a zero input.
Eigen::MatrixXd OrthonormalSpanBasis(const Eigen::MatrixXd& vectors,
                                     double tolerance = 1e-10);

}  // namespace labeldp

#endif  // LABELDP_VECTOR_RANDOMIZER_H_
