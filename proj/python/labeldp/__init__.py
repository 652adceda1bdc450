# Copyright 2026 The labeldp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Label-private stochastic convex optimization."""

from labeldp._labeldp import (
    closed_form_excess_risk,
    djw_randomize,
    estimator_moments,
    gradient_estimate,
    hard_instance,
    learning_rate,
    likelihood,
    randomize,
    recommended_subset_size,
    run_command,
    train_hard_instance,
    verify_ldp_ratio,
)

__all__ = [
    "closed_form_excess_risk",
    "djw_randomize",
    "estimator_moments",
    "gradient_estimate",
    "hard_instance",
    "learning_rate",
    "likelihood",
    "randomize",
    "recommended_subset_size",
    "run_command",
    "train_hard_instance",
    "verify_ldp_ratio",
]
