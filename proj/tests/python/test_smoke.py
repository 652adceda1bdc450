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


import math

import numpy as np
import pytest

import labeldp

LN3 = math.log(3.0)


def test_bernoulli_likelihoods():
    assert labeldp.likelihood("bernoulli-subset", [1], 1, LN3, 2) == pytest.approx(3 / 8)
    assert labeldp.likelihood("bernoulli-subset", [], 1, LN3, 2) == pytest.approx(3 / 8)
    assert labeldp.likelihood("bernoulli-subset", [1, 2], 1, LN3, 2) == pytest.approx(1 / 8)


def test_d_subset_and_krr_likelihoods():
    assert labeldp.likelihood("d-subset", [1], 1, LN3, 4, d=1) == pytest.approx(1 / 2)
    assert labeldp.likelihood("d-subset", [2], 1, LN3, 4, d=1) == pytest.approx(1 / 6)
    assert labeldp.likelihood("krr", [3], 1, LN3, 4) == pytest.approx(1 / 6)


def test_randomize_is_deterministic_and_valid():
    a = labeldp.randomize("d-subset", 2, 1.0, 6, d=2, seed=4, index=9)
    b = labeldp.randomize("d-subset", 2, 1.0, 6, d=2, seed=4, index=9)
    assert a == b
    assert len(a) == 2 and a == sorted(a)


def test_ldp_ratio_is_e_to_the_epsilon():
    for mech, d in [("bernoulli-subset", None), ("d-subset", 1), ("krr", None)]:
        assert labeldp.verify_ldp_ratio(mech, 1.0, 4, d=d) == pytest.approx(math.e, rel=1e-9)


def test_gradient_estimate_worked_value():
    g = labeldp.gradient_estimate("bernoulli-subset", [1], np.eye(2), LN3)
    np.testing.assert_allclose(g, [3.0, -1.0], atol=1e-14)


def test_estimator_moments_worked_cell():
    r = labeldp.estimator_moments("bernoulli-subset", 1, np.eye(2), LN3)
    assert r["second_moment"] == pytest.approx(8.0)
    assert r["bound"] == pytest.approx(16.0)
    np.testing.assert_allclose(r["mean"], [1.0, 0.0], atol=1e-14)


def test_learning_rate():
    assert labeldp.learning_rate(1, 1, 100, 4, LN3) == pytest.approx(math.sqrt(1 / 1050))


def test_train_and_risk():
    w = labeldp.train_hard_instance("bernoulli-subset", 4, 1.0, 2000, seed=3)
    assert w.shape == (4,)
    assert np.linalg.norm(w) <= 1 + 1e-12
    inst = labeldp.hard_instance(4, 2000, 1.0)
    risk = labeldp.closed_form_excess_risk(w, 2000, 1.0)
    assert 0 <= risk <= inst["alpha"]
    assert labeldp.closed_form_excess_risk(np.zeros(4), 2000, 1.0) == pytest.approx(inst["alpha"] / 2)


def test_djw_randomize_stays_in_span():
    basis = np.eye(3)[:, :2]
    out = labeldp.djw_randomize(np.array([0.2, -0.1, 0.0]), basis, 1.0, 1.0, seed=1)
    assert out[2] == 0.0


def test_run_command():
    code, csv, _ = labeldp.run_command("verify-privacy", "k = 2, 4\nepsilon = 1")
    assert code == 0
    assert csv.splitlines()[0] == "mechanism,K,d,epsilon,max_ratio,exp_epsilon,status"
    assert len(csv.splitlines()) == 7


def test_errors_are_python_exceptions():
    with pytest.raises(ValueError):
        labeldp.verify_ldp_ratio("krr", -1.0, 4)
    with pytest.raises(ValueError):
        labeldp.likelihood("nope", [1], 1, 1.0, 2)
    with pytest.raises(ValueError):
        labeldp.run_command("sweep", "k = 1")
