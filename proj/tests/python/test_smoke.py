# Copyright 2026 The kossprobe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import os
import subprocess

import numpy as np
import pytest

import kossprobe as kp


def test_coefficients_at_zero_and_two():
    c = kp.coefficients(0.0)
    assert c["t0"] == 1 and c["r1"] == 0
    c = kp.coefficients(2.0)
    assert abs(c["t0"] - (0.1 + 0.3j)) < 1e-15
    assert abs(c["r0"] - (-0.9 + 0.3j)) < 1e-15


def test_forward_counterexample():
    rates = kp.forward(np.diag([1.0, 1.0, -1.0]), 2.0)
    np.testing.assert_allclose(rates, [-0.4, 0.6, 1.4, 2.0, 3.0, -1.0], atol=1e-12)
    assert list(kp.CHANNEL_LABELS) == ["P0T", "P1T", "P2T", "P0R", "P1R", "P2R"]


def test_matrix_and_round_trip():
    m = kp.build_matrix(2.0)
    assert m["m"].shape == (6, 6)
    assert m["det"] == pytest.approx(-15.356492462019856, rel=1e-12)
    rng = np.random.default_rng(0)
    a = rng.uniform(-1, 1, (3, 3))
    c = (a + a.T) / 2
    np.testing.assert_allclose(kp.invert_exact(kp.forward(c, 2.0), 2.0), c, atol=1e-12)
    app = kp.build_matrix(2.0, source="appendix")
    assert app["det"] == pytest.approx(10.7952)


def test_refusal_and_input_errors():
    with pytest.raises(kp.NumericalRefusal):
        kp.invert_exact(np.ones(6), 0.0)
    with pytest.raises(ValueError):
        kp.forward(np.array([[1.0, 2.0, 0], [0, 1, 0], [0, 0, 1]]), 2.0)
    with pytest.raises(kp.NotCompletelyPositive):
        kp.kraus_noise(np.diag([1.0, 1.0, -1.0]))


def test_cp_check_and_projection():
    r = kp.cp_check(np.diag([1.0, 1.0, -1.0]))
    assert r["psd"] is False
    assert r["eigenvalues"] == pytest.approx([1, 1, -1])
    np.testing.assert_allclose(kp.psd_project(np.diag([1.0, 1.0, -1.0])), np.diag([1.0, 1.0, 0.0]))


def test_d_tilde_matches_brute_force():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    h = a + a.conj().T
    np.testing.assert_allclose(kp.d_tilde(h), kp.d_tilde_bruteforce(h), atol=1e-12)


def test_simulation_is_deterministic_and_estimates():
    a = kp.simulate(np.eye(3), 2.0, 100000, 0.01, 1.0, seed=7)
    b = kp.simulate(np.eye(3), 2.0, 100000, 0.01, 1.0, seed=7)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert kp.run_csv(a).startswith("label,N,k,p_hat,sigma\n")
    est = kp.estimate([a, b], bootstrap_samples=100)
    assert est["verdict"] in ("CP", "indeterminate")
    assert abs(est["c_hat"]["c11"] - 1.0) < 0.2


def test_noisy_inversion_and_demo():
    m = kp.build_matrix(2.0)["m"]
    rates = m @ np.array([1, 0, 0, 1, 0, -1.0])
    r = kp.invert_noisy(rates, np.zeros(6), 2.0, bootstrap_samples=10)
    assert r["verdict"] == "not-CP"
    demo = kp.negative_rate_demo(2.0)
    assert demo["transmitted_rate"] == pytest.approx(-0.4, abs=1e-12)
    assert demo["verdict"] == "not completely positive"


def test_adjudication_passes():
    rep = kp.adjudicate(trials=10)
    assert rep["passed"] is True
    assert rep["reflection_convention"]["selected"].startswith("r = t - 1")


@pytest.mark.skipif("KOSSPROBE_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_demo_negative():
    out = subprocess.run(
        [os.environ["KOSSPROBE_CLI"], "demo-negative", "--g", "2"],
        check=True,
        capture_output=True,
        text=True,
    )
    payload = json.loads(out.stdout)
    assert payload["transmitted_rate"] == pytest.approx(-0.4, abs=1e-12)
