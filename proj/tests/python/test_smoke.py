import json
import math
import os
import subprocess

import numpy as np
import pytest

import netduopoly as nd


def firm(gamma=1.0, lam=0.1, budget=5.0, cap=5.0):
    return nd.FirmParams(gamma=gamma, lambda_=lam, budget=budget, cap=cap)


def single(f1=None, f2=None):
    return nd.GameSpec([1.0], [0.5], f1 or firm(), f2 or firm())


def test_aip_chain():
    lap = nd.build_laplacian(2, [(1, 2, 1.0)])
    rho = nd.compute_aip(lap, 10.0)
    assert rho[0] == pytest.approx(math.exp(-10.0), rel=1e-10)
    assert rho.sum() == pytest.approx(2.0, rel=1e-12)


def test_matrix_exponential():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    e = nd.matrix_exponential(m)
    assert np.allclose(e, [[1.0, 1.0], [0.0, 1.0]], atol=1e-15)


def test_best_response_slack():
    br = nd.best_response(1, single(), np.zeros(1))
    assert br.action[0] == pytest.approx(math.sqrt(5.0) - 1.0, rel=1e-12)
    assert br.mu0 == 0.0


def test_equilibrium():
    ne = nd.solve_ne(single())
    assert ne.converged
    assert ne.profile.a1[0] == pytest.approx(2.0, rel=1e-10)
    asym = nd.solve_ne(single(f2=firm(lam=0.2)))
    assert asym.profile.a1[0] == pytest.approx(155.0 / 90.0, rel=1e-9)
    assert asym.profile.a2[0] == pytest.approx(55.0 / 90.0, rel=1e-9)
    check = nd.verify_ne(single(), ne.profile, 1e-9)
    assert check["is_ne"]


def test_closed_form():
    cf = nd.closed_form_interior_ne(single(), (0.0, 0.0))
    assert cf is not None
    assert cf.a2[0] == pytest.approx(2.0, rel=1e-14)


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        nd.GameSpec([1.0], [1.5], firm(), firm())
    with pytest.raises(ValueError):
        nd.build_laplacian(2, [(1, 3, 1.0)])


def test_gain_of_targeting():
    rows = nd.leader_sweep(100, [1.0, 10.0], [0.1], firm(budget=10.0, cap=10.0))
    assert abs(rows[0]["got"]) <= 1e-9
    assert rows[1]["got"] > 0.0


def test_simulate():
    lap = nd.build_laplacian(2, [(1, 2, 1.0), (2, 1, 1.0)])
    times, states = nd.simulate_opinions(lap, np.array([0.2, 0.8]), 1.0)
    assert states.shape == (len(times), 2)
    spread = 0.3 * math.exp(-2.0)
    assert states[-1, 0] == pytest.approx(0.5 - spread, rel=1e-9)


@pytest.mark.skipif("NETDUOPOLY_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_ne(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({
        "rho": [1], "x0": [0.5],
        "firm1": {"gamma": 1, "lambda": 0.1, "B": 5, "b": 5},
        "firm2": {"gamma": 1, "lambda": 0.1, "B": 5, "b": 5},
    }))
    out = subprocess.run([os.environ["NETDUOPOLY_CLI"], "ne", "--spec", str(spec)],
                         check=True, capture_output=True, text=True).stdout
    doc = json.loads(out)
    assert doc["converged"]
    assert doc["profile"]["a1"][0] == pytest.approx(2.0, rel=1e-10)
