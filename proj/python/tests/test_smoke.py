import cmath
import json
import math

import pytest

sigorient = pytest.importorskip("sigorient")


def sigma_theta(z, tau, terms=40):
    """2 pi i theta_1(nu) / theta_1'(0) from the theta series."""
    nu = z / (2j * math.pi)
    th = 0
    dth = 0
    for n in range(terms):
        h = n + 0.5
        sign = 1 if n % 2 == 0 else -1
        e = 1j * math.pi * tau * h * h
        a = (2 * n + 1) * 1j * math.pi * nu
        th += sign * (cmath.exp(e + a) - cmath.exp(e - a)) / 2j
        dth += sign * cmath.exp(e) * (2 * n + 1) * math.pi
    return 2j * math.pi * th / dth


@pytest.mark.parametrize("tau", [1j, 0.3 + 0.8j])
def test_sigma_matches_theta_series(tau):
    for z in (0.3 + 0.1j, -1.2 + 2.0j, 2.5 - 0.7j):
        ref = sigma_theta(z, tau)
        assert abs(sigorient.sigma(z, tau) - ref) < 1e-12 * abs(ref)


def test_sigma_jet_at_origin():
    jet = sigorient.sigma_jet(0, 3)
    assert abs(jet[0]) < 1e-15
    assert abs(jet[1] - 1) < 1e-14
    assert abs(jet[2]) < 1e-14  # sigma is odd


def test_phi_and_weil_pairing():
    assert sigorient.phi([2, -1, -1]) == 3
    assert abs(sigorient.weil_pairing(1, 0, 2) + 1) < 1e-12
    assert abs(sigorient.weil_pairing(0, 1, 2) - 1) < 1e-12
    w = sigorient.weil_pairing(1, 2, 5, 0.3 + 0.8j)
    assert abs(w**5 - 1) < 1e-12


def test_delta_lift_independence():
    a = sigorient.delta_a([1, -1], 1, 1, 2)
    b = sigorient.delta_a([3, -3], 1, 1, 2)
    assert a.keys() == b.keys()
    scale = max(abs(v) for v in a.values())
    assert max(abs(a[k] - b[k]) for k in a) < 1e-10 * max(1.0, scale)


def test_broken_pair_ratio():
    rep = sigorient.gluing_check([1, -1], [2, -2], 1, 0, 2)
    assert not rep["string"]
    assert rep["max_prediction_error"] < 1e-10
    assert abs(rep["lift_ratio"][1] + 1) < 1e-10


def test_run_suites_reports():
    reports = sigorient.run_suites(["coordinate"], tau=0.3 + 0.8j)
    assert reports
    assert {r["status"] for r in reports} == {"pass"}
    assert set(reports[0]) == {"suite", "case", "status", "residual", "expected", "measured", "anchor"}
    json.dumps(reports)


def test_invalid_config_raises():
    with pytest.raises(ValueError):
        sigorient.run_suites(["sigma"], tau=-1j)
    with pytest.raises(sigorient.ConfigError):
        sigorient.run_suites(["nonsense"])
