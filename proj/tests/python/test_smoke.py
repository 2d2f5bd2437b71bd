import json
import math
from pathlib import Path

import pytest

import mixop

DATA = Path(__file__).resolve().parents[2] / "data"


def test_dirac_identity():
    mu = mixop.DiscreteMeasure([[0.5, 1.0], [0.0, 0.0]], [0.25, 0.75])
    assert mixop.mix(mixop.meta_dirac(mu)) == mu
    assert mu.points == [[0.0, 0.0], [0.5, 1.0]]


def test_mix_mass_and_set():
    a = mixop.DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5])
    b = mixop.DiscreteMeasure([[1.0], [3.0]], [1.0, 2.0])
    nu = mixop.MetaMeasure([a, b], [0.75, 0.5])
    mixed = mixop.mix(nu)
    assert mixed.mass == 2.25
    assert mixop.mix_mass(nu) == 2.25
    left = mixop.TestSet.half_space([1.0], 1.0)
    assert mixop.measure_of_set(mixed, left) == pytest.approx(0.75 * 1.0 + 0.5 * 1.0)


def test_distances():
    d0 = mixop.dirac([0.0])
    d1 = mixop.dirac([1.0])
    assert mixop.w1_exact(d0, d1) == 1.0
    cost, plan = mixop.w1_exact(d0, d1, with_plan=True)
    assert plan == [[1.0]]
    assert mixop.bl_distance(d0, d1) == 1.0
    assert abs(mixop.w1_sinkhorn(d0, d1, epsilon=0.01) - 1.0) < 1e-6
    with pytest.raises(mixop.MassMismatch):
        mixop.w1_exact(d0, mixop.dirac([1.0], 2.0))


def test_nested_counterexample():
    nu_k = mixop.meta_dirac(mixop.dirac([0.25]))
    nu_0 = mixop.meta_dirac(mixop.dirac([0.0]))
    assert mixop.nested_w1(nu_k, nu_0) == 0.25
    assert mixop.nested_w1(nu_k, nu_0, metric="bl") == 0.25


def test_parametric():
    assert mixop.normal_quantile(0.975) == pytest.approx(1.959963984540054, abs=1e-14)
    base = mixop.psi_normal(0.0, 1.0, 64)
    shifted = mixop.psi_normal(0.1, 1.0, 64)
    assert len(base) == 64
    assert mixop.w1_exact(shifted, base) == pytest.approx(0.1, abs=1e-12)
    lam = mixop.ThetaMeasure([(0.0, 1.0), (2.0, 0.5)], [0.5, 0.5])
    assert mixop.mix_theta(lam, 8).mass == pytest.approx(1.0)


def test_json_round_trip():
    text = (DATA / "measures" / "pair50_a.json").read_text()
    mu = mixop.DiscreteMeasure.from_json(text)
    assert mixop.DiscreteMeasure.from_json(mu.to_json()) == mu


def test_converge_counterexample():
    config = json.loads((DATA / "specs" / "counterexample.json").read_text())
    csv, summary = mixop.converge(config)
    verdicts = {s["id"]: s["verdict"] for s in summary["sets"]}
    assert verdicts == {"x_le_0": "violates_bcond", "x_le_half": "converges"}
    rows = csv.strip().splitlines()
    assert rows[0] == "k,d_meta,d_mixed,gap_x_le_0,gap_x_le_half"
    assert len(rows) == 21
    assert math.isclose(float(rows[-1].split(",")[2]), 0.05)
    assert mixop.converge(config, threads=4)[0] == csv


def test_errors():
    with pytest.raises(mixop.InvariantViolation):
        mixop.DiscreteMeasure([[0.0]], [-1.0])
    with pytest.raises(mixop.FormatError):
        mixop.DiscreteMeasure.from_json("{")
