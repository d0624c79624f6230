import json
import math

import numpy as np
import pytest

import slsdesign as sd


def test_space_and_measures():
    space = sd.enumerate_binary(4)
    assert len(space) == 15
    assert space.class_sizes == [4, 6, 4, 1]
    assert space.matrix.shape == (4, 15)
    u = sd.uniform_measure(space)
    assert sd.collapse_to_classes(u) == pytest.approx([1 / 15] * 4)
    ev2 = sd.class_measure(space, [0, 1 / 6, 0, 0])
    assert ev2.support_size() == 6
    back = sd.measure_from_json(ev2.to_json())
    assert back.masses == ev2.masses


def test_information_and_optimality():
    space = sd.enumerate_binary(2)
    p = sd.uniform_measure(space)
    t = 0.4
    info = sd.information(p, t)
    assert info.inv_H[0, 0] == pytest.approx(3 * (6 - 4 * t) / (9 - 8 * t))
    report = sd.psi_values(p, info, sd.Criterion.D)
    assert report.psi == pytest.approx([2.0, 2.0, 2.0])
    ok, rep = sd.check_optimal(p, 0.7, sd.Criterion.D)
    assert ok and rep.max_gap <= 1e-9
    assert sd.moments_to_t(1.0, 2.0, 9.0) == pytest.approx(0.5)


def test_closed_forms():
    assert sd.xi_root(0.5) == pytest.approx(0.6285, abs=5e-5)
    th = sd.thresholds(4)
    assert th.t1 == pytest.approx(5 / 6)
    assert th.t0 is None
    space = sd.enumerate_binary(5)
    odd = sd.analytic_measure(sd.AnalyticKind.odd, space)
    for crit in (sd.Criterion.D, sd.Criterion.A):
        assert sd.check_optimal(odd, 0.5, crit)[0]
    inv = sd.closed_form_inverse(sd.AnalyticKind.ev2, 4, 0.0)
    expected = 3 * (np.eye(4) - np.full((4, 4), 0.25)) + np.full((4, 4), 0.25)
    assert np.allclose(inv, expected)


def test_solver():
    space = sd.enumerate_binary(4)
    r = sd.solve(space, 0.9, sd.Criterion.D)
    assert r.converged
    pi = sd.collapse_to_classes(r.measure, 1e-9)
    assert pi == pytest.approx([0.0444, 0.0778, 0.0778, 0.0444], abs=6e-5)
    ev1 = sd.analytic_measure(sd.AnalyticKind.ev1, space)
    assert sd.efficiency(ev1, r.measure, 0.9, sd.Criterion.D) == pytest.approx(0.9807, abs=5e-5)
    cfg = sd.SolverConfig()
    cfg.max_iterations = 3
    assert not sd.solve(sd.enumerate_binary(6), 0.9, sd.Criterion.A, cfg).converged


def test_combinatorics():
    h = sd.hadamard(12)
    assert np.array_equal(h @ h.T, 12 * np.eye(12, dtype=h.dtype))
    n = sd.bib_d1(3)
    assert (n.q, n.b, n.r, n.k, n.lambda_) == (6, 10, 5, 3, 2)
    space = sd.enumerate_binary(6)
    p1 = sd.measure_from_incidence(n, space)
    ev2 = sd.analytic_measure(sd.AnalyticKind.ev2, space)
    equivalent, diff = sd.verify_h_equivalence(p1, ev2, 0.4)
    assert equivalent and diff <= 1e-12
    cb, pbar = sd.example1_measure(6)
    assert cb.kind == sd.SpaceKind.ChemicalBalance
    assert np.allclose(sd.information(pbar, 0.5).H, np.eye(6))


def test_errors():
    with pytest.raises(sd.CapacityError):
        sd.enumerate_binary(21)
    with pytest.raises(sd.DomainError):
        sd.xi_root(1.0)
    with pytest.raises(sd.DegenerateDistributionError):
        sd.moments_to_t(1.0, 2.0, 2.0)
    with pytest.raises(sd.UnsupportedOrderError):
        sd.hadamard(6)
    with pytest.raises(sd.Error):
        sd.class_measure(sd.enumerate_binary(3), [1.0, 1.0, 1.0])


def test_tables_and_cli():
    csv = sd.table_csv(sd.TableId.T1)
    assert csv.splitlines()[1].startswith("xi_t,0.5774,0.5858")
    t5 = json.loads(sd.table_json(sd.TableId.T5))
    assert t5["schema_version"] == 1
    assert t5["rows"][1]["cells"][6]["text"] == "0.9952"
    status, out, _ = sd.run_cli(["verify", "--q", "5", "--t", "0.5", "--measure", "odd"])
    assert status == 0 and out.startswith("optimal (D) gap=")
    status, _, _ = sd.run_cli(["solve", "--q", "4"])
    assert status == 2
