import math
import os
import pathlib

import numpy as np
import pytest

import corpca

CONFIGS = pathlib.Path(os.environ.get("CORPCA_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2])) / "configs"


def test_sym_eig_descending():
    vals, vecs = corpca.sym_eig(np.diag([2.0, 5.0, 1.0]))
    assert list(vals) == pytest.approx([5.0, 2.0, 1.0])
    assert np.allclose(vecs.T @ vecs, np.eye(3))


def test_subspace_error():
    e1 = np.array([[1.0], [0.0]])
    e2 = np.array([[0.0], [1.0]])
    d = np.array([[1.0], [1.0]]) / math.sqrt(2.0)
    assert corpca.subspace_error(e1, e1) == 0.0
    assert corpca.subspace_error(e1, e2) == pytest.approx(1.0)
    assert corpca.subspace_error(d, e1) == pytest.approx(1 / math.sqrt(2.0))


def test_non_orthonormal_basis_raises():
    with pytest.raises(corpca.BasisError):
        corpca.subspace_error(np.ones((3, 1)), np.eye(3, 1))


def test_partition():
    sizes, stats = corpca.g_partition([100, 100, 100, 0.1, 0.1], 3.0)
    assert sizes == [3, 2]
    assert stats["vartheta"] == 2
    assert stats["chi"] == pytest.approx(0.001)
    with pytest.raises(corpca.OrderError):
        corpca.g_partition([1.0, 2.0], 2.0)


def test_estimators_on_noiseless_data():
    rng = np.random.default_rng(0)
    p, _ = np.linalg.qr(rng.standard_normal((30, 3)))
    coeffs = rng.uniform(-1, 1, (3, 120)) * np.sqrt(3 * np.array([[9.0], [4.0], [1.0]]))
    y = p @ coeffs
    assert corpca.subspace_error(corpca.simple_evd(y[:, :40], 0.05), p) < 1e-8
    p_hat, sizes = corpca.cluster_evd(y, 40, 3.0, 0.05)
    assert sum(sizes) == 3
    assert corpca.subspace_error(p_hat, p) < 1e-8
    with pytest.raises(corpca.EmptySubspaceError):
        corpca.simple_evd(y, 1e6)


def test_bounds():
    b = corpca.BoundInputs()
    b.n, b.r, b.f, b.q, b.eta, b.zeta = 500, 5, 1000, 0.01, 3, 0.002
    assert corpca.alpha0_simple(b) == pytest.approx(4.9219696139503747e19, rel=1e-13)
    b.zeta = 0.01
    with pytest.raises(corpca.ParameterError):
        corpca.alpha0_simple(b)


def test_schedule():
    sched = corpca.support_schedule(500, 4, 5, 2, 1)
    assert sched[1] == [3, 4, 5, 6, 7]
    with pytest.raises(corpca.CapacityError):
        corpca.support_schedule(20, 300, 5, 2, 1)


def test_run_experiment_deterministic():
    cfg = CONFIGS / "noiseless.cfg"
    records, summary = corpca.run_experiment(cfg, trials=2, seed=5)
    again, _ = corpca.run_experiment(cfg, trials=2, seed=5)
    assert [r["se"] for r in records] == [r["se"] for r in again]
    assert len(records) == 4
    assert all(r["se"] <= 1e-8 for r in records)
    assert summary["evd"]["successes"] == 2
