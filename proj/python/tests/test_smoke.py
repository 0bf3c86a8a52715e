import math

import numpy as np
import pytest
import scipy.sparse as sp

import swe_carleman as sc


def test_equilibrium_and_initial_field():
    assert sc.equilibrium(1.0, 0.1, 2.0 / 3.0) == pytest.approx([0.656667, 0.221667, 0.121667], abs=1e-6)
    f = sc.initial_field([0.5], [0.2])
    assert f.shape == (1, 3)
    assert f[0] == pytest.approx([1 / 3, 0.133333, 0.033333], abs=1e-6)
    h, u = sc.macro_state(f)
    assert h[0] == pytest.approx(0.5)
    assert u[0] == pytest.approx(0.2)
    assert sum(sc.WEIGHTS) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        sc.equilibrium(0.0, 0.0)


def test_carleman_matrices_are_scipy_sparse():
    C = sc.build_carleman(3)
    assert sp.issparse(C["total"])
    assert C["total"].shape == (819, 819)
    assert sc.carleman_dimension(3) == 819
    f = sc.initial_field([1.01, 1.0, 1.0], [0.0, 0.0, 0.0])
    V = sc.embed_state(f)
    assert V.shape == (819,)
    assert np.array_equal(sc.extract_state(V, 3), f)
    E, b = sc.assemble(C["total"], V, 0.1, 4)
    assert E.shape == (4095, 4095)
    assert np.array_equal(b[:819], V)


def test_simulate_conserves_total_depth():
    f = sc.initial_field([1.01, 1.01, 1.0, 1.0], [0.0] * 4)
    out = sc.simulate(f, timesteps=4)
    assert out["h"].shape == (5, 4)
    assert out["residual"] <= 1e-10
    assert np.allclose(out["h"].sum(axis=1), out["h"][0].sum(), atol=1e-12)
    ref = sc.reference_run(f, timesteps=4)
    assert np.abs(ref["h"] - out["h"]).max() < 1e-6


def test_condition_number_and_inverse_poly():
    D = sp.diags([2.0, 1.0, 0.5]).tocsr()
    assert sc.condition_number(D)["kappa"] == pytest.approx(4.0)
    assert sc.condition_number(D, "power_iter")["kappa"] == pytest.approx(4.0, rel=1e-5)
    p = sc.inverse_poly(2.0, 0.1)
    assert p["degree"] == 5
    xs = np.linspace(0.5, 1.0, 2001)
    err = max(abs(sc.chebyshev_eval(p["coefficients"], x) - 1 / (4 * x)) for x in xs)
    assert err <= 0.1


def test_bench_summaries():
    deg = sc.bench_qsvt_degree(kappas=(4, 8))
    assert [r["degree"] for r in deg["rows"]] == [29, 59]
    snd = sc.bench_sound_speed(h0=(0.05,), simulator="reference")
    assert snd["rows"][0]["v_analytic"] == pytest.approx(math.sqrt(9.81 * 0.05))
    stable = sc.bench_stable(h0=(0.01, 0.02), jobs=2)
    assert len(stable["rows"]) == 2
