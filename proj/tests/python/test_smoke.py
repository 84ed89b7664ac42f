import math

import numpy as np
import pytest

ml = pytest.importorskip("_minmax_lab")


def test_separation_example():
    inst, px, py_, claims = ml.gallery.eq_not_vi()
    assert ml.verify_gda_fixed_point(inst, px, py_, 1e-9).ok
    assert ml.verify_local_minmax(inst, px, py_, 0.01, 1e-3, 0.3).ok
    joint = ml.minmax_to_joint_vi(inst, claims["beta_bar"] - 1e-6)
    z = np.concatenate([px, py_])
    cert = ml.verify_qvi(joint, z)
    assert not cert.ok
    assert abs(cert.residual + 0.8) < 1e-9


def test_projection_and_lp():
    P = ml.BoxPolytope(2)
    P.add_row(np.array([1.0, 1.0]), 1.0)
    q = ml.project_polytope(P, np.array([1.0, 1.0]))
    assert np.allclose(q, [0.5, 0.5], atol=1e-9)
    point, value = ml.lp_min(P, np.array([-1.0, -1.0]))
    assert value == pytest.approx(-1.0, abs=1e-9)
    assert np.allclose(point, [0.0, 1.0], atol=1e-7)


def test_pipeline_round_trip():
    game = ml.gallery.random_polymatrix(2, 3, 11)
    vi, trace1 = ml.polymatrix_to_linearvi(game)
    inst, trace2 = ml.linearvi_to_jc_minmax(vi, 1.0)
    assert inst.local_regime()
    sol = ml.find_gadget_solution_on_grid(inst, 200)
    assert sol is not None
    x, y = sol
    pull = ml.minmax_solution_to_linearvi(x, y, vi)
    assert pull.ok
    eq = ml.linearvi_solution_to_polymatrix(pull.point, game)
    assert eq.residual <= 0.088 + 0.02


def test_sperner_on_irrational_kakutani():
    spec, claims = ml.gallery.irrational_kakutani()
    spec.nu = 0.05
    # F == 0: a pure Kakutani search
    qvi = ml.loads_qvi(
        '{"format":1,"type":"qvi","eps":0.05,"G":0.0,"L":%r,'
        '"operator":{"D":[[0,0],[0,0]],"c":[0,0]},"correspondence":%s}'
        % (spec.lipschitz, ml.dumps(spec))
    )
    params = ml.make_params(qvi, 1.0, 0.02, 128)
    cert = ml.solve_qvi(qvi, params)
    assert cert.ok
    fp = np.array([claims["fixed_point_x"], claims["fixed_point_y"]])
    assert np.linalg.norm(cert.point - fp) <= 0.05


def test_formulas():
    a = ml.alpha_from_eps_delta(1.0, 0.0, 0.0, 0.0)
    assert a == pytest.approx(0.0)
    q = ml.qvi_alpha(3 * math.sqrt(2), 1.0, 0.05, 0.01)
    a2 = ml.alpha_from_eps_delta(3 * math.sqrt(2), 1.0, 0.05, 0.01)
    assert q == pytest.approx(a2 * a2 / 2)
    assert ml.qvi_reverse_bound(1.0, 0.1, 0.01, 1) == pytest.approx(0.5)


def test_json_round_trip():
    inst, *_ = ml.gallery.eq_not_vi()
    doc = ml.dumps(inst)
    inst2 = ml.loads_minmax(doc)
    assert ml.dumps(inst2) == doc
    x = np.array([0.25])
    y = np.array([0.5])
    assert inst2.f(x, y) == inst.f(x, y)
