import math

import pytest

import escom


def test_vehicle_params_roundtrip():
    p = escom.VehicleParams()
    assert p.mass == pytest.approx(2.405)
    assert p.arm_length_r == pytest.approx(0.109)
    p.validate()
    p.mass = -1.0
    with pytest.raises(Exception):
        p.validate()


def test_net_force_collective():
    cmd = escom.ActuatorCommand()
    cmd.thrusts = [3.0, 3.0, 3.0, 3.0]
    f = escom.net_force(cmd)
    assert f[0] == pytest.approx(0.0)
    assert f[1] == pytest.approx(0.0)
    assert f[2] == pytest.approx(-12.0)
    vecs = escom.thruster_force_vectors(cmd)
    assert len(vecs) == 4


def test_torque_mapping_reduces_to_quad_mixer():
    p = escom.VehicleParams()
    m = escom.torque_mapping_matrix([0.0, 0.0, 0.0], [0.0, 0.0], p)
    assert m.shape == (3, 4)
    assert m[0, 1] == pytest.approx(0.109)
    assert m[1, 0] == pytest.approx(0.109)
    assert m[2, 0] == pytest.approx(-0.01)


def test_allocation_hover_split():
    p = escom.VehicleParams()
    w = escom.Wrench()
    f = p.mass * p.gravity_g / 4.0
    w.force = [0.0, 0.0, -4.0 * f]
    r = escom.allocate(w, [0.0, 0.0, 0.0], [0.0, 0.0], p)
    assert r["ok"]
    assert not r["thrust_saturated"]
    for thrust in r["thrusts"]:
        assert thrust == pytest.approx(f)


def test_dither_layout():
    cfg = escom.DitherConfig()
    d = escom.dither(math.pi / (2.0 * cfg.w1), cfg)
    assert d[0] == pytest.approx(cfg.a1)
    assert d[0] == d[1]


def test_validate_stability():
    good = escom.validate_stability(1.5, 0.5, 0.5, escom.DitherConfig())
    assert good["ok"]
    assert all(e < 0.0 for e in good["b_eig_real_slow"])
    bad = escom.validate_stability(1.5, -0.5, 0.5, escom.DitherConfig())
    assert not bad["ok"]
    assert bad["violations"]


def test_composite_com_reference_point():
    p = escom.default_config_params()
    comp = escom.composite_com(p, 0.2, [0.184, 0.0, -0.121])
    assert comp["mass"] == pytest.approx(2.605)
    assert comp["com"][0] == pytest.approx(0.0175, abs=1e-9)
    assert comp["com"][1] == pytest.approx(0.0085, abs=1e-9)
    assert comp["com"][2] == pytest.approx(-0.0430, abs=1e-9)


def test_run_scenario_short_hover(tmp_path):
    out = tmp_path / "run"
    summary = escom.run_scenario({"duration": "3"}, str(out))
    assert summary["termination"] == "completed"
    assert summary["end_time"] == pytest.approx(3.0, abs=0.01)
    assert (out / "run.csv").exists()
    assert (out / "summary.txt").exists()
    header = (out / "run.csv").read_text().splitlines()[0]
    assert header.startswith("t_s,")


def test_run_scenario_rejects_unknown_key():
    with pytest.raises(Exception):
        escom.run_scenario({"bogus.key": "1"})
