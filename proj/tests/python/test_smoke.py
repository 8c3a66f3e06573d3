import math

import pytest

import shapeinv


def test_model_basics():
    m = shapeinv.Model("cs", 3, 1.0)
    assert m.n == 3
    assert m.remainder() == pytest.approx(24.0)
    w = m.prepotential([0.3, 1.1, 2.0])
    assert abs(sum(w)) < 1e-12


def test_bad_config_raises():
    with pytest.raises(ValueError):
        shapeinv.Model("calogero", 1, 1.0)
    with pytest.raises(ValueError):
        shapeinv.Model("nonsense", 2, 1.0)


def test_verify_suite():
    reports = shapeinv.verify(shapeinv.Model("calogero", 3, 2.0), trials=50, seed=1)
    assert len(reports) == 6
    assert all(r["pass"] for r in reports)


def test_rosen_morse_spectrum():
    e = shapeinv.algebraic_spectrum("rosen-morse", [2.0, 1.0], 4)
    assert e == pytest.approx([0, 5, 12, 21, 32])
    g = shapeinv.grid_spectrum_1d("rosen-morse", [2.0, 1.0], 0.0, math.pi, 1000, 3)
    assert g == pytest.approx(e[:3], rel=1e-3, abs=1e-6)


def test_reduction_and_partner():
    cs = shapeinv.Model("cs", 2, 2.0)
    r = shapeinv.reduced_spectrum(cs, k=4, m=1000)
    assert r["pass"]
    assert r["algebraic"] == pytest.approx([0, 10, 24, 42])
    assert shapeinv.partner_grid_energy(shapeinv.Model("cs", 2, 1.0)) == pytest.approx(6.0, rel=1e-3)


def test_susy_small():
    rep = shapeinv.susy(shapeinv.Model("cs", 2, 1.0), m=24, cm_modes=2)
    assert rep["pairing"]["pass"]
    assert rep["structure"]["cross_sector_entries"] == 0


def test_cli_exit_codes(tmp_path):
    code, _, err = shapeinv.run_cli(["verify", "--kind", "calogero", "--n", "1", "--out", str(tmp_path)])
    assert code == 2
    assert "N must be" in err
    code, out, _ = shapeinv.run_cli(["chain", "--family", "rm", "--b", "2", "--a", "1", "--level", "2",
                                     "--out", str(tmp_path)])
    assert code == 0
    assert "PASS chain" in out
