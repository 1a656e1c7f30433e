import math

import numpy as np
import pytest

import vibron_sim as vs


def test_basis_dimension():
    b = vs.FockBasis.enumerate(6, vs.ModeConvention.circular)
    assert len(b) == 28
    assert b.total_n == 6
    assert len(vs.FockBasis.enumerate(6, vs.ModeConvention.circular, vs.BlockFilter.fixed_l(0))) == 4


def test_essential_hamiltonian_is_hermitian():
    b = vs.FockBasis.enumerate(5, vs.ModeConvention.circular)
    h = vs.build("essential", 0.4, b).dense()
    assert np.allclose(h, h.conj().T)
    ev = vs.eigenvalues(vs.build("essential", 0.4, b))
    assert np.all(np.diff(ev) >= 0)


def test_meanfield_transition():
    assert vs.r_min(0.1) == 0.0
    assert vs.r_min(0.5) > 0.0


def test_quench_starts_unsqueezed():
    ts = vs.quench(0.3, 20, vs.linear_time_grid(5.0, 11))
    assert ts["xi2_opt"][0] == pytest.approx(1.0, abs=1e-9)
    assert ts["zeta2_opt"][0] == pytest.approx(1.0, abs=1e-9)
    assert max(abs(n - 1.0) for n in ts["norm"]) < 1e-10


def test_config_error_maps_to_value_error():
    with pytest.raises(ValueError):
        vs.quench(1.5, 10, [0.0, 1.0])


def test_wigner_vacuum_like_state():
    s = vs.spin_coherent2(math.pi / 2, 0.0, 10)
    g = vs.wigner_planar(s, 4.0, 81)
    assert g.integral() == pytest.approx(1.0, abs=1e-3)
    back = vs.read_grid_csv(g.to_csv())
    assert np.array_equal(back.values, g.values)


def test_oscillation_protocol_without_criteria():
    s = vs.spin_coherent2(math.pi / 2, 0.0, 20)
    times = [0.0, math.pi / 2, math.pi]
    ts = vs.quench(0.0, 20, times, kind="n0_only", quadratures=True, initial=s, criteria=False)
    x = ts["X_mean"]
    assert x[1] == pytest.approx(0.0, abs=1e-10)
    assert x[2] == pytest.approx(-x[0], abs=1e-10)
    assert math.isnan(ts["xi2_opt"][1])
