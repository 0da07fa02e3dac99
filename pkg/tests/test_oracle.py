import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfwave import (EvolveOptions, Kernel, evolve, eval_hilbert_mx, eval_m, one_soliton,
                      solve_iterative)
from halfwave.errors import GridMismatch, Instability
from halfwave.kernels import alpha
from halfwave.oracle import (GridField, compare_fields, discrete_hilbert, evolve_pde,
                             grid_points, hilbert_dx, hwm_rhs)

from conftest import two_soliton_spec

L = 2 * np.pi


def test_grid_validation():
    for n in (4, 12):
        with pytest.raises(ValueError):
            GridField(1.0, np.zeros((n, 3)))
    with pytest.raises(ValueError):
        GridField(1.0, np.full((8, 3), np.nan))
    g = GridField(2.0, np.zeros((8, 3)))
    np.testing.assert_allclose(g.x, -1 + 0.25 * np.arange(8))


def test_hilbert_examples():
    x = grid_points(3.0, 64)
    np.testing.assert_allclose(discrete_hilbert(np.full(64, 2.5)), 0, atol=1e-15)
    k = 2 * np.pi / 3.0
    np.testing.assert_allclose(discrete_hilbert(np.cos(k * x)), -np.sin(k * x), atol=1e-14)
    np.testing.assert_allclose(discrete_hilbert(np.sin(k * x)), np.cos(k * x), atol=1e-14)


def test_multiplier_sign_matches_pole_eigenfunction():
    kind = Kernel.trigonometric(L)
    x = grid_points(L, 256)
    a = 0.4 + 0.7j
    f = alpha(kind, x - a)
    Hf = discrete_hilbert(f.real) + 1j * discrete_hilbert(f.imag)
    diff = Hf - (-1j * f)
    # Equal up to an additive constant.
    np.testing.assert_allclose(diff - diff.mean(), 0, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.sampled_from([8, 16, 64, 256]))
def test_hilbert_involution(seed, n):
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(n)
    c = np.fft.rfft(f)
    c[0] = 0
    c[-1] = 0
    f = np.fft.irfft(c, n)
    np.testing.assert_allclose(discrete_hilbert(discrete_hilbert(f)), -f, atol=1e-12)


def test_hilbert_along_axis():
    rng = np.random.default_rng(1)
    f = rng.standard_normal((32, 3))
    np.testing.assert_allclose(discrete_hilbert(f, axis=0)[:, 1], discrete_hilbert(f[:, 1]))


def periodic_one_soliton():
    kind = Kernel.trigonometric(L)
    return kind, one_soliton(0.3 + 0.6j, [0.6, 0.0, 0.8], [0, 0, 1.0], kind)


def test_rhs_examples():
    g = GridField(L, np.tile([0.0, 0.0, 1.0], (64, 1)))
    np.testing.assert_allclose(hwm_rhs(g).samples, 0, atol=1e-15)
    kind, d = periodic_one_soliton()
    x = grid_points(L, 1024)
    m = eval_m(d, kind, x).real
    expected = np.cross(m, eval_hilbert_mx(d, kind, x).real)
    got = hwm_rhs(GridField(L, m)).samples
    assert np.abs(got - expected).max() <= 1e-6
    np.testing.assert_allclose(hwm_rhs(GridField(L, -m)).samples, got, atol=1e-13)


def test_hilbert_matches_closed_form(periodic_two_soliton):
    kind = Kernel.trigonometric(L)
    x = grid_points(L, 2048)
    m = eval_m(periodic_two_soliton, kind, x).real
    err = np.abs(hilbert_dx(m, L) - eval_hilbert_mx(periodic_two_soliton, kind, x).real).max()
    assert err <= 1e-8


def test_spectral_convergence(periodic_two_soliton):
    kind = Kernel.trigonometric(L)
    errs = []
    for n in (16, 32, 64, 128):
        x = grid_points(L, n)
        m = eval_m(periodic_two_soliton, kind, x).real
        exact = np.cross(m, eval_hilbert_mx(periodic_two_soliton, kind, x).real)
        errs.append(np.abs(hwm_rhs(GridField(L, m)).samples - exact).max())
    for coarse, fine in zip(errs, errs[1:]):
        assert fine <= coarse / 4 or fine < 1e-12


def test_large_box_embedding_of_rational_data():
    rational = Kernel.rational()
    d = solve_iterative(two_soliton_spec()).data
    extent = 10.0  # poles at -3 and 3 with unit-scale widths
    box = 80 * extent
    x = grid_points(box, 2**15)
    m = eval_m(d, rational, x).real
    core = np.abs(x) <= extent
    err = np.abs(hilbert_dx(m, box) - eval_hilbert_mx(d, rational, x).real)[core].max()
    assert err <= 1e-4


def test_vacuum_pde_is_stationary():
    g = GridField(L, np.tile([0.6, 0.0, 0.8], (32, 1)))
    res = evolve_pde(g, (0, 0.5), 0.01)
    np.testing.assert_allclose(res[-1].samples, g.samples, atol=1e-15)


def test_pde_one_soliton_translation():
    kind, d = periodic_one_soliton()
    x = grid_points(L, 1024)
    g = GridField(L, eval_m(d, kind, x).real)
    res = evolve_pde(g, (0.0, 1.0), 1e-3)
    exact = evolve(d, kind, EvolveOptions(t_span=(0, 1), sample_count=2)).states[-1]
    linf, _ = compare_fields(res[-1], GridField(L, eval_m(exact, kind, x).real))
    assert linf <= 1e-3
    assert res.norm_drift.max() <= 1e-3


def test_pde_instability_guard():
    kind, d = periodic_one_soliton()
    g = GridField(L, eval_m(d, kind, grid_points(L, 512)).real)
    with pytest.raises(Instability):
        evolve_pde(g, (0.0, 5.0), 0.05)
    with pytest.raises(ValueError):
        evolve_pde(GridField(L, 2 * g.samples), (0.0, 1.0), 1e-3)


def test_dealias_option_runs():
    kind, d = periodic_one_soliton()
    g = GridField(L, eval_m(d, kind, grid_points(L, 256)).real)
    res = evolve_pde(g, (0.0, 0.1), 1e-3, dealias=True)
    assert len(res) == 2


def test_compare_fields():
    g = GridField(1.0, np.tile([0.0, 0.0, 1.0], (16, 1)))
    assert compare_fields(g, g) == (0.0, 0.0)
    h = GridField(1.0, g.samples + [1e-3, 0, 0])
    linf, l2 = compare_fields(g, h)
    assert linf == pytest.approx(1e-3) and l2 == pytest.approx(1e-3)
    with pytest.raises(GridMismatch):
        compare_fields(g, GridField(1.0, np.zeros((32, 3))))


def test_grid_io_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    g = GridField(3.0, rng.standard_normal((16, 3)))
    g.to_csv(tmp_path / "f.csv")
    g.to_binary(tmp_path / "f.bin")
    np.testing.assert_array_equal(GridField.from_csv(tmp_path / "f.csv", 3.0).samples, g.samples)
    np.testing.assert_array_equal(GridField.from_binary(tmp_path / "f.bin", 3.0).samples, g.samples)
    assert (tmp_path / "f.bin").stat().st_size == 16 * 3 * 8
