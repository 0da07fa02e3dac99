import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from halfwave import (Kernel, Mode, SpinPoleData, as_general, energy_density,
                      eval_hilbert_mx, eval_m, norm_residual, total_energy, traveling_wave)
from halfwave.errors import Singular
from halfwave.oracle import grid_points, hilbert_dx


def vacuum(m0=(0.0, 0.0, 1.0)):
    return SpinPoleData.real(m0, [], np.zeros((0, 3)))


def principal_value_hilbert(f, x, width=5.0):
    """(1/pi) PV int f(y) / (y - x) dy, by quadrature."""
    near = quad(f, x - width, x + width, weight="cauchy", wvar=x, limit=200)[0]
    left = quad(lambda y: f(y) / (y - x), -np.inf, x - width, limit=200)[0]
    right = quad(lambda y: f(y) / (y - x), x + width, np.inf, limit=200)[0]
    return (near + left + right) / np.pi


def test_half_plane_validation():
    with pytest.raises(ValueError):
        SpinPoleData.real([0, 0, 1], [-1j], [[1, 1j, 0]])
    with pytest.raises(ValueError):
        SpinPoleData.general([0, 0, 1], [1j], [[1, 1j, 0]], [1j], [[1, 1j, 0]], 1.0)


def test_real_mode_mirrors_lower_family(stationary):
    assert stationary.M == 1
    assert stationary.lower_poles[0] == -1j
    np.testing.assert_array_equal(stationary.lower_spins, stationary.upper_spins.conj())


def test_vacuum(rational):
    d = vacuum()
    x = np.linspace(-3, 3, 7)
    np.testing.assert_array_equal(eval_m(d, rational, x), np.tile([0, 0, 1], (7, 1)))
    np.testing.assert_array_equal(eval_hilbert_mx(d, rational, x), 0)
    np.testing.assert_array_equal(norm_residual(d, rational, x), 0)
    np.testing.assert_array_equal(energy_density(d, rational, x), 0)


def test_stationary_soliton_values(stationary, rational):
    np.testing.assert_allclose(eval_m(stationary, rational, 0.0), [-1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(eval_m(stationary, rational, 1.0), [0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(eval_hilbert_mx(stationary, rational, 0.0), [2, 0, 0], atol=1e-15)
    assert energy_density(stationary, rational, 0.0) == pytest.approx(2.0)
    assert np.abs(eval_hilbert_mx(stationary, rational, [1e6, -1e6])).max() <= 1e-10
    assert abs(energy_density(stationary, rational, 1e4)) < 1e-7


def test_stationary_profile_closed_form(stationary, rational):
    x = np.linspace(-5, 5, 41)
    expected = np.column_stack([(x**2 - 1) / (x**2 + 1), 2 * x / (x**2 + 1), 0 * x])
    np.testing.assert_allclose(eval_m(stationary, rational, x), expected, atol=1e-14)


def test_singular_at_pole(stationary, rational):
    with pytest.raises(Singular):
        eval_m(stationary, rational, 1j)


def test_traveling_wave_norm_residual(rational):
    d = traveling_wave([1j, 1 + 2j, -2 + 0.7j], 0.4)
    x = np.random.default_rng(0).uniform(-10, 10, 50)
    assert np.abs(norm_residual(d, rational, x)).max() <= 1e-12


def test_doubled_spin_breaks_norm(stationary, rational):
    d = SpinPoleData.real(stationary.m0, stationary.upper_poles, 2 * stationary.upper_spins)
    assert np.abs(norm_residual(d, rational, np.array([0.3, 1.7]))).min() > 1e-3


def test_admissible_data_has_unit_norm(two_soliton, rational):
    x = np.linspace(-30, 30, 1024)
    assert np.abs(norm_residual(two_soliton, rational, x)).max() <= 1e-10


def test_real_and_reflection(two_soliton, rational):
    x = np.linspace(-10, 10, 101)
    assert np.abs(eval_m(two_soliton, rational, x).imag).max() <= 1e-12
    z = np.array([0.3 + 0.4j, -2 - 0.2j, 5 + 3j])
    np.testing.assert_allclose(eval_m(two_soliton, rational, z.conj()),
                               eval_m(two_soliton, rational, z).conj(), atol=1e-13)


def test_hilbert_mx_against_principal_value_integral(two_soliton, rational):
    h = 1e-5

    def mx(y, c):
        return ((eval_m(two_soliton, rational, y + h) - eval_m(two_soliton, rational, y - h))
                / (2 * h))[..., c].real

    for x in (-2.0, 0.37, 4.1):
        expected = [principal_value_hilbert(lambda y: mx(y, c), x) for c in range(3)]
        got = eval_hilbert_mx(two_soliton, rational, x).real
        np.testing.assert_allclose(got, expected, atol=1e-6)


def test_hilbert_mx_matches_spectral_periodic(periodic_two_soliton):
    kind = Kernel.trigonometric(2 * np.pi)
    x = grid_points(kind.L, 1024)
    m = eval_m(periodic_two_soliton, kind, x).real
    closed = eval_hilbert_mx(periodic_two_soliton, kind, x).real
    assert np.abs(hilbert_dx(m, kind.L) - closed).max() <= 1e-6


def test_energy_of_stationary_soliton(stationary, rational):
    numeric = quad(lambda y: energy_density(stationary, rational, y), -np.inf, np.inf)[0]
    assert numeric == pytest.approx(2 * np.pi, rel=1e-9)
    assert total_energy(stationary, rational) == pytest.approx(2 * np.pi, rel=1e-14)


def test_total_energy_residue_formula_matches_quadrature(two_soliton, rational):
    numeric = quad(lambda y: energy_density(two_soliton, rational, y), -np.inf, np.inf,
                   limit=400, points=None)[0]
    assert total_energy(two_soliton, rational) == pytest.approx(numeric, rel=1e-8)


def test_periodic_total_energy(periodic_two_soliton):
    kind = Kernel.trigonometric(2 * np.pi)
    numeric = quad(lambda y: energy_density(periodic_two_soliton, kind, y), -np.pi, np.pi,
                   limit=200)[0]
    assert total_energy(periodic_two_soliton, kind) == pytest.approx(numeric, rel=1e-10)


def test_general_mode_returns_complex(two_soliton, rational):
    g = as_general(two_soliton)
    assert g.mode is Mode.GENERAL
    eps = energy_density(g, rational, np.array([0.0, 1.0]))
    assert np.iscomplexobj(eps)
    np.testing.assert_allclose(eps.real, energy_density(two_soliton, rational, np.array([0.0, 1.0])))


@settings(max_examples=25, deadline=None)
@given(theta=st.floats(-1.4, 1.4), shift=st.floats(-3, 3), height=st.floats(0.3, 3))
def test_traveling_wave_energy_is_positive_and_localized(theta, shift, height):
    kind = Kernel.rational()
    d = traveling_wave([shift + 1j * height], theta)
    eps = energy_density(d, kind, np.linspace(shift - 50, shift + 50, 201))
    assert np.all(eps >= -1e-12)
    assert np.argmax(eps) == 100
