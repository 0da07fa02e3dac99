import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfwave import (EvolveOptions, Kernel, Order, SpinPoleData, as_general,
                      backlund_crosscheck, evolve, eval_m, one_soliton, rhs_first_order,
                      rhs_second_order, traveling_wave)
from halfwave.cvec import dot
from halfwave.errors import NotAdmissible, PoleCrossing, StepFailure


def test_rhs_trivial_cases(stationary, rational):
    _, _, sdot, tdot = rhs_first_order(stationary, rational)
    np.testing.assert_array_equal(sdot, 0)
    acc, _, sdot, _ = rhs_second_order(stationary, rational)
    np.testing.assert_array_equal(acc, 0)
    np.testing.assert_array_equal(sdot, 0)


def test_rhs_traveling_waves(rational):
    adot, bdot, sdot, _ = rhs_first_order(traveling_wave([1j, 2 + 1j, -1 + 2j], 0.0), rational)
    assert np.abs(adot).max() <= 1e-12 and np.abs(sdot).max() <= 1e-12
    adot, bdot, sdot, _ = rhs_first_order(traveling_wave([1j, 2 + 1j, -1 + 2j], np.pi / 6),
                                          rational)
    np.testing.assert_allclose(adot, -0.5, atol=1e-12)
    np.testing.assert_allclose(bdot, -0.5, atol=1e-12)
    assert np.abs(sdot).max() <= 1e-12


def test_second_order_examples(rational):
    s1 = np.array([1, 1j, 0])
    d = SpinPoleData.general([0, 0, 1], [1j, 2j], [s1, s1.conj()], [], np.zeros((0, 3)), 1.0)
    acc, *_ = rhs_second_order(d, rational)
    # s1 . s1* = 2, so the pair interacts.
    sigma = dot(s1, s1.conj())
    np.testing.assert_allclose(acc[0], 4 * sigma / (-1j) ** 3)
    np.testing.assert_allclose(acc[0], -4j * sigma)
    d = SpinPoleData.general([0, 0, 1], [1j, 2j], [s1, s1], [], np.zeros((0, 3)), 1.0)
    acc, *_ = rhs_second_order(d, rational)
    np.testing.assert_allclose(acc, 0, atol=1e-15)


def test_second_order_trigonometric_matches_formula():
    kind = Kernel.trigonometric(5.0)
    s = np.array([[1, 1j, 0], [0.2, 1, 1j]])
    a = np.array([1j, 1.3 + 0.5j])
    d = SpinPoleData.general([0, 0, 1], a, s, [], np.zeros((0, 3)), 1.0)
    acc, *_ = rhs_second_order(d, kind)
    k = kind.kappa
    z = a[0] - a[1]
    Vp = -2 * k**3 * np.cos(k * z) / np.sin(k * z) ** 3
    assert acc[0] == pytest.approx(-2 * dot(s[0], s[1]) * Vp)


def test_traveling_wave_stationary(rational):
    d = traveling_wave([1j], 0.0)
    tr = evolve(d, rational, EvolveOptions(t_span=(-10, 10), sample_count=21, t_ref=0.0))
    assert np.abs(tr.upper_poles - 1j).max() <= 1e-10
    assert tr.times[0] == -10 and tr.times[-1] == 10


@settings(max_examples=15, deadline=None)
@given(x0=st.floats(-5, 5), y0=st.floats(0.3, 3), tilt=st.floats(-0.95, 0.95),
       phi=st.floats(0, 2 * np.pi))
def test_one_soliton_moves_rigidly(x0, y0, tilt, phi):
    kind = Kernel.rational()
    axis = np.array([np.sqrt(1 - tilt**2) * np.cos(phi), np.sqrt(1 - tilt**2) * np.sin(phi), tilt])
    d = one_soliton(x0 + 1j * y0, axis, [0, 0, 1.0])
    tr = evolve(d, kind, EvolveOptions(t_span=(0, 4), sample_count=5, monitor_energy=False))
    expected = d.upper_poles[0] + tilt * tr.times
    assert np.abs(tr.upper_poles[:, 0] - expected).max() <= 1e-9
    assert np.abs(tr.upper_spins - d.upper_spins).max() <= 1e-12


def test_traveling_wave_translation(rational):
    d = traveling_wave([1j, 2 + 1.5j, -2 + 0.8j], np.pi / 6)
    tr = evolve(d, rational, EvolveOptions(t_span=(0, 10), sample_count=11))
    expected = d.upper_poles[None, :] - tr.times[:, None] / 2
    assert np.abs(tr.upper_poles - expected).max() <= 1e-10
    assert np.abs(tr.upper_spins - d.upper_spins).max() <= 1e-10


def test_two_soliton_invariants(two_soliton, rational):
    tr = evolve(two_soliton, rational,
                EvolveOptions(t_span=(-20, 20), sample_count=41, t_ref=0.0))
    assert tr.monitors["constraint_residual"].max() <= 1e-8
    assert tr.monitors["spin_null"].max() <= 1e-10
    x = np.linspace(-40, 40, 512)
    worst = max(np.abs(dot(m := eval_m(s, rational, x), m) - 1).max() for s in tr.states)
    assert worst <= 1e-8
    e = tr.monitors["energy"]
    assert np.abs(e - e[0]).max() <= 1e-6 * abs(e[0])
    assert np.all(tr.monitors["min_im_upper"] > 0.1)
    assert np.all(np.diff(tr.times) > 0)


def test_general_mode_preserves_conjugation(two_soliton, rational):
    tr = evolve(as_general(two_soliton), rational, EvolveOptions(t_span=(0, 5), sample_count=6))
    assert np.abs(tr.lower_poles - tr.upper_poles.conj()).max() <= 1e-10
    assert np.abs(tr.lower_spins - tr.upper_spins.conj()).max() <= 1e-10


def test_time_reversibility(two_soliton, rational):
    tol = 1e-10
    fwd = evolve(two_soliton, rational, EvolveOptions(t_span=(0, 8), sample_count=2,
                                                      rel_tol=tol, abs_tol=tol))
    back = evolve(fwd.states[-1], rational, EvolveOptions(t_span=(8, 0), sample_count=2,
                                                          rel_tol=tol, abs_tol=tol))
    assert np.all(np.diff(back.times) < 0)
    assert np.abs(back.upper_poles[-1] - two_soliton.upper_poles).max() <= 10 * tol * 10
    assert np.abs(back.upper_spins[-1] - two_soliton.upper_spins).max() <= 10 * tol * 10


def test_periodic_evolution_invariants(periodic_two_soliton):
    kind = Kernel.trigonometric(2 * np.pi)
    tr = evolve(periodic_two_soliton, kind, EvolveOptions(t_span=(0, 5), sample_count=11))
    assert tr.monitors["constraint_residual"].max() <= 1e-8
    assert tr.monitors["norm_residual"].max() <= 1e-8
    e = tr.monitors["energy"]
    assert np.abs(e - e[0]).max() <= 1e-6 * abs(e[0])


def test_backlund_examples(rational):
    d = one_soliton(0.5 + 1j, [0.6, 0.0, 0.8], [0, 0, 1.0])
    assert max(backlund_crosscheck(d, rational, (0, 5))) <= 1e-12
    d = traveling_wave([1j, 2 + 1.5j, -2 + 0.8j], np.pi / 6)
    assert backlund_crosscheck(d, rational, (0, 5))[0] <= 1e-10


def test_second_order_mode_velocities(two_soliton, rational):
    tr = evolve(two_soliton, rational, EvolveOptions(mode=Order.SECOND, t_span=(0, 3),
                                                     sample_count=4))
    one = evolve(two_soliton, rational, EvolveOptions(t_span=(0, 3), sample_count=4))
    adot2 = np.array([v[0] for v in tr.velocities])
    adot1 = np.array([v[0] for v in one.velocities])
    assert np.abs(adot1 - adot2).max() <= 1e-7


def test_not_admissible(stationary, rational):
    bad = SpinPoleData.real(stationary.m0, stationary.upper_poles, 2 * stationary.upper_spins)
    with pytest.raises(NotAdmissible):
        evolve(bad, rational)


def test_pole_floor_guard(rational):
    # A soliton whose pole sits barely above the axis trips a large floor at once.
    d = one_soliton(1e-3 + 0.5j, [0.6, 0.0, 0.8], [0, 0, 1.0])
    with pytest.raises(PoleCrossing) as info:
        evolve(d, rational, EvolveOptions(t_span=(0, 1), sample_count=3, pole_floor=0.6))
    assert info.value.trajectory is not None


def test_head_on_coalescence_is_reported(rational):
    from halfwave import SolitonSpec, solve_iterative
    c = np.sqrt(3) / 2
    spec = SolitonSpec(rational, [-3 + 1j, 3 + 1j], [[c, 0, 0.5], [c, 0, -0.5]], [0, 0, 1])
    data = solve_iterative(spec).data
    with pytest.raises(StepFailure) as info:
        evolve(data, rational, EvolveOptions(t_span=(0, 10), sample_count=11))
    assert 4 < info.value.time < 5
    traj = info.value.trajectory
    assert not traj.complete and len(traj) >= 5


def test_options_validation():
    with pytest.raises(ValueError):
        EvolveOptions(rel_tol=0)
    with pytest.raises(ValueError):
        EvolveOptions(sample_count=0)
