import numpy as np
import pytest

from primepot.eigensolver import bound_states
from primepot.semiclassical import (
    invert_to_potential,
    prime_density_of_states,
    profile_to_potential,
    wkb_level_count,
)
from primepot.sequences import riemann_r, sieve_primes
from primepot.susy import KINETIC_HALF


def test_single_term_is_inverse_log():
    for e in (5.0, 50.0, 500.0):
        assert prime_density_of_states(e, terms=1) == pytest.approx(1.0 / np.log(e))


def test_density_series_extended_precision_oracle():
    import mpmath

    mpmath.mp.dps = 40
    e = mpmath.mpf(100)
    total = mpmath.mpf(0)
    from primepot.sequences import moebius

    for m in range(1, 11):
        mu = moebius(m)
        if mu:
            total += mpmath.mpf(mu) / m * e ** ((1 - mpmath.mpf(m)) / m)
    oracle = float(total / mpmath.log(e))
    assert prime_density_of_states(100.0, terms=10) == pytest.approx(oracle, abs=1e-12)


def test_density_rejects_low_energy():
    with pytest.raises(ValueError):
        prime_density_of_states(2.0)


def test_leading_term_monotone_above_e():
    es = np.linspace(3.0, 50.0, 40)
    vals = [prime_density_of_states(e, terms=1) for e in es]
    assert np.all(np.diff(vals) < 0.0)


def test_constant_dos_gives_quadratic_profile():
    omega = 1.7
    prof = invert_to_potential(lambda e: 1.0 / omega, 0.0, 10.0, samples=60)
    expected = 2.0 * KINETIC_HALF / omega * np.sqrt(prof.v_values)
    assert np.max(np.abs(prof.x_values - expected)) < 1e-13
    assert prof.x_values[0] == 0.0


def test_quadrature_fourth_order_with_two_point_panels():
    # 2-point Gauss panels integrate exactly through cubic order, so halving
    # the panel width shrinks the error about sixteenfold once the density's
    # steep behaviour near E=2 is resolved
    v = 40.0
    dos = lambda e: prime_density_of_states(e, terms=25)
    reference = invert_to_potential(dos, 2.0, v, samples=2, panels=512, nodes_per_panel=8)
    errs = []
    for panels in (128, 256):
        prof = invert_to_potential(dos, 2.0, v, samples=2, panels=panels, nodes_per_panel=2)
        errs.append(abs(prof.x_values[-1] - reference.x_values[-1]))
    ratio = errs[0] / errs[1]
    assert ratio == pytest.approx(16.0, rel=0.5)


def test_negative_dos_reported_with_energy():
    with pytest.raises(ValueError, match="E="):
        invert_to_potential(lambda e: 1.0 - e, 0.0, 5.0, samples=4)


def test_prime_profile_monotone_and_flattening():
    prof = invert_to_potential(prime_density_of_states, 2.0, 110.0, samples=400)
    assert np.all(np.diff(prof.x_values) > 0.0)
    # convex rise near the bottom, flattening slope at large V
    dv_dx = np.gradient(prof.v_values, prof.x_values)
    assert dv_dx[-1] > dv_dx[len(dv_dx) // 8]


def test_wkb_count_at_vmax_100():
    prof = invert_to_potential(prime_density_of_states, 2.0, 110.0, samples=600)
    assert abs(wkb_level_count(prof, 100.0) - sieve_primes(100).size) <= 1


def test_wkb_counts_frozen_regression():
    # honest values of the phase integral with the 25-term density from e0=2;
    # they trail pi(E) by up to 2 at low energies (the construction is
    # approximate there) and land within 1 near 100
    prof = invert_to_potential(prime_density_of_states, 2.0, 110.0, samples=600)
    assert [wkb_level_count(prof, v) for v in (20.0, 50.0, 100.0)] == [6, 13, 24]


def test_eigensolver_staircase_tracks_riemann_r():
    prof = invert_to_potential(prime_density_of_states, 2.0, 110.0, samples=600)
    pot = profile_to_potential(prof)
    spec = bound_states(pot, KINETIC_HALF)
    worst = 0.0
    for energy in np.arange(5.0, 50.5, 2.5):
        staircase = int(np.sum(spec.eigenvalues <= energy))
        worst = max(worst, abs(staircase - riemann_r(float(energy))))
    assert worst <= 2.0


def test_substituted_integrand_bounded_at_origin():
    # after E = V - t^2 the integrand at t=0 is just 2*c*dos(V): finite
    v = 30.0
    val = 2.0 * KINETIC_HALF * prime_density_of_states(v)
    assert np.isfinite(val) and val > 0.0
