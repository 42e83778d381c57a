import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import lattice_ref, wp_prime_ref, wp_ref, zeta_ref
from tvspec.elliptic import (
    make_lattice,
    reduce_to_cell,
    wp,
    wp_half_shift,
    wp_prime,
    wp_second,
    wp_series_half,
    wp_series_origin,
    zeta_w,
)
from tvspec.errors import PoleError

from conftest import lattice

TAUS = (1j, 1.3j, 2j, 0.31 + 1.12j, -0.4 + 0.8j)

SAMPLE_Z = (0.31 + 0.17j, 0.12, 0.07j, 0.45, 0.26, 0.33)


def _points(tau):
    return [0.31 + 0.17j, 0.45 * tau, 0.12 + 0.41 * tau, -0.23 + 0.29 * tau]


@pytest.mark.parametrize("tau", TAUS)
def test_lattice_constants_match_theta_reference(tau):
    L = lattice(tau)
    ref = lattice_ref(tau)
    for name in ("e1", "e2", "e3", "g2", "g3", "eta1"):
        got = getattr(L, name)
        scale = max(1.0, abs(ref[name]))
        assert abs(got - ref[name]) <= 1e-11 * scale, name


@pytest.mark.parametrize("tau", TAUS)
def test_point_values_match_theta_reference(tau):
    L = lattice(tau)
    for z in _points(tau):
        assert abs(wp(z, L) - wp_ref(z, tau)) <= 1e-9
        assert abs(zeta_w(z, L) - zeta_ref(z, tau)) <= 1e-10
        assert abs(wp_prime(z, L) - wp_prime_ref(z, tau)) <= 1e-8


def test_legendre_relation():
    for tau in TAUS:
        L = lattice(tau)
        assert abs(L.eta1 * tau - L.eta2 - 2j * np.pi) < 1e-12


def test_e_sum_and_symmetric_functions():
    for tau in TAUS:
        L = lattice(tau)
        e1, e2, e3 = L.es
        assert abs(e1 + e2 + e3) < 1e-11 * max(1.0, abs(e1))
        assert abs(L.g2 + 4 * (e1 * e2 + e1 * e3 + e2 * e3)) < 1e-10
        assert abs(L.g3 - 4 * e1 * e2 * e3) < 1e-10


def test_half_period_values_are_the_es():
    for tau in TAUS:
        L = lattice(tau)
        h = L.half_periods
        for ek, hk in zip(L.es, h[1:]):
            assert abs(wp(hk, L) - ek) < 1e-10 * max(1.0, abs(ek))
            assert abs(wp_prime(hk, L)) < 1e-7


@settings(max_examples=30, deadline=None)
@given(
    a=st.floats(0.08, 0.92),
    b=st.floats(0.08, 0.92),
    h=st.floats(0.6, 2.4),
)
def test_differential_identity_property(a, b, h):
    tau = 1j * h
    L = lattice(tau)
    z = a + b * tau
    p, dp = wp(z, L), wp_prime(z, L)
    lhs = dp * dp
    rhs = 4 * p ** 3 - L.g2 * p - L.g3
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs), abs(rhs))


@settings(max_examples=30, deadline=None)
@given(
    a=st.floats(0.1, 0.9),
    b=st.floats(0.1, 0.9),
    re=st.floats(-0.45, 0.45),
    h=st.floats(0.6, 2.2),
    m=st.integers(-2, 2),
    n=st.integers(-2, 2),
)
def test_periodicity_property(a, b, re, h, m, n):
    tau = re + 1j * h
    L = lattice(tau)
    z = a + b * tau
    w = z + m + n * tau
    assert abs(wp(w, L) - wp(z, L)) <= 1e-8 * max(1.0, abs(wp(z, L)))
    # zeta is quasi-periodic with increments eta1, eta2
    inc = m * L.eta1 + n * L.eta2
    assert abs(zeta_w(w, L) - zeta_w(z, L) - inc) <= 1e-9 * max(
        1.0, abs(zeta_w(z, L))
    )


def test_parity():
    for tau in TAUS:
        L = lattice(tau)
        for z in _points(tau):
            assert abs(wp(-z, L) - wp(z, L)) < 1e-10 * max(1.0, abs(wp(z, L)))
            assert abs(zeta_w(-z, L) + zeta_w(z, L)) < 1e-10
            assert abs(wp_prime(-z, L) + wp_prime(z, L)) < 1e-9


def test_second_derivative_identity():
    # wp'' = 6 wp^2 - g2/2
    for tau in TAUS:
        L = lattice(tau)
        for z in _points(tau):
            p = wp(z, L)
            lhs = wp_second(z, L)
            rhs = 6 * p * p - L.g2 / 2
            assert abs(lhs - rhs) < 1e-8 * max(1.0, abs(rhs))


def test_modular_inversion_of_wp():
    # wp(z/tau; -1/tau) = tau^2 wp(z; tau)
    for tau in (1j, 1.5j, 0.31 + 1.12j):
        L = lattice(tau)
        Ld = lattice(-1 / tau)
        for z in _points(tau):
            lhs = wp(z / tau, Ld)
            rhs = tau ** 2 * wp(z, L)
            assert abs(lhs - rhs) < 1e-8 * max(1.0, abs(rhs))


def test_half_shift_agrees_with_direct_translation():
    for tau in (1j, 1.3j, 0.31 + 1.12j):
        L = lattice(tau)
        for k in (1, 2, 3):
            for z in _points(tau):
                direct = wp(z + L.half_periods[k], L)
                shifted = wp_half_shift(z, L, k)
                assert abs(direct - shifted) < 1e-8 * max(1.0, abs(direct))


def test_series_match_function_values(lat_i):
    L = lat_i
    c = wp_series_origin(L, 8)
    for z in (0.05 + 0.04j, 0.09, 0.06j):
        val = 1.0 / z ** 2 + sum(c[m] * z ** (2 * m) for m in range(1, len(c)))
        assert abs(val - wp(z, L)) < 1e-9 * max(1.0, abs(wp(z, L)))
    for k in (1, 2, 3):
        a = wp_series_half(L, k, 16)
        for z in (0.05 + 0.04j, 0.07):
            val = sum(a[j] * z ** j for j in range(len(a)))
            ref = wp(z + L.half_periods[k], L)
            assert abs(val - ref) < 1e-9 * max(1.0, abs(ref))


def test_pole_guard():
    L = lattice(1j)
    for z in (0.0, 1.0, 1j, 1e-9 + 1e-9j, 1 + 1j):
        with pytest.raises(PoleError):
            wp(z, L)
        with pytest.raises(PoleError):
            zeta_w(z, L)


def test_reduce_to_cell_roundtrip():
    tau = 0.31 + 1.12j
    zs = np.array([3.7 + 2.1j, -5.2 + 0.3j, 0.25 + 0.5 * tau])
    zr, m, n = reduce_to_cell(zs, tau)
    assert np.max(np.abs(zs - (zr + m + n * tau))) < 1e-12


def test_make_lattice_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        make_lattice(-1j)
    with pytest.raises(ValueError):
        make_lattice(0.5)
