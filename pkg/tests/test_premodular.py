import numpy as np
import pytest

from tvspec.errors import NonConvergenceError, PoleError
from tvspec.premodular import (
    PreModularParams,
    boundary_nonvanishing_scan,
    boundary_tau_samples,
    classify_f0,
    empirical_signs,
    gamma_weight_check,
    is_half_torsion,
    rs_grid_default,
    s_weight_identity,
    t_shift_identity,
    z_n,
    z_rs,
    zero_find,
    zero_find_multi,
)

from conftest import lattice


def test_params_weight_and_validation():
    assert [PreModularParams(0.3, 0.3, n, 1j).weight
            for n in (1, 2, 3, 4)] == [1, 3, 6, 10]
    with pytest.raises(ValueError):
        PreModularParams(0.3, 0.3, 5, 1j)
    with pytest.raises(ValueError):
        PreModularParams(0.3, 0.3, 1, 1.0 - 0.2j)
    assert PreModularParams(0.5, 1.0, 2, 1j).half_torsion
    assert not PreModularParams(0.5, 0.3, 2, 1j).half_torsion


def test_half_torsion_predicate():
    assert is_half_torsion(0.0, 0.5)
    assert is_half_torsion(1.5, -2.0)
    assert not is_half_torsion(0.25, 0.5)
    assert not is_half_torsion(0.5, 0.3)


def test_z_vanishes_exactly_at_half_periods():
    for tau in (1j, 1.3j, 0.31 + 1.12j):
        L = lattice(tau)
        for r, s in ((0.5, 0.0), (0.0, 0.5), (0.5, 0.5)):
            assert abs(z_rs(L, r, s)) < 1e-12


def test_z_is_odd_and_n1_matches_base():
    L = lattice(0.31 + 1.12j)
    for r, s in ((0.3, 0.2), (0.17, 0.44)):
        assert abs(z_rs(L, -r, -s) + z_rs(L, r, s)) < 1e-12
        assert abs(z_n(L, r, s, 1) - z_rs(L, r, s)) < 1e-14


def test_z_pole_at_lattice_points():
    with pytest.raises(PoleError):
        z_n(lattice(1j), 0.0, 0.0, 1)


@pytest.mark.parametrize(
    "tau,loc",
    [
        (0.3 + 1.0j, "interior"),
        (0.5 + 0.5j, "boundary_circle"),
        (0.0 + 2.0j, "boundary_left"),
        (1.0 + 0.7j, "boundary_right"),
        (1.2 + 1.0j, "outside"),
        (0.5 + 0.3j, "outside"),
        (-0.1 + 1.0j, "outside"),
        (0.4 - 1.0j, "outside"),
    ],
)
def test_fundamental_domain_classification(tau, loc):
    pt = classify_f0(tau)
    assert pt.location == loc
    assert pt.inside == (loc != "outside")
    assert pt.on_boundary == loc.startswith("boundary")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_translation_and_inversion_identities(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(6):
        r, s = rng.uniform(0.05, 0.95, size=2)
        tau = complex(rng.uniform(-0.4, 0.9), rng.uniform(0.6, 1.8))
        assert t_shift_identity(n, r, s, tau)["relative_error"] < 1e-8
        assert s_weight_identity(n, r, s, tau)["relative_error"] < 1e-8


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_congruence_weight_transformation(n):
    # the default gamma fixes (r, s) mod 1 exactly when 5r is an integer
    for r, s, tau in ((0.2, 0.3, -0.18 + 0.9j), (0.4, 0.15, 0.1 + 1.2j)):
        assert gamma_weight_check(n, r, s, tau)["relative_error"] < 1e-7
    with pytest.raises(ValueError):
        gamma_weight_check(1, 0.3, 0.2, 1j, gamma=((1, 1), (1, 1)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_lattice_translation_signs(n):
    out = empirical_signs(lattice(0.31 + 1.12j), 0.23, 0.36, n)
    for key in ("r_shift", "s_shift", "reflection"):
        assert abs(abs(out[key]) - 1.0) < 1e-9
    assert abs(out["reflection"] - out["expected_reflection"]) < 1e-9


def test_zero_find_interior_zeros():
    res = zero_find(1, 0.3, 0.3, 0.55 + 0.85j)
    assert res["converged"] if "converged" in res else True
    assert res["residual"] < 1e-10
    assert res["inside_F0"]
    assert classify_f0(res["tau_zero"]).location == "interior"
    assert abs(res["tau_zero"] - (0.5960 + 0.8030j)) < 5e-3

    res = zero_find(2, 0.15, 0.15, 0.7 + 0.7j)
    assert res["residual"] < 1e-10
    assert abs(res["tau_zero"] - (0.6893 + 0.7245j)) < 5e-3


def test_zero_find_failure_modes():
    with pytest.raises(ValueError):
        zero_find(1, 0.3, 0.3, 0.5 - 1j)
    # iterates chase the cusp: |Z| decays but tau runs off
    with pytest.raises(NonConvergenceError):
        zero_find(1, 0.6, 0.1, 0.3 + 1.5j)


def test_zero_find_multi_reports_absence():
    res = zero_find_multi(2, 0.3, 0.3)
    assert not res["any_interior_zero"]
    assert res["interior_zeros"] == ()
    assert len(res["runs"]) >= 20
    assert all(("error" in run) or not run.get("inside_F0", False)
               for run in res["runs"])


def test_boundary_scan_small():
    taus = boundary_tau_samples(12)
    res = boundary_nonvanishing_scan(
        1, rs_grid=[(0.3, 0.3), (0.25, 0.1)], tau_grid=taus, collect=True
    )
    assert res["passed"]
    assert res["points"] == 24
    assert len(res["rows"]) == 24
    assert min(row[3] for row in res["rows"]) == res["min_abs"]
    r, s, tau = res["argmin"]
    assert (r, s) in ((0.3, 0.3), (0.25, 0.1))


def test_sample_generators():
    rs = rs_grid_default(6, 5)
    assert len(rs) == 30
    assert all(0.0 < r < 1.0 and 0.0 < s < 0.5 for r, s in rs)
    assert not any(is_half_torsion(r, s) for r, s in rs)

    # odd nr would land a row on r = 1/2, where |Z^(n)| decays toward the
    # cusp; the generator must drop it
    assert all(r != 0.5 for r, _ in rs_grid_default(5, 5))
    assert len(rs_grid_default(5, 5)) == 20

    taus = boundary_tau_samples(60)
    assert len(taus) == 60
    assert all(classify_f0(t).on_boundary for t in taus)
