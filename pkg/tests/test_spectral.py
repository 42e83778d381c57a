import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tvspec.errors import CheckError, NotConstructibleError
from tvspec.poly import ComplexPoly, coefficient_distance, match_roots
from tvspec.spectral import (
    MultiplicityTuple,
    condition_class,
    genus_of,
    modular_covariance_check,
    q_via_factorization,
    q_via_phi_ansatz,
    roots_and_classify,
    spectral_report,
    tau_scan,
)

from conftest import lattice

EVEN_TUPLES = [
    (1, 0, 0, 1), (1, 1, 0, 0), (2, 0, 0, 0), (1, 1, 1, 1),
    (2, 1, 1, 0), (2, 2, 1, 1), (3, 1, 0, 0), (2, 2, 2, 0),
]


def test_genus_table():
    known = {
        (1, 0, 0, 0): 1, (2, 0, 0, 0): 2, (3, 0, 0, 0): 3,
        (1, 1, 0, 0): 1, (1, 0, 0, 1): 1, (1, 1, 1, 1): 1,
        (2, 1, 1, 0): 2, (2, 2, 1, 1): 2, (3, 1, 0, 0): 3,
        (2, 2, 2, 0): 3, (2, 0, 0, 2): 2, (1, 1, 0, 1): 2,
    }
    for n, g in known.items():
        assert genus_of(n) == g, n


def test_genus_is_permutation_invariant():
    rng = np.random.default_rng(0)
    for _ in range(40):
        n = tuple(int(v) for v in rng.integers(0, 4, size=4))
        if max(n) == 0:
            continue
        g = genus_of(n)
        p = rng.permutation(4)
        assert genus_of(tuple(n[i] for i in p)) == g


def test_condition_class_table():
    c1 = [(0, 1, 1, 0), (1, 2, 2, 1), (0, 2, 1, 0)]
    c2 = [(1, 0, 0, 1), (2, 1, 1, 2), (2, 0, 0, 2)]
    neither = [(1, 0, 0, 0), (1, 1, 1, 1), (2, 1, 1, 0), (2, 2, 1, 1)]
    for n in c1:
        assert condition_class(n) == "C1", n
    for n in c2:
        assert condition_class(n) == "C2", n
    for n in neither:
        assert condition_class(n) == "NEITHER", n


def test_multiplicity_tuple_validation():
    t = MultiplicityTuple((2, 0, 0, 0))
    assert t.total == 2 and t.parity == "even"
    assert t.genus == 2 and t.condition_class == "NEITHER"
    with pytest.raises(ValueError):
        MultiplicityTuple((0, 0, 0, 0))
    with pytest.raises(ValueError):
        MultiplicityTuple((-1, 1, 0, 0))
    with pytest.raises(ValueError):
        MultiplicityTuple((1, 0, 0))


def test_classical_cubic():
    # single unit source at the origin: the three roots are exactly the es
    for tau in (1j, 1.3j):
        L = lattice(tau)
        q = q_via_phi_ansatz(L, (1, 0, 0, 0))
        _, dist = match_roots(np.asarray(roots_and_classify(q).roots),
                              np.asarray(L.es))
        assert dist < 1e-10


def test_closed_form_conjugate_pair_tuple():
    # (1,0,0,1): one real root and a conjugate pair with closed forms on
    # the halved-modulus lattice
    for b in (1.1, 1.5, 2.0):
        tau = 1j * b
        L = lattice(tau)
        q = q_via_phi_ansatz(L, (1, 0, 0, 1))
        roots = np.asarray(roots_and_classify(q).roots)
        Lh = lattice((1 + tau) / 2.0)
        e3 = L.es[2]
        expected = np.array([
            Lh.e1 - 2 * e3,
            Lh.e2 - 2 * e3,
            np.conj(Lh.e2 - 2 * e3),
        ])
        _, dist = match_roots(roots, expected)
        assert dist < 1e-9


@pytest.mark.parametrize("n", EVEN_TUPLES)
def test_route_agreement(n):
    for tau in (1j, 1.3j):
        L = lattice(tau)
        qa = q_via_phi_ansatz(L, n)
        qf = q_via_factorization(L, n)
        assert qa.degree == 2 * genus_of(n) + 1
        assert coefficient_distance(qa, qf) < 1e-8


def test_reachable_odd_tuple_routes_agree():
    L = lattice(1j)
    qa = q_via_phi_ansatz(L, (1, 1, 0, 1))
    qf, det = q_via_factorization(L, (1, 1, 0, 1), details=True)
    assert det["tuple"] == (2, 0, 0, 0)
    assert coefficient_distance(qa, qf) < 1e-10


def test_unreachable_odd_tuple_refused():
    L = lattice(1j)
    with pytest.raises(NotConstructibleError):
        q_via_factorization(L, (3, 0, 0, 0))
    # the principal-part route still works and the report downgrades
    rep = spectral_report(L, (3, 0, 0, 0), route="both")
    assert rep.route == "phi"
    assert rep.factor_degrees is None
    assert rep.coeffs.degree == 7


def test_klein_relabeling_invariance():
    # permuting the multiplicities by the half-period translations leaves
    # the spectral polynomial unchanged
    perms = ((1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0))
    L = lattice(1.3j)
    for n in [(2, 1, 1, 0), (1, 0, 0, 1), (2, 2, 1, 1)]:
        q0 = q_via_phi_ansatz(L, n)
        for p in perms:
            qp = q_via_phi_ansatz(L, tuple(n[i] for i in p))
            assert coefficient_distance(q0, qp) < 1e-9, (n, p)


@settings(max_examples=12, deadline=None)
@given(
    b=st.floats(0.6, 2.2),
    idx=st.integers(0, len(EVEN_TUPLES) - 1),
)
def test_real_coefficients_on_imaginary_axis(b, idx):
    L = lattice(complex(0.0, round(b, 3)))
    q = q_via_phi_ansatz(L, EVEN_TUPLES[idx])
    assert q.real_coefficients(tol=1e-9)


def test_roots_and_classify_precedence():
    real = ComplexPoly((-6.0, 11.0, -6.0, 1.0))        # (x-1)(x-2)(x-3)
    complex_pair = ComplexPoly((-1.0, 1.0, -1.0, 1.0))  # (x-1)(x^2+1)
    double = ComplexPoly((-2.0, 5.0, -4.0, 1.0))        # (x-1)^2 (x-2)
    assert roots_and_classify(real).classification == "real_distinct"
    assert roots_and_classify(complex_pair).classification == "has_complex"
    assert roots_and_classify(double).classification == "has_multiple"
    rr = roots_and_classify(real)
    assert rr.min_gap == pytest.approx(1.0, abs=1e-8)
    assert rr.max_imag < 1e-12


def test_spectral_report_cross_checks():
    L = lattice(1j)
    rep = spectral_report(L, (2, 0, 0, 0))
    assert rep.route == "both"
    assert rep.route_discrepancy < 1e-10
    assert rep.genus == 2
    assert sum(d for d in rep.factor_degrees) == 5
    assert rep.root_report.classification == "real_distinct"
    assert rep.tolerances["route_tol"] == 1e-8
    with pytest.raises(ValueError):
        spectral_report(L, (2, 0, 0, 0), route="nope")


def test_route_disagreement_raises():
    L = lattice(1j)
    with pytest.raises(CheckError):
        spectral_report(L, (2, 0, 0, 0), route_tol=1e-18)


def test_factor_union_resolves_thin_gaps():
    # at elongated aspect ratios two bands of (2,2,1,1) nearly touch; the
    # roots of the expanded quintic blur into a cluster while the factor
    # family still separates them cleanly
    L = lattice(2j)
    q = q_via_phi_ansatz(L, (2, 2, 1, 1))
    assert roots_and_classify(q).classification != "real_distinct"
    rep = spectral_report(L, (2, 2, 1, 1))
    assert rep.diagnostics["root_source"] == "factor_union"
    assert rep.root_report.classification == "real_distinct"
    assert 0 < rep.root_report.min_gap < 1e-5
    assert rep.root_report.max_imag < 1e-10
    # tuples without a product form keep the coefficient-route roots
    rep2 = spectral_report(L, (3, 0, 0, 0))
    assert rep2.diagnostics["root_source"] == "coefficients"


def test_modular_covariance():
    for n in [(2, 0, 0, 0), (1, 1, 0, 0)]:
        for tau in (1.5j, 0.7j):
            res = modular_covariance_check(n, tau)
            assert res["passed"], (n, tau, res["max_match_distance"])


def test_tau_scan_collects_failures_and_orders_points():
    res = tau_scan((1, 0, 0, 1), [0.8, 1.0, 1.2])
    assert res.expected == "has_complex"
    assert res.passed and res.failures == 0
    assert [p.b for p in res.points] == [0.8, 1.0, 1.2]
    assert all(len(p.roots) == 3 for p in res.points)


def test_tau_scan_mapper_matches_sequential():
    from concurrent.futures import ThreadPoolExecutor

    bs = [0.7, 0.9, 1.1, 1.3]
    seq = tau_scan((2, 0, 0, 0), bs)
    with ThreadPoolExecutor(max_workers=4) as ex:
        par = tau_scan((2, 0, 0, 0), bs, mapper=ex.map)
    assert seq.passed and par.passed
    for a, b in zip(seq.points, par.points):
        assert a.b == b.b and a.classification == b.classification
        assert np.allclose(a.roots, b.roots)
