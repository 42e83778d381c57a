"""Pre-modular forms attached to torsion parameters (r, s).

The building block is

    Z = Z_{r,s}(tau) = zeta(r + s*tau; tau) - r*eta1(tau) - s*eta2(tau),

odd under (r,s) -> (-r,-s) and vanishing exactly at the half-period
torsion points (r, s in {0, 1/2} mod 1).  For n = 1..4 the pre-modular
form z_n is an explicit polynomial in Z, wp, wp' and the lattice
invariants (all evaluated at r + s*tau) of modular weight n(n+1)/2; its
zeros in the tau plane detect solvability of an associated vortex
equation, and a nonvanishing theorem keeps it away from zero on the
boundary of the fundamental domain

    F0 = {tau : 0 <= Re tau <= 1, |tau - 1/2| >= 1/2, Im tau > 0}.

The module provides the evaluations, the F0 classifier, grid scans of
|z_n| over the three boundary pieces, Newton zero finding in tau (with
multi-start), and the two generating transformation identities

    Z^(n)_{r,s}(tau)                 = Z^(n)_{r+s,s}(tau - 1),
    (1-tau)^w Z^(n)_{r,s}(tau)       = Z^(n)_{r,r+s}(tau/(1-tau)),

with w = n(n+1)/2.  Translation signs of (r,s) by integers are not fixed
a priori; ``empirical_signs`` measures them, and scans compare absolute
values only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elliptic import LatticeData, make_lattice, wp, wp_prime, zeta_w
from .errors import NonConvergenceError

__all__ = [
    "PreModularParams",
    "F0Point",
    "WEIGHTS",
    "z_rs",
    "z_n",
    "classify_f0",
    "is_half_torsion",
    "empirical_signs",
    "t_shift_identity",
    "s_weight_identity",
    "gamma_weight_check",
    "rs_grid_default",
    "boundary_tau_samples",
    "boundary_nonvanishing_scan",
    "zero_find",
    "zero_find_multi",
]

WEIGHTS = {1: 1, 2: 3, 3: 6, 4: 10}


def is_half_torsion(r: float, s: float, tol: float = 1e-12) -> bool:
    """Whether (r, s) lies on the half-integer lattice (mod 1)."""
    fr = abs(2.0 * r - round(2.0 * r))
    fs = abs(2.0 * s - round(2.0 * s))
    return fr <= tol and fs <= tol


@dataclass(frozen=True)
class PreModularParams:
    """Validated (r, s, n, tau); half-torsion inputs are allowed but the
    nonvanishing statements do not apply to them."""

    r: float
    s: float
    n: int
    tau: complex

    def __post_init__(self):
        if self.n not in (1, 2, 3, 4):
            raise ValueError("n must be 1, 2, 3 or 4")
        if complex(self.tau).imag <= 0:
            raise ValueError("tau must lie in the upper half plane")

    @property
    def weight(self) -> int:
        return WEIGHTS[self.n]

    @property
    def half_torsion(self) -> bool:
        return is_half_torsion(self.r, self.s)


@dataclass(frozen=True)
class F0Point:
    tau: complex
    location: str  # interior | boundary_left | boundary_right | boundary_circle | outside

    @property
    def inside(self) -> bool:
        return self.location != "outside"

    @property
    def on_boundary(self) -> bool:
        return self.location.startswith("boundary")


def classify_f0(tau: complex, tol: float = 1e-9) -> F0Point:
    """Locate tau relative to F0 = {0 <= Re <= 1, |tau - 1/2| >= 1/2}.

    Boundary pieces win within tol; Im tau <= 0 is always outside."""
    tau = complex(tau)
    if tau.imag <= tol:
        return F0Point(tau, "outside")
    x = tau.real
    circ = abs(tau - 0.5) - 0.5
    if -tol <= x <= 1.0 + tol and circ >= -tol:
        if abs(x) <= tol:
            return F0Point(tau, "boundary_left")
        if abs(x - 1.0) <= tol:
            return F0Point(tau, "boundary_right")
        if circ <= tol:
            return F0Point(tau, "boundary_circle")
        return F0Point(tau, "interior")
    return F0Point(tau, "outside")


# ── evaluations ───────────────────────────────────────────────────────────

def z_rs(L: LatticeData, r: float, s: float):
    """Z_{r,s} = zeta(r + s*tau) - r*eta1 - s*eta2 (odd in (r,s); zero at
    half-period torsion).  Raises PoleError when r + s*tau hits the
    lattice."""
    z = r + s * L.tau
    return zeta_w(z, L) - r * L.eta1 - s * L.eta2


def z_n(L: LatticeData, r: float, s: float, n: int):
    """Pre-modular form of weight n(n+1)/2 at (r, s) on lattice L."""
    if n == 1:
        return z_rs(L, r, s)
    zz = r + s * L.tau
    Z = z_rs(L, r, s)
    p = wp(zz, L)
    pp = wp_prime(zz, L)
    if n == 2:
        return Z ** 3 - 3.0 * p * Z - pp
    g2, g3 = L.g2, L.g3
    if n == 3:
        return (
            Z ** 6
            - 15.0 * p * Z ** 4
            - 20.0 * pp * Z ** 3
            + (27.0 / 4.0 * g2 - 45.0 * p ** 2) * Z ** 2
            - 12.0 * p * pp * Z
            - 5.0 / 4.0 * pp ** 2
        )
    if n == 4:
        return (
            Z ** 10
            - 45.0 * p * Z ** 8
            - 120.0 * pp * Z ** 7
            + (399.0 / 4.0 * g2 - 630.0 * p ** 2) * Z ** 6
            - 504.0 * p * pp * Z ** 5
            - 15.0 / 4.0 * (280.0 * p ** 3 - 49.0 * g2 * p - 115.0 * g3) * Z ** 4
            + 15.0 * (11.0 * g2 - 24.0 * p ** 2) * pp * Z ** 3
            - 9.0 / 4.0
            * (140.0 * p ** 4 - 245.0 * g2 * p ** 2 + 190.0 * g3 * p + 21.0 * g2 ** 2)
            * Z ** 2
            - (40.0 * p ** 3 - 163.0 * g2 * p + 125.0 * g3) * pp * Z
            + 3.0 / 4.0 * (25.0 * g2 - 3.0 * p ** 2) * pp ** 2
        )
    raise ValueError("n must be 1, 2, 3 or 4")


def empirical_signs(L: LatticeData, r: float, s: float, n: int) -> dict:
    """Measured signs of the integer translations and the reflection.

    The translation identities hold up to a sign that is not pinned per
    (n, shift); this returns the realized ratios (each should be +-1 to
    numerical accuracy) so callers can assert |ratio| = 1 and record the
    sign."""
    base = z_n(L, r, s, n)
    out = {}
    for name, (rr, ss) in {
        "r_shift": (r + 1.0, s),
        "s_shift": (r, s + 1.0),
        "reflection": (-r, -s),
    }.items():
        val = z_n(L, rr, ss, n)
        out[name] = complex(val / base)
    out["expected_reflection"] = float((-1.0) ** WEIGHTS[n])
    return out


# ── transformation identities ─────────────────────────────────────────────

def t_shift_identity(n: int, r: float, s: float, tau: complex,
                     truncation_tol: float = 1e-14) -> dict:
    """Z^(n)_{r,s}(tau) = Z^(n)_{r+s,s}(tau - 1); returns both sides."""
    lhs = z_n(make_lattice(tau, truncation_tol=truncation_tol), r, s, n)
    rhs = z_n(make_lattice(tau - 1.0, truncation_tol=truncation_tol), r + s, s, n)
    scale = max(1.0, abs(lhs), abs(rhs))
    return {"lhs": lhs, "rhs": rhs, "relative_error": abs(lhs - rhs) / scale}


def s_weight_identity(n: int, r: float, s: float, tau: complex,
                      truncation_tol: float = 1e-14) -> dict:
    """(1-tau)^w Z^(n)_{r,s}(tau) = Z^(n)_{r,r+s}(tau/(1-tau)), w = n(n+1)/2."""
    w = WEIGHTS[n]
    lhs = (1.0 - tau) ** w * z_n(
        make_lattice(tau, truncation_tol=truncation_tol), r, s, n
    )
    tau2 = tau / (1.0 - tau)
    rhs = z_n(make_lattice(tau2, truncation_tol=truncation_tol), r, r + s, n)
    scale = max(1.0, abs(lhs), abs(rhs))
    return {"lhs": lhs, "rhs": rhs, "relative_error": abs(lhs - rhs) / scale}


def gamma_weight_check(
    n: int,
    r: float,
    s: float,
    tau: complex,
    gamma=((1, 0), (5, 1)),
    truncation_tol: float = 1e-14,
) -> dict:
    """Modular weight test: for gamma in the principal congruence group
    fixing the torsion class of (r, s),

        Z^(n)_{r,s}(gamma t) = (c*t + d)^w Z^(n)_{r,s}(t).

    Defaults: gamma = [[1,0],[5,1]] and (r, s) a 5-torsion pair."""
    (a, b), (c, d) = gamma
    if a * d - b * c != 1:
        raise ValueError("gamma must have determinant 1")
    w = WEIGHTS[n]
    t2 = (a * tau + b) / (c * tau + d)
    lhs = z_n(make_lattice(t2, truncation_tol=truncation_tol), r, s, n)
    rhs = (c * tau + d) ** w * z_n(
        make_lattice(tau, truncation_tol=truncation_tol), r, s, n
    )
    scale = max(1.0, abs(lhs), abs(rhs))
    return {"lhs": lhs, "rhs": rhs, "relative_error": abs(lhs - rhs) / scale}


# ── boundary scans ────────────────────────────────────────────────────────

def rs_grid_default(nr: int = 20, ns: int = 20):
    """(r, s) grid filling (0,1) x (0,1/2) on offset midpoints.  The row
    r = 1/2 (hit when nr is odd) is dropped: those points are not
    half-torsion, but |Z^(n)| decays exponentially along that line toward
    the cusp, so no uniform floor can hold on it."""
    rs = [( (2 * i + 1) / (2 * nr), (2 * j + 1) / (4 * ns) )
          for i in range(nr) for j in range(ns)]
    return [(r, s) for r, s in rs if r != 0.5]


def boundary_tau_samples(count: int = 60, h_min: float = 0.05, h_max: float = 10.0):
    """tau samples on the three boundary pieces of F0: the vertical lines
    Re = 0 and Re = 1 (heights log-spaced in [h_min, h_max]) and the
    circle |tau - 1/2| = 1/2 clipped to Im >= h_min."""
    per = max(1, count // 3)
    heights = np.geomspace(h_min, h_max, per)
    left = 1j * heights
    right = 1.0 + 1j * heights
    phi_min = np.arcsin(min(1.0, 2.0 * h_min))
    phis = np.linspace(phi_min, np.pi - phi_min, count - 2 * per)
    circle = 0.5 + 0.5 * np.exp(1j * phis)
    return np.concatenate([left, right, circle])


def boundary_nonvanishing_scan(
    n: int,
    rs_grid=None,
    tau_grid=None,
    floor: float = 1e-8,
    truncation_tol: float = 1e-14,
    collect: bool = False,
    mapper=map,
) -> dict:
    """min |Z^(n)| over (r,s) x boundary tau, with its argmin and a strict
    positivity verdict against ``floor``.  The theorem behind it promises
    nonvanishing for every non-half-torsion (r, s) on the whole boundary;
    the floor is an empirical regression guard, not a proved bound.

    ``collect=True`` additionally returns every sampled value as rows
    (r, s, tau, abs) ordered by (tau index, grid index).  ``mapper`` lets
    callers fan the per-tau work over a thread pool; it must preserve
    input order (like executor.map)."""
    if rs_grid is None:
        rs_grid = rs_grid_default()
    if tau_grid is None:
        tau_grid = boundary_tau_samples()
    rs_grid = [(float(r), float(s)) for r, s in rs_grid]

    def worker(tau):
        tau = complex(tau)
        L = make_lattice(tau, truncation_tol=truncation_tol)
        return [(r, s, tau, float(abs(z_n(L, r, s, n)))) for r, s in rs_grid]

    best = np.inf
    argmin = None
    count = 0
    rows = [] if collect else None
    for chunk in mapper(worker, np.asarray(tau_grid)):
        for r, s, tau, v in chunk:
            count += 1
            if v < best:
                best = v
                argmin = (r, s, tau)
        if collect:
            rows.extend(chunk)
    out = {
        "n": n,
        "min_abs": best,
        "argmin": argmin,
        "points": count,
        "floor": floor,
        "passed": best > floor,
    }
    if collect:
        out["rows"] = rows
    return out


# ── zero finding ──────────────────────────────────────────────────────────

def zero_find(
    n: int,
    r: float,
    s: float,
    seed_tau: complex,
    h: float = 1e-6,
    tol: float = 1e-10,
    max_iter: int = 60,
    truncation_tol: float = 1e-14,
) -> dict:
    """Newton iteration on tau for Z^(n)_{r,s}(tau) = 0 with a central
    difference derivative.  Converged means |Z| < tol and |step| < tol;
    divergence and half-plane exits raise NonConvergenceError.  The
    returned F0 location tells whether the zero counts (interior) or not."""

    def f(t):
        return z_n(make_lattice(t, truncation_tol=truncation_tol), r, s, n)

    t = complex(seed_tau)
    if t.imag <= 0:
        raise ValueError("seed must lie in the upper half plane")
    last_step = np.inf
    for it in range(max_iter):
        if t.imag < 0.02:
            raise NonConvergenceError(
                f"iteration left the usable half plane at {t:.6g}"
            )
        val = f(t)
        if abs(val) < tol and last_step < tol:
            loc = classify_f0(t)
            return {
                "tau_zero": t,
                "residual": abs(val),
                "inside_F0": loc.location == "interior",
                "location": loc.location,
                "converged": True,
                "iterations": it,
            }
        der = (f(t + h) - f(t - h)) / (2.0 * h)
        if abs(der) < 1e-14 * (1.0 + abs(val)):
            raise NonConvergenceError("derivative underflow in Newton step")
        step = -val / der
        if abs(step) > 0.5:
            step *= 0.5 / abs(step)
        t += step
        last_step = abs(step)
    raise NonConvergenceError(
        f"no zero within {max_iter} iterations from seed {seed_tau:.4g} "
        f"(last |Z| = {abs(val):.3g})"
    )


def zero_find_multi(
    n: int,
    r: float,
    s: float,
    seeds=None,
    **kwargs,
) -> dict:
    """Run zero_find from a lattice of seeds inside F0 and collect the
    distinct interior zeros (deduplicated at 1e-6).  Used to claim absence:
    every start either fails to converge or lands outside the interior."""
    if seeds is None:
        seeds = [
            x + 1j * y
            for x in (0.1, 0.3, 0.5, 0.7, 0.9)
            for y in (0.3, 0.6, 1.0, 1.6, 2.5)
            if classify_f0(x + 1j * y).inside
        ]
    zeros = []
    runs = []
    for seed in seeds:
        try:
            res = zero_find(n, r, s, seed, **kwargs)
        except NonConvergenceError as exc:
            runs.append({"seed": complex(seed), "converged": False,
                         "error": str(exc)})
            continue
        runs.append({"seed": complex(seed), "converged": True, **res})
        if res["inside_F0"]:
            t = res["tau_zero"]
            if all(abs(t - z) > 1e-6 for z in zeros):
                zeros.append(t)
    return {
        "n": n,
        "r": r,
        "s": s,
        "interior_zeros": tuple(zeros),
        "any_interior_zero": bool(zeros),
        "runs": tuple(runs),
    }
