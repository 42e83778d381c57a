"""Simultaneous polynomial root finding (Aberth–Ehrlich) with Newton polish.

Coefficients are ascending (c[0] + c[1] x + ...), complex, dense.  The
iteration is deterministic: fixed initial circle, no randomness, so repeated
calls give bit-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError

_MAX_ITER = 400


def polyval_and_deriv(coeffs: np.ndarray, x: np.ndarray):
    """Horner evaluation of p(x) and p'(x) for ascending coeffs."""
    p = np.zeros_like(x, dtype=complex)
    dp = np.zeros_like(x, dtype=complex)
    for c in coeffs[::-1]:
        dp = dp * x + p
        p = p * x + c
    return p, dp


def _initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    n = len(coeffs) - 1
    an = coeffs[-1]
    center = -coeffs[-2] / (n * an) if n >= 1 else 0.0
    r = 1.0 + max(abs(c / an) for c in coeffs[:-1])  # Cauchy bound
    # spread start points on a circle; the 0.4 phase offset breaks any
    # symmetry a real-coefficient input would otherwise preserve forever
    ang = 2.0 * np.pi * (np.arange(n) + 0.5) / n + 0.4
    return center + 0.7 * r * np.exp(1j * ang)


def aberth_roots(
    coeffs,
    tol: float = 1e-13,
    max_iter: int = _MAX_ITER,
    polish_steps: int = 3,
) -> np.ndarray:
    """All roots of the polynomial with ascending coefficients ``coeffs``.

    Convergence: max Aberth correction below tol * (1 + |root|).  After
    convergence every root takes ``polish_steps`` plain Newton steps on the
    undeflated polynomial.  Raises NonConvergenceError (with the current
    iterate attached as ``partial``) if the budget runs out.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size == 0 or not np.any(c != 0):
        raise ValueError("zero polynomial has no well-defined root set")
    # strip trailing (leading-degree) zeros
    deg = c.size - 1
    while deg > 0 and c[deg] == 0:
        deg -= 1
    c = c[: deg + 1]
    if deg == 0:
        return np.zeros(0, dtype=complex)
    if deg == 1:
        return np.array([-c[0] / c[1]], dtype=complex)

    z = _initial_guesses(c)
    absc = np.abs(c)
    for _ in range(max_iter):
        p, dp = polyval_and_deriv(c, z)
        # backward-error stop: |p(z)| at the level of rounding noise in the
        # evaluation itself means no further progress is representable
        # (handles root clusters, where corrections stall at cluster size)
        mag = np.polynomial.polynomial.polyval(np.abs(z), absc)
        if np.all(np.abs(p) <= 40.0 * np.finfo(float).eps * mag):
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            w = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            s = (1.0 / diff).sum(axis=1) - 1.0  # subtract the diagonal 1s
            corr = w / (1.0 - w * s)
        corr = np.where(np.isfinite(corr), corr, w)
        z = z - corr
        if np.max(np.abs(corr) / (1.0 + np.abs(z))) < tol:
            break
    else:
        raise NonConvergenceError(
            f"Aberth iteration exceeded {max_iter} steps", partial=z
        )
    for _ in range(polish_steps):
        p, dp = polyval_and_deriv(c, z)
        step = np.where(dp != 0, p / np.where(dp == 0, 1, dp), 0.0)
        z = z - step
    return z


def residuals(coeffs, roots) -> np.ndarray:
    """|p(r)| at each root, for residual-bound reporting."""
    p, _ = polyval_and_deriv(np.asarray(coeffs, dtype=complex), np.asarray(roots))
    return np.abs(p)


# ── dense complex polynomials ─────────────────────────────────────────────

@dataclass(frozen=True)
class ComplexPoly:
    """Dense complex polynomial, ascending coefficients.

    Thin immutable wrapper over a coefficient array; arithmetic delegates
    to numpy.polynomial.polynomial.
    """

    coeffs: tuple

    def __post_init__(self):
        c = tuple(complex(x) for x in self.coeffs)
        if len(c) == 0:
            raise ValueError("empty coefficient list")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def asarray(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.asarray())

    def deriv(self) -> "ComplexPoly":
        return ComplexPoly(tuple(np.polynomial.polynomial.polyder(self.asarray())))

    def monic(self) -> "ComplexPoly":
        c = self.asarray()
        lead = c[-1]
        if lead == 0:
            raise ValueError("leading coefficient is zero")
        return ComplexPoly(tuple(c / lead))

    def mul(self, other: "ComplexPoly") -> "ComplexPoly":
        return ComplexPoly(
            tuple(np.polynomial.polynomial.polymul(self.asarray(), other.asarray()))
        )

    def roots(self, **kw) -> np.ndarray:
        return aberth_roots(self.asarray(), **kw)

    def real_coefficients(self, tol: float = 1e-10) -> bool:
        c = self.asarray()
        scale = max(1.0, float(np.max(np.abs(c))))
        return bool(np.max(np.abs(c.imag)) <= tol * scale)


def coefficient_distance(p: ComplexPoly, q: ComplexPoly) -> float:
    """max |coef difference| / max(1, |coef|), after zero-padding to a
    common length.  The relative-agreement metric used by route checks."""
    a, b = p.asarray(), q.asarray()
    n = max(len(a), len(b))
    a = np.pad(a, (0, n - len(a)))
    b = np.pad(b, (0, n - len(b)))
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b)) / scale)


def compose_affine(coeffs, a: complex, b: complex) -> np.ndarray:
    """Coefficients of p(a*x + b) given ascending coeffs of p (exact
    Horner in the polynomial ring)."""
    c = np.asarray(coeffs, dtype=complex)
    out = np.array([c[-1]], dtype=complex)
    lin = np.array([b, a], dtype=complex)
    for k in range(len(c) - 2, -1, -1):
        out = np.polynomial.polynomial.polymul(out, lin)
        out[0] += c[k]
    return out


def match_roots(found, expected):
    """Greedy global-min pairing of two equal-size root sets.

    Returns (perm, max_dist) with found[perm[i]] matched to expected[i].
    Exact for well-separated near-identical sets, which is the only regime
    route/covariance checks operate in.
    """
    found = np.asarray(found, dtype=complex)
    expected = np.asarray(expected, dtype=complex)
    if found.shape != expected.shape:
        raise ValueError("root sets differ in size")
    n = len(found)
    d = np.abs(found[None, :] - expected[:, None])  # d[i, j] = |f_j - e_i|
    perm = np.full(n, -1)
    dm = d.copy()
    maxd = 0.0
    for _ in range(n):
        i, j = np.unravel_index(np.argmin(dm), dm.shape)
        perm[i] = j
        maxd = max(maxd, float(dm[i, j]))
        dm[i, :] = np.inf
        dm[:, j] = np.inf
    return perm, maxd
