"""Weierstrass elliptic functions on the lattice Z + Z*tau.

Everything is evaluated through Jacobi theta series in the nome
q = exp(i*pi*tau), after reducing the argument to the fundamental cell.
Conventions used throughout the package:

* periods are 1 and tau (Im tau > 0), half-period points
  w0/2 = 0, w1/2 = 1/2, w2/2 = tau/2, w3/2 = (1+tau)/2;
* e1 = wp(1/2), e2 = wp(tau/2), e3 = wp((1+tau)/2), so that on the
  imaginary axis tau = i*b the ordering is e1 > e3 > e2 (all real);
* g2 = -4(e1 e2 + e1 e3 + e2 e3), g3 = 4 e1 e2 e3;
* eta1 = 2 zeta(1/2) from the Eisenstein E2 q-series, eta2 from the
  Legendre relation eta1*tau - eta2 = 2*pi*i (never a second series).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError, PoleError

_TWO_PI_I = 2j * np.pi

# Hard cap on theta/Eisenstein series length; hit only for Im tau far below
# anything the package supports (boundary scans stop at Im tau = 0.05).
_MAX_TERMS = 4000


@dataclass(frozen=True)
class LatticeData:
    """Cached constants of the lattice Z + Z*tau."""

    tau: complex
    q: complex                # nome exp(i*pi*tau)
    e1: complex
    e2: complex
    e3: complex
    g2: complex
    g3: complex
    eta1: complex
    eta2: complex
    truncation_tol: float
    pole_guard: float

    @property
    def half_periods(self):
        """(w0/2, w1/2, w2/2, w3/2) = (0, 1/2, tau/2, (1+tau)/2)."""
        return (0.0 + 0.0j, 0.5 + 0.0j, self.tau / 2, (1 + self.tau) / 2)

    @property
    def es(self):
        """(e1, e2, e3) in the package labeling."""
        return (self.e1, self.e2, self.e3)


def _eisenstein_e2(q: complex, tol: float) -> complex:
    """E2(tau) = 1 - 24 sum sigma_1(m) p^m, p = q^2, via the Lambert form
    sum_{k>=1} k p^k / (1 - p^k)."""
    p = q * q
    acc = 0.0 + 0.0j
    pk = 1.0 + 0.0j
    for k in range(1, _MAX_TERMS):
        pk *= p
        term = k * pk / (1.0 - pk)
        acc += term
        if abs(term) < tol * max(1.0, abs(acc)):
            break
    else:
        raise NonConvergenceError("Eisenstein E2 series did not truncate")
    return 1.0 - 24.0 * acc


def _theta1_block(v, q: complex, tol: float, im_bound: float):
    """theta1(v|q) and its first three v-derivatives, vectorized over v.

    ``im_bound`` is an upper bound on |Im v| over the input; it fixes a
    safe series length a priori, while the loop still exits early once the
    worst-case next term is below tol * (accumulated magnitude).
    """
    v = np.asarray(v, dtype=complex)
    th = np.zeros_like(v)
    th1 = np.zeros_like(v)
    th2 = np.zeros_like(v)
    th3 = np.zeros_like(v)
    absq = abs(q)
    if absq >= 1.0:
        raise ValueError("nome |q| >= 1; tau must satisfy Im tau > 0")
    logq = np.log(absq)
    floor = 0.0
    for n in range(_MAX_TERMS):
        a = (2 * n + 1) * np.pi
        coef = 2.0 * (-1) ** n * q ** ((n + 0.5) ** 2)
        s = np.sin(a * v)
        c = np.cos(a * v)
        th += coef * s
        th1 += coef * a * c
        th2 -= coef * a * a * s
        th3 -= coef * a ** 3 * c
        floor = max(floor, float(np.max(np.abs(th))))
        # worst-case magnitude of the NEXT term (third derivative weight)
        nxt = (2 * n + 3) * np.pi
        bound = 2.0 * np.exp(((n + 1.5) ** 2) * logq + nxt * im_bound) * nxt ** 3
        if n >= 1 and bound < tol * max(floor, 1e-300):
            break
    else:
        raise NonConvergenceError("theta1 series did not truncate")
    return th, th1, th2, th3


def _split_lattice_coords(z, tau: complex):
    """Real coordinates (a, b) with z = a + b*tau."""
    z = np.asarray(z, dtype=complex)
    im_tau = tau.imag
    b = z.imag / im_tau
    a = z.real - b * tau.real
    return a, b


def reduce_to_cell(z, tau: complex):
    """Reduce z modulo the lattice: returns (z_red, m, n) with
    z = z_red + m + n*tau and lattice coordinates of z_red in [-1/2, 1/2]."""
    a, b = _split_lattice_coords(z, tau)
    n = np.round(b)
    m = np.round(a)
    z_red = (a - m) + (b - n) * tau
    return z_red, m.astype(int), n.astype(int)


def _nearest_lattice_distance(z_red, tau: complex):
    """Euclidean distance from reduced points to the nearest lattice point."""
    z_red = np.asarray(z_red, dtype=complex)
    cands = np.array(
        [0.0, 1.0, -1.0, tau, -tau, 1 + tau, -1 - tau, 1 - tau, -1 + tau],
        dtype=complex,
    )
    d = np.abs(z_red[..., None] - cands)
    return d.min(axis=-1)


def make_lattice(
    tau: complex,
    truncation_tol: float = 1e-14,
    pole_guard: float = 1e-6,
) -> LatticeData:
    """Build the cached lattice constants for Z + Z*tau.

    Raises ValueError unless Im tau > 0.
    """
    tau = complex(tau)
    if not np.isfinite(tau.real) or not np.isfinite(tau.imag):
        raise ValueError("tau must be finite")
    if tau.imag <= 0:
        raise ValueError(f"Im tau must be positive, got tau = {tau}")
    q = np.exp(1j * np.pi * tau)
    eta1 = (np.pi ** 2 / 3.0) * _eisenstein_e2(q, truncation_tol)
    eta2 = eta1 * tau - _TWO_PI_I

    # e_k by direct wp evaluation at the half periods; wp needs only eta1.
    def _wp_raw(z):
        th, th1, th2, _ = _theta1_block(
            np.asarray(z, dtype=complex), q, truncation_tol,
            im_bound=abs(np.imag(z)),
        )
        return -eta1 - (th2 * th - th1 * th1) / (th * th)

    e1 = complex(_wp_raw(0.5))
    e2 = complex(_wp_raw(tau / 2))
    e3 = complex(_wp_raw((1 + tau) / 2))
    g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3)
    g3 = 4.0 * e1 * e2 * e3
    return LatticeData(
        tau=tau, q=complex(q), e1=e1, e2=e2, e3=e3, g2=g2, g3=g3,
        eta1=complex(eta1), eta2=complex(eta2),
        truncation_tol=truncation_tol, pole_guard=pole_guard,
    )


def _reduced_or_raise(z, L: LatticeData):
    z_red, m, n = reduce_to_cell(z, L.tau)
    dist = _nearest_lattice_distance(z_red, L.tau)
    if np.any(dist < L.pole_guard):
        bad = np.asarray(z, dtype=complex)[np.asarray(dist) < L.pole_guard]
        raise PoleError(
            f"evaluation point within pole guard {L.pole_guard:g} of a "
            f"lattice point (e.g. z = {np.ravel(bad)[0]})"
        )
    return z_red, m, n


def wp(z, L: LatticeData):
    """Weierstrass wp(z) on Z + Z*tau.  Accepts scalars or arrays."""
    scalar = np.isscalar(z) or np.asarray(z).ndim == 0
    z_red, _, _ = _reduced_or_raise(z, L)
    th, th1, th2, _ = _theta1_block(
        z_red, L.q, L.truncation_tol, im_bound=abs(L.tau.imag) / 2,
    )
    out = -L.eta1 - (th2 * th - th1 * th1) / (th * th)
    return complex(out) if scalar else out


def wp_prime(z, L: LatticeData):
    """wp'(z) = -(d^3/dz^3) log theta1(z)."""
    scalar = np.isscalar(z) or np.asarray(z).ndim == 0
    z_red, _, _ = _reduced_or_raise(z, L)
    th, th1, th2, th3 = _theta1_block(
        z_red, L.q, L.truncation_tol, im_bound=abs(L.tau.imag) / 2,
    )
    out = -(th3 * th * th - 3.0 * th2 * th1 * th + 2.0 * th1 ** 3) / th ** 3
    return complex(out) if scalar else out


def wp_second(z, L: LatticeData):
    """wp''(z) = 6 wp(z)^2 - g2/2 (the derivative of the quartic identity)."""
    p = wp(z, L)
    return 6.0 * p * p - L.g2 / 2.0


def zeta_w(z, L: LatticeData):
    """Weierstrass zeta(z), by quasi-periodic reduction to the cell plus the
    theta logarithmic derivative: zeta(z) = eta1 z + theta1'(z)/theta1(z) for
    reduced z, then zeta(z + m + n*tau) = zeta(z) + m*eta1 + n*eta2."""
    scalar = np.isscalar(z) or np.asarray(z).ndim == 0
    z_red, m, n = _reduced_or_raise(z, L)
    th, th1, _, _ = _theta1_block(
        z_red, L.q, L.truncation_tol, im_bound=abs(L.tau.imag) / 2,
    )
    out = L.eta1 * z_red + th1 / th + m * L.eta1 + n * L.eta2
    return complex(out) if scalar else out


def wp_half_shift(z, L: LatticeData, k: int):
    """wp(z + w_k/2) through the algebraic half-period identity

        wp(z + w_k/2) = e_k + (e_k - e_k')(e_k - e_k'') / (wp(z) - e_k),

    where {k, k', k''} = {1, 2, 3}.  Exact counterpart of evaluating wp at
    the shifted argument; used as a cross-check of the additive route."""
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2, or 3")
    es = {1: L.e1, 2: L.e2, 3: L.e3}
    ek = es.pop(k)
    ep, epp = es.values()
    return ek + (ek - ep) * (ek - epp) / (wp(z, L) - ek)


# ── local series at the singular points ──────────────────────────────────
#
# The spectral module builds Laurent data of wp-polynomials around each
# half period; these two generators provide the base series.  Both follow
# from wp'' = 6 wp^2 - g2/2 acting on the coefficient arrays.

def wp_series_origin(L: LatticeData, mmax: int) -> np.ndarray:
    """Coefficients c[1..mmax] of wp(u) = u^-2 + sum_{m>=1} c[m] u^{2m}.

    c[0] is kept as 0 so the array indexes by m directly.
    """
    c = np.zeros(mmax + 1, dtype=complex)
    if mmax >= 1:
        c[1] = L.g2 / 20.0
    if mmax >= 2:
        c[2] = L.g3 / 28.0
    for n in range(3, mmax + 1):
        s = sum(c[i] * c[n - 1 - i] for i in range(1, n - 1))
        c[n] = 3.0 * s / ((2 * n + 3) * (n - 2))
    return c


def wp_series_half(L: LatticeData, k: int, jmax: int) -> np.ndarray:
    """Taylor coefficients h[0..jmax] of wp(w_k/2 + u) (odd entries vanish).

    Seeded by h0 = e_k, h1 = 0 (half periods are critical points); higher
    coefficients follow from (j+2)(j+1) h_{j+2} = 6 (h*h)_j - (g2/2) δ_{j0}.
    """
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2, or 3")
    h = np.zeros(jmax + 1, dtype=complex)
    h[0] = {1: L.e1, 2: L.e2, 3: L.e3}[k]
    for j in range(0, jmax - 1):
        conv = sum(h[i] * h[j - i] for i in range(0, j + 1))
        rhs = 6.0 * conv - (L.g2 / 2.0 if j == 0 else 0.0)
        h[j + 2] = rhs / ((j + 2) * (j + 1))
    return h
