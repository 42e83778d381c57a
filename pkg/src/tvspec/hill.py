"""Monodromy and stability analysis for the elliptic Hill problem.

The second-order problem y'' = (V + E) y on the torus, with
V(z) = sum_k n_k(n_k+1) wp(z + w_k/2), is integrated along the two
fundamental loops from the common interior base point z_b = 1/4 + tau/4.
With the state (y, dy/dz) the transfer matrices M1 (period 1) and M2
(period tau) have unit determinant and commute; their traces Delta_j are
entire in E.  On top of the raw integrator this module provides:

* Floquet exponents paired through the eigenvector frame of M1;
* real-axis stability sets {E : Delta real, |Delta| <= 2} with
  bisection-refined band edges;
* a two-torus intersection probe (the same potential transported to the
  lattice of -1/tau shares only the spectral-curve branch points);
* pointwise unitarity tests of the monodromy representation and the
  periodicity of the induced developing-map density G = |y1|^2 + |y2|^2;
* a circle-mean check that Delta satisfies the analytic mean value
  property in E.

Integration is a hand-rolled Dormand-Prince 5(4) pair with an embedded
error estimate, vectorized over a batch of energies that share step
control (batch results agree with one-at-a-time integration within the
local tolerances; all quantities compared against them carry much looser
thresholds).  The potential along each loop is compressed adaptively into
a Chebyshev interpolant so the theta-series kernel is not re-evaluated at
every stage.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as ncheb

from .elliptic import LatticeData, _nearest_lattice_distance, make_lattice, wp
from .errors import CheckError, NonConvergenceError, PoleError
from .poly import ComplexPoly
from .spectral import q_via_phi_ansatz, roots_and_classify

__all__ = [
    "GLEProblem",
    "MonodromyRecord",
    "Band",
    "BandStructure",
    "UnitarityRecord",
    "make_problem",
    "monodromy",
    "trace_on_grid",
    "commutator_check",
    "floquet_pair",
    "stability_set_1d",
    "dual_torus_exclusion",
    "unitarity_probe",
    "unitarity_grid",
    "developing_map_periodicity",
    "delta_circle_mean",
    "at_root",
]

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_ERR = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)


def _dopri_integrate(rhs, y0, t0, t1, rtol, atol, max_steps=200_000):
    """Adaptive 5(4) embedded pair; shared step control over the whole
    (arbitrarily shaped) complex state array."""
    t = float(t0)
    span = float(t1) - t
    y = np.array(y0, dtype=complex)
    h = 0.01 * span
    k = [None] * 7
    k[0] = rhs(t, y)
    for _ in range(max_steps):
        if t >= t1:
            return y
        h = min(h, t1 - t)
        if h < 1e-12 * span:
            raise NonConvergenceError(f"step size underflow at t={t:.6g}")
        for i in range(1, 7):
            yi = y + h * sum(_A[i][j] * k[j] for j in range(i))
            k[i] = rhs(t + _C[i] * h, yi)
        ynew = y + h * sum(_B5[j] * k[j] for j in range(7))
        err_vec = h * sum(_ERR[j] * k[j] for j in range(7))
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(ynew))
        err = float(np.max(np.abs(err_vec) / scale))
        if err <= 1.0:
            t += h
            y = ynew
            k[0] = k[6]  # FSAL
        else:
            k0 = k[0]
            k = [None] * 7
            k[0] = k0
        fac = 0.9 * err ** -0.2 if err > 0 else 5.0
        h *= min(5.0, max(0.2, fac))
    raise NonConvergenceError(f"integration exceeded {max_steps} steps")


# ── potential along a loop ────────────────────────────────────────────────

def _potential_direct(L: LatticeData, n):
    hp = L.half_periods
    active = [(k, n[k] * (n[k] + 1)) for k in range(4) if n[k] >= 1]

    def v(z):
        total = 0.0 + 0.0j
        for k, c in active:
            total = total + c * wp(np.asarray(z) + hp[k], L)
        return total

    return v


def _check_clearance(L: LatticeData, n, z0, omega, min_clearance):
    ts = np.linspace(0.0, 1.0, 201)
    zs = z0 + ts * omega
    worst = np.inf
    for k in range(4):
        if n[k] == 0:
            continue
        d = _nearest_lattice_distance(zs - L.half_periods[k], L.tau)
        worst = min(worst, float(np.min(d)))
    if worst < min_clearance:
        raise PoleError(
            f"integration path approaches a potential pole "
            f"(clearance {worst:.3g} < {min_clearance:g})"
        )
    return worst


class PathPotential:
    """V along z0 + t*omega for t in [0, 1], optionally compressed into an
    adaptive Chebyshev interpolant (degree doubled until an off-node check
    passes at compress_tol relative to the potential scale)."""

    def __init__(
        self,
        L: LatticeData,
        n,
        z0: complex,
        omega: complex,
        compress: bool = True,
        compress_tol: float = 1e-13,
        min_clearance: float = 0.03,
    ):
        self.z0 = complex(z0)
        self.omega = complex(omega)
        self.clearance = _check_clearance(L, n, self.z0, self.omega, min_clearance)
        direct = _potential_direct(L, n)
        self._direct = lambda t: direct(self.z0 + np.asarray(t) * self.omega)
        self.cheb = None
        self.compress_error = None
        if compress:
            ts = (np.arange(401) + 0.5) / 401
            ref = self._direct(ts)
            floor = compress_tol * (1.0 + float(np.max(np.abs(ref))))
            deg = 64
            while deg <= 2048:
                cand = ncheb.Chebyshev.interpolate(self._direct, deg, domain=[0.0, 1.0])
                err = float(np.max(np.abs(cand(ts) - ref)))
                if err <= floor:
                    self.cheb = cand
                    self.compress_error = err
                    break
                deg *= 2

    def __call__(self, t):
        # omega is always a lattice period, so folding t mod 1 is exact
        # and keeps the interpolant inside its domain
        t = np.asarray(t, dtype=float)
        t = t - np.floor(t)
        if self.cheb is not None:
            return self.cheb(t)
        return self._direct(t)


@dataclass
class GLEProblem:
    """A multiplicity tuple on a fixed lattice, prepared for integration
    along both fundamental loops from the base point z_base."""

    L: LatticeData
    n: tuple
    z_base: complex
    rtol: float
    atol: float
    potentials: dict = field(repr=False)
    genus_degree: int = 0


def make_problem(
    L: LatticeData,
    n,
    z_base: complex | None = None,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    compress: bool = True,
    compress_tol: float = 1e-13,
    min_clearance: float = 0.03,
) -> GLEProblem:
    """Prepare loop potentials (with pole-clearance checks) for the tuple
    ``n`` on lattice ``L``.  The default base point 1/4 + tau/4 sits midway
    between the pole lines of both loop directions."""
    n = tuple(int(x) for x in n)
    if z_base is None:
        z_base = 0.25 + 0.25 * L.tau
    pots = {
        "1": PathPotential(
            L, n, z_base, 1.0, compress=compress,
            compress_tol=compress_tol, min_clearance=min_clearance,
        ),
        "tau": PathPotential(
            L, n, z_base, L.tau, compress=compress,
            compress_tol=compress_tol, min_clearance=min_clearance,
        ),
    }
    return GLEProblem(
        L=L, n=n, z_base=complex(z_base), rtol=rtol, atol=atol, potentials=pots
    )


# ── transfer matrices ─────────────────────────────────────────────────────

def _transfer_batch(vfun, omega, e_values, t_end, rtol, atol):
    """Fundamental matrices Y(t_end) with Y(0)=I for a batch of energies;
    state rows are (y, dy/dz)."""
    e = np.atleast_1d(np.asarray(e_values, dtype=complex))
    y0 = np.broadcast_to(np.eye(2, dtype=complex), (len(e), 2, 2)).copy()

    def rhs(t, y):
        v = vfun(t)
        out = np.empty_like(y)
        out[:, 0, :] = omega * y[:, 1, :]
        out[:, 1, :] = (omega * (v + e))[:, None] * y[:, 0, :]
        return out

    return _dopri_integrate(rhs, y0, 0.0, t_end, rtol, atol)


@dataclass(frozen=True)
class MonodromyRecord:
    """Transfer matrix over one fundamental loop at one energy."""

    E: complex
    direction: str
    matrix: np.ndarray = field(repr=False)
    delta: complex
    det_error: float
    theta: complex   # arccos(delta/2)/pi, principal branch (Re in [0,1])


def _record(e, direction, m) -> MonodromyRecord:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    det_error = abs(det - 1.0)
    # det = 1 is exact; the attainable accuracy degrades with the square of
    # the matrix norm once the flow is hyperbolic (cancellation), so the
    # hard failure threshold is scaled while det_error stays absolute
    scale = 1.0 + float(np.sum(np.abs(m) ** 2))
    if det_error > 1e-8 * scale:
        raise CheckError(f"transfer matrix determinant off by {det_error:.2e}")
    delta = m[0, 0] + m[1, 1]
    theta = cmath.acos(delta / 2.0) / cmath.pi
    return MonodromyRecord(
        E=complex(e), direction=direction, matrix=m,
        delta=complex(delta), det_error=float(det_error), theta=theta,
    )


def monodromy(prob: GLEProblem, e, direction: str = "1") -> MonodromyRecord:
    """Transfer matrix over one loop ("1" or "tau") at energy ``e``."""
    pot = prob.potentials[direction]
    m = _transfer_batch(pot, pot.omega, [e], 1.0, prob.rtol, prob.atol)[0]
    return _record(e, direction, m)


def trace_on_grid(prob: GLEProblem, e_values, direction: str = "1"):
    """Traces Delta(E) over a batch of energies (one shared integration)."""
    pot = prob.potentials[direction]
    ms = _transfer_batch(pot, pot.omega, e_values, 1.0, prob.rtol, prob.atol)
    dets = ms[:, 0, 0] * ms[:, 1, 1] - ms[:, 0, 1] * ms[:, 1, 0]
    scale = 1.0 + np.sum(np.abs(ms) ** 2, axis=(1, 2))
    worst = float(np.max(np.abs(dets - 1.0) / scale))
    if worst > 1e-8:
        raise CheckError(f"batch determinant drift {worst:.2e}")
    return ms[:, 0, 0] + ms[:, 1, 1]


def commutator_check(prob: GLEProblem, e, tol: float = 1e-6) -> dict:
    """The two loop matrices at a common base point must commute."""
    r1 = monodromy(prob, e, "1")
    r2 = monodromy(prob, e, "tau")
    comm = r1.matrix @ r2.matrix - r2.matrix @ r1.matrix
    scale = 1.0 + float(
        np.linalg.norm(r1.matrix, 2) * np.linalg.norm(r2.matrix, 2)
    )
    norm = float(np.linalg.norm(comm, 2))
    return {
        "E": complex(e),
        "commutator_norm": norm,
        "relative": norm / scale,
        "passed": norm / scale <= tol,
        "records": (r1, r2),
    }


def floquet_pair(prob: GLEProblem, e, parabolic_tol: float = 1e-8) -> dict:
    """Floquet exponents (theta1, theta2) of one joint eigensolution:
    y(z+1) = exp(i pi theta1) y, y(z+tau) = exp(i pi theta2) y.  The pair
    is fixed by diagonalizing M1 and reading M2 in that eigenframe; it is
    defined up to joint sign and even integer shifts.  Refuses within
    parabolic_tol of Delta1 = +-2 where the eigenframe degenerates."""
    r1 = monodromy(prob, e, "1")
    r2 = monodromy(prob, e, "tau")
    d1 = r1.delta
    if abs(d1 * d1 - 4.0) <= parabolic_tol * (1.0 + abs(d1) ** 2):
        raise CheckError(
            f"Delta1 within {parabolic_tol:g} of a parabolic point; "
            "eigenvector frame is unreliable"
        )
    w, v = np.linalg.eig(r1.matrix)
    d2mat = np.linalg.solve(v, r2.matrix @ v)
    off = max(abs(d2mat[0, 1]), abs(d2mat[1, 0]))
    scale = 1.0 + float(np.linalg.norm(r2.matrix, 2))
    if off > 1e-6 * scale:
        raise CheckError(
            f"M2 fails to diagonalize in the M1 eigenframe (off {off:.2e})"
        )
    theta1 = cmath.log(w[0]) / (1j * cmath.pi)
    theta2 = cmath.log(d2mat[0, 0]) / (1j * cmath.pi)
    return {
        "E": complex(e),
        "theta1": theta1,
        "theta2": theta2,
        "multipliers": (complex(w[0]), complex(d2mat[0, 0])),
        "records": (r1, r2),
    }


# ── stability bands on the real axis ──────────────────────────────────────

@dataclass(frozen=True)
class Band:
    lo: float
    hi: float
    open_left: bool   # True: band continues past the grid edge
    open_right: bool


@dataclass(frozen=True)
class BandStructure:
    direction: str
    e_min: float
    e_max: float
    bands: tuple
    max_im_delta: float
    edge_tol: float

    @property
    def finite_edges(self) -> tuple:
        out = []
        for b in self.bands:
            if not b.open_left:
                out.append(b.lo)
            if not b.open_right:
                out.append(b.hi)
        return tuple(sorted(out))


def _refine_edge(delta_at, e_out, e_in, tol):
    """Bisect toward the |Re Delta| = 2 crossing bracketed by a point
    outside the band (e_out) and one inside (e_in).  Orientation comes
    from the roles, not from re-sampled signs, so an edge that sits on a
    grid point (trace equal to +-2 within integrator noise) still
    converges to that point instead of drifting across the cell."""
    for _ in range(200):
        if abs(e_in - e_out) <= tol:
            break
        mid = 0.5 * (e_out + e_in)
        if abs(delta_at(mid).real) <= 2.0:
            e_in = mid
        else:
            e_out = mid
    return 0.5 * (e_out + e_in)


def stability_set_1d(
    prob: GLEProblem,
    e_min: float,
    e_max: float,
    num: int = 801,
    direction: str = "1",
    edge_tol: float = 1e-8,
    im_tol: float = 1e-6,
) -> BandStructure:
    """Real-axis stability set {E : |Re Delta(E)| <= 2} with bisection-
    refined band edges.  Delta is checked to be real (relative im_tol) on
    the whole grid; bands truncated by the grid are flagged open.  Bands
    narrower than the grid spacing can be missed; choose num accordingly."""
    grid = np.linspace(float(e_min), float(e_max), int(num))
    deltas = trace_on_grid(prob, grid, direction)
    max_im = float(np.max(np.abs(deltas.imag) / (1.0 + np.abs(deltas))))
    if max_im > im_tol:
        raise CheckError(
            f"Delta is not real on the grid (relative imag {max_im:.2e}); "
            "the real-axis band picture does not apply"
        )
    inside = np.abs(deltas.real) <= 2.0

    pot = prob.potentials[direction]

    def delta_at(e):
        m = _transfer_batch(pot, pot.omega, [e], 1.0, prob.rtol, prob.atol)[0]
        return m[0, 0] + m[1, 1]

    bands = []
    i = 0
    while i < len(grid):
        if not inside[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(grid) and inside[j + 1]:
            j += 1
        open_left = i == 0
        open_right = j == len(grid) - 1
        lo = grid[i] if open_left else _refine_edge(
            delta_at, grid[i - 1], grid[i], edge_tol
        )
        hi = grid[j] if open_right else _refine_edge(
            delta_at, grid[j + 1], grid[j], edge_tol
        )
        if hi < lo:
            lo, hi = hi, lo
        bands.append(Band(float(lo), float(hi), open_left, open_right))
        i = j + 1
    return BandStructure(
        direction=direction,
        e_min=float(e_min),
        e_max=float(e_max),
        bands=tuple(bands),
        max_im_delta=max_im,
        edge_tol=edge_tol,
    )


def dual_torus_exclusion(
    n,
    tau: complex,
    e_min: float,
    e_max: float,
    num: int = 801,
    qpoly: ComplexPoly | None = None,
    root_tol: float = 1e-4,
    truncation_tol: float = 1e-14,
    **problem_kw,
) -> dict:
    """Intersect the period-1 stability set with its transport to the
    lattice of -1/tau (middle multiplicities swapped, energies scaled by
    tau^2).  The overlap should shrink to the spectral-curve branch
    points: every intersection piece must lie within root_tol (scaled) of
    a root of Q.  Pass the spectral polynomial as ``qpoly``."""
    n = tuple(int(x) for x in n)
    tau = complex(tau)
    L = make_lattice(tau, truncation_tol=truncation_tol)
    prob = make_problem(L, n, **problem_kw)
    bands = stability_set_1d(prob, e_min, e_max, num=num)

    tau2 = tau * tau
    if abs(tau2.imag) > 1e-12 * abs(tau2):
        raise CheckError("tau^2 must be real for the dual-axis comparison")
    t2 = tau2.real

    n_swap = (n[0], n[2], n[1], n[3])
    Ld = make_lattice(-1.0 / tau, truncation_tol=truncation_tol)
    prob_d = make_problem(Ld, n_swap, **problem_kw)
    lo_d, hi_d = sorted((t2 * e_min, t2 * e_max))
    bands_d = stability_set_1d(prob_d, lo_d, hi_d, num=num)

    mapped = []
    for b in bands_d.bands:
        lo, hi = sorted((b.lo / t2, b.hi / t2))
        ol, orr = (b.open_right, b.open_left) if t2 < 0 else (b.open_left, b.open_right)
        mapped.append(Band(lo, hi, ol, orr))
    mapped.sort(key=lambda b: b.lo)

    pieces = []
    for a in bands.bands:
        for b in mapped:
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            if lo <= hi:
                pieces.append((float(lo), float(hi)))

    if qpoly is None:
        qpoly = q_via_phi_ansatz(L, n)
    roots = np.asarray(roots_and_classify(qpoly).roots)
    real_roots = roots.real
    scale = 1.0 + float(np.max(np.abs(roots)))
    distances = []
    for lo, hi in pieces:
        d = np.min(np.maximum(0.0, np.maximum(real_roots - hi, lo - real_roots)))
        distances.append(float(d))
    passed = all(d <= root_tol * scale for d in distances)
    return {
        "n": n,
        "tau": tau,
        "bands": bands,
        "dual_bands_mapped": tuple(mapped),
        "pieces": tuple(pieces),
        "piece_root_distances": tuple(distances),
        "roots": tuple(roots.tolist()),
        "root_tol": root_tol,
        "passed": passed,
    }


# ── unitarity of the monodromy representation ─────────────────────────────

def at_root(qpoly: ComplexPoly, e, factor: float = 1e-4) -> bool:
    """Whether |Q(E)| is small enough to count E as a branch point."""
    return abs(qpoly(complex(e))) <= factor * (1.0 + abs(e)) ** qpoly.degree


@dataclass(frozen=True)
class UnitarityRecord:
    E: complex
    delta1: complex
    delta2: complex
    at_root: bool
    unitary: bool
    commutator: float


def unitarity_probe(
    prob: GLEProblem,
    e,
    qpoly: ComplexPoly,
    tol_im: float = 1e-6,
) -> UnitarityRecord:
    """The monodromy pair is unitarizable exactly when both traces are
    real in [-2, 2]; branch points (where the pair degenerates) are
    excluded via ``qpoly``."""
    chk = commutator_check(prob, e)
    r1, r2 = chk["records"]
    root_flag = at_root(qpoly, e)

    def good(delta):
        return (
            abs(delta.imag) <= tol_im * (1.0 + abs(delta))
            and abs(delta.real) <= 2.0 + tol_im
        )

    unit = good(r1.delta) and good(r2.delta) and not root_flag
    return UnitarityRecord(
        E=complex(e),
        delta1=r1.delta,
        delta2=r2.delta,
        at_root=root_flag,
        unitary=unit,
        commutator=chk["relative"],
    )


def unitarity_grid(
    prob: GLEProblem,
    qpoly: ComplexPoly,
    re_values,
    im_values,
    tol_im: float = 1e-6,
) -> dict:
    """Vectorized unitarity classification over a rectangular E-grid.
    Returns the trace arrays and boolean masks (shape len(im) x len(re))."""
    re_values = np.asarray(re_values, dtype=float)
    im_values = np.asarray(im_values, dtype=float)
    ee = (re_values[None, :] + 1j * im_values[:, None]).ravel()
    d1 = trace_on_grid(prob, ee, "1")
    d2 = trace_on_grid(prob, ee, "tau")
    shape = (len(im_values), len(re_values))
    d1 = d1.reshape(shape)
    d2 = d2.reshape(shape)
    qv = np.abs(qpoly(ee.reshape(shape)))
    rootmask = qv <= 1e-4 * (1.0 + np.abs(ee.reshape(shape))) ** qpoly.degree

    def good(d):
        return (np.abs(d.imag) <= tol_im * (1.0 + np.abs(d))) & (
            np.abs(d.real) <= 2.0 + tol_im
        )

    unitary = good(d1) & good(d2) & ~rootmask
    return {
        "re_values": re_values,
        "im_values": im_values,
        "delta1": d1,
        "delta2": d2,
        "at_root": rootmask,
        "unitary": unitary,
        "tol_im": tol_im,
    }


# ── developing map periodicity ────────────────────────────────────────────

def developing_map_periodicity(
    prob: GLEProblem,
    e,
    qpoly: ComplexPoly,
    samples=(0.05, 0.40, 0.50, 0.60, 0.90),
    tol: float = 1e-6,
) -> dict:
    """For unitary monodromy the density G = |y1|^2 + |y2|^2 built from
    the joint Floquet pair is invariant under both lattice shifts.  The
    invariance is verified by honest re-integration along extended and
    bent paths (never by applying the Floquet relation itself).  Sample
    offsets must stay away from 1/4 and 3/4 where the bent path would
    graze pole lines.  Refuses at branch points and at non-unitary
    energies, where no invariant density exists."""
    for s in samples:
        if abs(s - 0.25) < 0.1 or abs(s - 0.75) < 0.1:
            raise ValueError("sample offsets must avoid 1/4, 3/4 (+-0.1)")
    if at_root(qpoly, e):
        raise CheckError("E is a branch point; the Floquet pair degenerates")
    probe = unitarity_probe(prob, e, qpoly)
    if not probe.unitary:
        raise CheckError(
            f"monodromy not unitary at E={e} "
            f"(Delta1={probe.delta1:.4g}, Delta2={probe.delta2:.4g})"
        )

    fp = floquet_pair(prob, e)
    r1, _ = fp["records"]
    _, v = np.linalg.eig(r1.matrix)

    L, n = prob.L, prob.n
    z_b = prob.z_base
    pot1 = prob.potentials["1"]
    ee = [e]
    rt, at = prob.rtol, prob.atol

    worst1 = 0.0
    worst_tau = 0.0
    for s in samples:
        y_s = _transfer_batch(pot1, 1.0, ee, s, rt, at)[0]
        y_s1 = _transfer_batch(pot1, 1.0, ee, 1.0 + s, rt, at)[0]
        bent = PathPotential(L, n, z_b + s, L.tau, compress=False)
        t_s = _transfer_batch(bent, L.tau, ee, 1.0, rt, at)[0]

        u = y_s @ v          # columns: Floquet states at z_b + s
        u1 = y_s1 @ v        # at z_b + s + 1
        ut = t_s @ (y_s @ v)  # at z_b + s + tau
        g = np.sum(np.abs(u[0, :]) ** 2)
        g1 = np.sum(np.abs(u1[0, :]) ** 2)
        gt = np.sum(np.abs(ut[0, :]) ** 2)
        ref = max(g, g1, gt)
        worst1 = max(worst1, abs(g1 - g) / ref)
        worst_tau = max(worst_tau, abs(gt - g) / ref)

    return {
        "E": complex(e),
        "samples": tuple(samples),
        "max_shift1_error": worst1,
        "max_shift_tau_error": worst_tau,
        "tol": tol,
        "passed": worst1 <= tol and worst_tau <= tol,
    }


def delta_circle_mean(
    prob: GLEProblem,
    center,
    radius: float,
    direction: str = "1",
    npts: int = 16,
) -> dict:
    """Mean of Delta over a circle in the E-plane against its center
    value: the analytic mean value property, a cheap probe that the trace
    is entire (no branching or poles inside the circle)."""
    angles = 2.0 * np.pi * np.arange(npts) / npts
    ring = complex(center) + radius * np.exp(1j * angles)
    dv = trace_on_grid(prob, ring, direction)
    dc = trace_on_grid(prob, [center], direction)[0]
    mean = complex(np.mean(dv))
    err = abs(mean - dc) / (1.0 + abs(dc))
    return {
        "center": complex(center),
        "radius": float(radius),
        "npts": int(npts),
        "mean": mean,
        "center_value": complex(dc),
        "relative_error": float(err),
    }
