"""Finite-difference eigenvalue oracle.

Second-order central differences with Dirichlet walls, in 1D (symmetric
tridiagonal, solved with LAPACK through scipy) and 2D (5-point stencil,
lowest eigenvalues by ARPACK in shift-invert mode). Nothing here knows about quadratic
algebras; it only discretizes ``-(hbar^2/2m) Laplacian + V``.

Grids may be stretched with ``x = L sinh(s t)/sinh(s)`` (``t`` uniform in
``[-1, 1]`` or ``[0, 1]``), which keeps the scheme second order while
concentrating points where a Coulomb-like potential is steep.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.linalg import LinAlgError, eigh, eigh_tridiagonal
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh, splu

from .systems import TildeParams

__all__ = [
    "GridSpec",
    "PotentialSpec",
    "OracleError",
    "EigenResult",
    "MatchReport",
    "axis_points",
    "solve_1d",
    "solve_2d",
    "richardson",
    "observed_order",
    "compare_spectra",
    "distinct_levels",
    "case_potential",
    "harmonic_grid",
    "oscillator_grid",
    "coulomb_grid",
]

COORDINATES = ("cartesian-1d", "cartesian-2d", "radial-half-line")
# interior points of the default 1D grid; 1999 makes halving h exact (500, 1000, 2000 cells)
DEFAULT_POINTS_1D = 1999


class OracleError(RuntimeError):
    """The eigensolver failed to produce the requested eigenvalues."""


@dataclass(frozen=True)
class GridSpec:
    """Dirichlet grid: ``points`` interior nodes per axis between the bounds.

    ``stretch = 0`` gives a uniform grid; ``stretch > 0`` applies the sinh map
    about the lower bound (half-line axes, lower bound 0) or about the
    midpoint (full axes). ``cell_average = q > 0`` replaces the nodal
    potential by its mean over the node's dual cell (``q x q`` Gauss-Legendre
    points), which restores second order for integrable point singularities
    such as ``1/r`` at a cell corner.
    """

    bounds: tuple
    points: int
    coordinates: str = "cartesian-1d"
    boundary: str = "dirichlet"
    stretch: float = 0.0
    half_axes: tuple = ()
    cell_average: int = 0

    def __post_init__(self):
        if self.coordinates not in COORDINATES:
            raise ValueError(f"coordinates must be one of {COORDINATES}")
        if self.boundary != "dirichlet":
            raise ValueError("only Dirichlet boundaries are supported")
        if self.points < 16:
            raise ValueError("at least 16 points per axis are required")
        ndim = 2 if self.coordinates == "cartesian-2d" else 1
        b = tuple(tuple(map(float, ax)) for ax in self.bounds)
        if len(b) != ndim or any(len(ax) != 2 or not np.isfinite(ax).all() or ax[1] <= ax[0] for ax in b):
            raise ValueError(f"bounds must be {ndim} finite increasing (lo, hi) pairs")
        object.__setattr__(self, "bounds", b)
        if self.coordinates == "radial-half-line" and b[0][0] != 0.0:
            raise ValueError("a radial half-line grid starts at 0")

    @property
    def ndim(self) -> int:
        return len(self.bounds)

    def with_points(self, points: int) -> "GridSpec":
        return replace(self, points=points)


def axis_points(lo: float, hi: float, n: int, stretch: float = 0.0, half: bool = False):
    """Interior nodes and the two boundary nodes of one axis.

    ``half`` places the stretching centre at ``lo`` instead of the midpoint.
    """
    t = np.linspace(0.0, 1.0, n + 2) if half else np.linspace(-1.0, 1.0, n + 2)
    if stretch > 0:
        t = np.sinh(stretch * t) / np.sinh(stretch)
    if half:
        x = lo + (hi - lo) * t
    else:
        x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t
    return x


def _axis_operator(x: np.ndarray):
    """Symmetric stiffness matrix (of ``-d^2/dx^2``) and node weights.

    On a nonuniform grid the scheme reads ``K u = lambda W u`` with ``W``
    the dual cell widths; on a uniform grid it reduces to the usual
    ``(2, -1, -1)/h^2`` stencil.
    """
    dx = np.diff(x)
    w = 0.5 * (dx[:-1] + dx[1:])
    diag = 1.0 / dx[:-1] + 1.0 / dx[1:]
    off = -1.0 / dx[1:-1]
    return diag, off, w


@dataclass(frozen=True)
class PotentialSpec:
    """Potential ``V`` (vectorized over coordinates), mass and hbar."""

    V: Callable
    mass: float = 1.0
    hbar: float = 1.0
    label: str = ""


@dataclass(frozen=True)
class EigenResult:
    """Ascending eigenvalues with solver metadata."""

    values: np.ndarray
    converged: bool = True
    iterations: int = 0
    meta: dict = field(default_factory=dict)


def solve_1d(pot: PotentialSpec, grid: GridSpec, count: int) -> EigenResult:
    """Lowest ``count`` eigenvalues of the 1D (or radial) Hamiltonian."""
    if grid.ndim != 1:
        raise ValueError("solve_1d needs a one-dimensional grid")
    if count > grid.points // 4:
        raise ValueError("count must not exceed points/4")
    (lo, hi), = grid.bounds
    half = grid.coordinates == "radial-half-line" or 0 in grid.half_axes
    x = axis_points(lo, hi, grid.points, grid.stretch, half)
    diag, off, w = _axis_operator(x)
    xi = x[1:-1]
    V = np.asarray(pot.V(xi), dtype=float)
    if not np.all(np.isfinite(V)):
        raise OracleError("potential is not finite on the grid")
    kin = pot.hbar**2 / (2 * pot.mass)
    s = 1.0 / np.sqrt(w)
    d = kin * diag / w + V
    e = kin * off * s[:-1] * s[1:]
    try:
        vals = eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, count - 1))
    except LinAlgError as exc:
        raise OracleError(f"tridiagonal eigensolver failed: {exc}") from exc
    return EigenResult(np.sort(vals), meta={"h_min": float(np.min(np.diff(x)))})


def _cell_average(V, x, y, q):
    """Mean of ``V`` over the dual cells (midpoint to midpoint) of interior nodes."""
    t, wt = np.polynomial.legendre.leggauss(q)
    t, wt = 0.5 * (t + 1), 0.5 * wt
    mx, my = 0.5 * (x[:-1] + x[1:]), 0.5 * (y[:-1] + y[1:])
    xs = mx[:-1, None] + np.diff(mx)[:, None] * t
    ys = my[:-1, None] + np.diff(my)[:, None] * t
    out = np.zeros((xs.shape[0], ys.shape[0]))
    for a in range(q):
        for b in range(q):
            X, Y = np.meshgrid(xs[:, a], ys[:, b], indexing="ij")
            out += wt[a] * wt[b] * np.asarray(V(X, Y), dtype=float)
    return out


def _hamiltonian_2d(pot: PotentialSpec, grid: GridSpec):
    (x0, x1), (y0, y1) = grid.bounds
    x = axis_points(x0, x1, grid.points, grid.stretch, 0 in grid.half_axes)
    y = axis_points(y0, y1, grid.points, grid.stretch, 1 in grid.half_axes)
    dx, ox, wx = _axis_operator(x)
    dy, oy, wy = _axis_operator(y)
    kin = pot.hbar**2 / (2 * pot.mass)
    sx, sy = 1 / np.sqrt(wx), 1 / np.sqrt(wy)
    Kx = sp.diags([ox * sx[:-1] * sx[1:], dx / wx, ox * sx[:-1] * sx[1:]], [-1, 0, 1])
    Ky = sp.diags([oy * sy[:-1] * sy[1:], dy / wy, oy * sy[:-1] * sy[1:]], [-1, 0, 1])
    Ix, Iy = sp.identity(x.size - 2), sp.identity(y.size - 2)
    if grid.cell_average:
        V = _cell_average(pot.V, x, y, grid.cell_average)
    else:
        X, Y = np.meshgrid(x[1:-1], y[1:-1], indexing="ij")
        V = np.asarray(pot.V(X, Y), dtype=float)
    if not np.all(np.isfinite(V)):
        raise OracleError("potential is not finite on the grid")
    H = kin * (sp.kron(Kx, Iy) + sp.kron(Ix, Ky)) + sp.diags(V.ravel())
    return sp.csc_matrix(H), V


def solve_2d(pot: PotentialSpec, grid: GridSpec, count: int, shift: float | None = None,
             guard: int = 2, tol: float = 1e-10, seed: int = 0) -> EigenResult:
    """Lowest ``count`` eigenvalues of the 2D Hamiltonian.

    ARPACK Lanczos in shift-invert mode for the ``count + guard``
    eigenvalues nearest ``shift``; the inverse is applied through a sparse
    LU factorization with a minimum-degree ordering. The default shift sits
    a quarter of the wanted spread below the ground level of a 40 x 40
    version of the grid (solved densely), so every wanted level lies close
    to it. Starting vectors come from a fixed-seed generator, so results
    are reproducible.
    """
    if grid.ndim != 2:
        raise ValueError("solve_2d needs a two-dimensional grid")
    if grid.points**2 > 250_000:
        raise ValueError("grid exceeds 250 000 points")
    H, _ = _hamiltonian_2d(pot, grid)
    n = H.shape[0]
    k = min(count + guard, n - 2)
    if k < count:
        raise ValueError("grid too small for the requested count")
    if shift is None:
        Hc, _ = _hamiltonian_2d(pot, grid.with_points(min(grid.points, 40)))
        coarse = eigh(Hc.toarray(), eigvals_only=True,
                      subset_by_index=[0, min(count, Hc.shape[0]) - 1])
        spread = max(coarse[-1] - coarse[0], 1e-12 * max(abs(coarse[0]), 1.0))
        shift = float(coarse[0] - 0.25 * spread)
    lu = splu(sp.csc_matrix(H - shift * sp.identity(n)), permc_spec="MMD_AT_PLUS_A")
    op = LinearOperator((n, n), matvec=lu.solve, dtype=float)
    v0 = np.random.default_rng(seed).standard_normal(n)
    try:
        vals = eigsh(H, k=k, sigma=shift, OPinv=op, which="LM", tol=tol, v0=v0,
                     return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        return EigenResult(np.sort(exc.eigenvalues)[:count], False, meta={"shift": shift})
    return EigenResult(np.sort(vals)[:count], True, meta={"shift": shift})


def richardson(coarse, fine, order: float = 2.0, ratio: float = 2.0):
    """Eliminate the leading ``h**order`` error from two grid results."""
    coarse, fine = np.asarray(coarse, float), np.asarray(fine, float)
    f = ratio**order
    return (f * fine - coarse) / (f - 1)


def observed_order(e1, e2, e3, ratio: float = 2.0):
    """Convergence order from three results on grids refined by ``ratio``."""
    e1, e2, e3 = (np.asarray(v, float) for v in (e1, e2, e3))
    return np.log(np.abs(e1 - e2) / np.abs(e2 - e3)) / np.log(ratio)


@dataclass(frozen=True)
class MatchReport:
    pairs: list
    rel_errors: list
    unmatched_algebraic: list
    unmatched_numeric: list

    @property
    def max_error(self) -> float:
        return max(self.rel_errors) if self.rel_errors else 0.0

    @property
    def all_matched(self) -> bool:
        return not self.unmatched_algebraic


def compare_spectra(algebraic: Sequence[float], numeric: Sequence[float], tol: float) -> MatchReport:
    """Greedy one-to-one matching of two ascending lists within ``tol`` relative.

    Each algebraic level, in order, takes the closest still-unused numeric
    level if the relative error ``|a - n| / max(|a|, tiny)`` is within ``tol``.
    """
    used = np.zeros(len(numeric), bool)
    num = np.asarray(numeric, float)
    pairs, errs, lonely = [], [], []
    for a in algebraic:
        if num.size == 0 or used.all():
            lonely.append(float(a))
            continue
        cand = np.where(used, np.inf, np.abs(num - a))
        j = int(np.argmin(cand))
        rel = float(cand[j] / max(abs(a), 1e-300))
        if rel <= tol:
            used[j] = True
            pairs.append((float(a), float(num[j])))
            errs.append(rel)
        else:
            lonely.append(float(a))
    return MatchReport(pairs, errs, lonely, [float(v) for v, u in zip(num, used) if not u])


def distinct_levels(values: Sequence[float], rel_tol: float) -> list[float]:
    """Merge ascending values closer than ``rel_tol`` into their cluster mean."""
    out, cluster = [], []
    for v in sorted(values):
        if cluster and abs(v - cluster[-1]) > rel_tol * max(abs(v), abs(cluster[-1])):
            out.append(float(np.mean(cluster)))
            cluster = []
        cluster.append(v)
    if cluster:
        out.append(float(np.mean(cluster)))
    return out


# --- case potentials ---------------------------------------------------------

def case_potential(case_id: int, tp: TildeParams) -> PotentialSpec:
    """Quasi-Hamiltonian potential of a case, for Cartesian grids."""
    m, w = tp.m, tp.omega

    def inv(mu, s):
        # a vanishing coupling contributes nothing, even where s = 0
        return mu / s if mu != 0 else 0.0 * s

    if case_id == 1:
        def V(x, y):
            return m * w**2 / 2 * (x**2 + y**2) + inv(tp.mu1, 2 * m * x**2) + inv(tp.mu2, 2 * m * y**2)
    elif case_id == 2:
        def V(x, y):
            return m * w**2 / 2 * (4 * x**2 + y**2) + inv(tp.mu, 2 * m * y**2)
    elif case_id == 3:
        def V(x, y):
            r = np.hypot(x, y)
            return tp.k / (2 * np.sqrt(m) * r) + (inv(tp.mu1, r + x) + inv(tp.mu2, r - x)) / (2 * m * r)
    elif case_id == 4:
        def V(x, y):
            r = np.hypot(x, y)
            return (tp.k / (2 * np.sqrt(m) * r) + tp.mu1 / (2 * m**0.25) * np.sqrt(r + x) / r
                    + tp.mu2 / (2 * m**0.25) * np.sqrt(r - x) / r)
    else:
        raise ValueError(f"unknown case {case_id!r}")
    return PotentialSpec(V=V, mass=m, hbar=tp.hbar, label=f"case {case_id}")


def harmonic_grid(mass: float = 1.0, omega: float = 1.0, hbar: float = 1.0,
                  E_max: float = 3.5, points: int = DEFAULT_POINTS_1D) -> GridSpec:
    """Default 1D grid for an oscillator ``m w^2 x^2/2`` resolving levels up to ``E_max``."""
    L = np.sqrt(2 * E_max / (mass * omega**2)) + 6 * np.sqrt(hbar / (mass * omega))
    L = max(L, 10 * np.sqrt(hbar / (mass * omega)))
    return GridSpec(((-L, L),), points)


def oscillator_grid(case_id: int, tp: TildeParams, points: int, E_max: float) -> GridSpec:
    """Grid for the oscillator cases; an axis carrying a ``mu/x^2`` term is a half-line.

    Half-width: the classical turning point at ``E_max`` plus six oscillator
    lengths, so the Dirichlet wall error is far below the stencil error.
    """
    h, m, w = tp.hbar, tp.m, tp.omega
    L = np.sqrt(2 * E_max / (m * w**2)) + 6 * np.sqrt(h / (m * w))
    if case_id == 1:
        halves = tuple(i for i, mu in enumerate((tp.mu1, tp.mu2)) if mu != 0)
        Lx = L
    elif case_id == 2:
        halves = (1,) if tp.mu != 0 else ()
        Lx = L / 2
    else:
        raise ValueError("oscillator grids exist for cases 1 and 2")
    bx = (0.0, Lx) if 0 in halves else (-Lx, Lx)
    by = (0.0, L) if 1 in halves else (-L, L)
    return GridSpec((bx, by), points, "cartesian-2d", half_axes=halves)


def coulomb_grid(tp: TildeParams, points: int, n_max: int, stretch: float = 4.0,
                 cell_average: int = 8) -> GridSpec:
    """Plane grid for case 3, sinh-stretched towards the origin.

    The extent covers ``15`` decay lengths of the level with principal index
    ``n_max``. An even number of points keeps the origin off the grid.
    """
    g = abs(tp.k) / (2 * np.sqrt(tp.m))
    a = tp.hbar**2 / (tp.m * g)
    L = 15 * a * (2 * n_max + 1) / 2
    return GridSpec(((-L, L), (-L, L)), points, "cartesian-2d", stretch=stretch,
                    cell_average=cell_average)
