"""Algebraic quasi-spectra checked against the finite-difference oracle.

The oracle sees only the potential on a Dirichlet grid, so it resolves just
the branches whose boundary behaviour it can represent:

- an axis with a ``mu/x^2`` term is a half-line, and Dirichlet differences
  select the regular solution ``x^(1/2 + kappa)``, i.e. the ``eps = +1``
  branch of that slot;
- an axis without one (``mu = 0``, ``kappa = 1/2``) is a full line, and both
  parities appear: ``eps = -1`` (even) and ``eps = +1`` (odd);
- case 3 with ``mu1 = mu2 = 0`` is the plane Coulomb problem. Its single
  valued states are the equal-sign branches; the mixed-sign branches
  belong to the double cover of the plane and are not plane eigenstates.

Each accepted level of a resolvable branch stands for ``p + 1`` states (the
dimension of its representation). The lowest ``n`` algebraic levels counted
this way are matched greedily against the lowest Richardson-extrapolated
eigenvalues; with equal-sign case 3 branches the counts reproduce the plane
Coulomb degeneracies ``2N + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .oracle import (
    MatchReport,
    case_potential,
    compare_spectra,
    coulomb_grid,
    oscillator_grid,
    richardson,
    solve_2d,
)
from .systems import TildeParams, enumerate_levels

__all__ = ["OracleComparison", "resolvable_signs", "algebraic_levels", "oracle_comparison"]

DEFAULT_TOL = {1: 5e-3, 2: 5e-3, 3: 1e-2}


def resolvable_signs(case_id: int, tp: TildeParams) -> list[tuple[int, ...]]:
    """Sign branches whose states a Dirichlet grid of the case potential contains."""
    if case_id == 1:
        slots = [(1,) if mu != 0 else (-1, 1) for mu in (tp.mu1, tp.mu2)]
        return [(a, b) for a in slots[0] for b in slots[1]]
    if case_id == 2:
        return [(1,)] if tp.mu != 0 else [(-1,), (1,)]
    if case_id == 3:
        if tp.mu1 != 0 or tp.mu2 != 0:
            raise ConfigError("the case 3 oracle needs mu1 = mu2 = 0 (plane Coulomb problem)")
        if not tp.k < 0:
            raise ConfigError("the case 3 oracle needs an attractive potential, k < 0")
        return [(-1, -1), (1, 1)]
    raise ConfigError(f"no finite-difference oracle for case {case_id}")


def algebraic_levels(case_id: int, tp: TildeParams, n_levels: int):
    """Lowest ``n_levels`` resolvable energies, each repeated ``p + 1`` times.

    Returns the ascending energies and, aligned with them, the level each
    state belongs to.
    """
    signs = resolvable_signs(case_id, tp)
    p_max = n_levels + 1
    levels = [lv for lv in enumerate_levels(case_id, tp, p_max, signs)
              if np.isfinite(lv.E_tilde) and (lv.positive or lv.degenerate)]
    states = [lv for lv in levels for _ in range(lv.p + 1)][:n_levels]  # levels are sorted
    if len(states) < n_levels:
        raise ConfigError(f"only {len(states)} resolvable states found for case {case_id}")
    return [lv.E_tilde for lv in states], states


@dataclass(frozen=True)
class OracleComparison:
    case_id: int
    algebraic: list
    numeric: list
    coarse: list
    fine: list
    match: MatchReport
    tol: float
    levels: list

    @property
    def passed(self) -> bool:
        return self.match.all_matched and len(self.match.pairs) == len(self.algebraic)


def oracle_comparison(case_id: int, tp: TildeParams, n_levels: int = 4, points: int = 300,
                      tol: float | None = None) -> OracleComparison:
    """Compare algebraic levels with Richardson-extrapolated 2D eigenvalues.

    The grids have ``points // 2`` and ``points`` interior nodes per axis
    (cell sizes in ratio 2 for odd ``points``, close to it otherwise).
    """
    tol = DEFAULT_TOL.get(case_id, 1e-2) if tol is None else tol
    energies, states = algebraic_levels(case_id, tp, n_levels)
    count = n_levels + 2
    pot = case_potential(case_id, tp)
    if case_id == 3:
        g = abs(tp.k) / (2 * np.sqrt(tp.m))
        n_max = int(round(np.sqrt(tp.m * g**2 / (2 * tp.hbar**2 * abs(energies[-1]))) - 0.5))
        grid = coulomb_grid(tp, points, max(n_max, 1))
    else:
        grid = oscillator_grid(case_id, tp, points, energies[-1])
    coarse_pts = points // 2
    fine = solve_2d(pot, grid, count).values
    coarse = solve_2d(pot, grid.with_points(coarse_pts), count).values
    ratio = (points + 1) / (coarse_pts + 1)
    extrap = richardson(coarse, fine, 2.0, ratio)
    numeric = list(np.sort(extrap))
    match = compare_spectra(energies, numeric, tol)
    return OracleComparison(case_id, list(energies), numeric, list(coarse), list(fine), match, tol, states)
