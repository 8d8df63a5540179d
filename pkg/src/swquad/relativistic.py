"""Relativistic spectra and the Dirac-side quadratic algebras.

With ``M = E/(2c^2) + m/2`` (the effective mass) and ``E~ = E - m c^2``
every quasi-spectrum becomes an implicit equation for ``E``. All root
finding is done in the variable ``E~`` so that nothing cancels against
``m c^2`` at large ``c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import bisect_root
from .errors import DomainError
from .polynomial import EnergyPolynomial
from .systems import (
    PhysicalParams,
    TildeParams,
    _check_case,
    _check_signs,
    case4_quantization_residual,
    quasi_spectrum,
    structure_constants,
    tilde_params,
)

__all__ = [
    "RelativisticLevel",
    "SolveResult",
    "DiracAlgebraConstants",
    "DiracReport",
    "relativistic_residual",
    "relativistic_residual_tilde",
    "solve_relativistic",
    "two_path_energy",
    "nonrelativistic_params",
    "nonrelativistic_limit",
    "dirac_structure_constants",
    "verify_dirac_equivalence",
]

FORMS = ("printed", "composed")


def _sqrt_arg(value: float, label: str) -> float:
    if value < 0:
        raise DomainError(f"negative square-root argument in {label}: {value!r}")
    return float(np.sqrt(value))


def _terms(case_id: int, params: PhysicalParams, p: int, signs, Et: float,
           form: str, coupling_mass_power: float) -> tuple[float, float]:
    """Left and right sides of the implicit spectrum equation at ``E~``."""
    m, c, h = params.m, params.c, params.hbar
    M = m + Et / (2 * c**2)
    if not M > 0:
        raise DomainError(f"E~ = {Et!r} gives non-positive effective mass")
    n = p + 1
    if case_id in (1, 2):
        w = params.omega
        if case_id == 1:
            k1 = _sqrt_arg(M * params.mu1 / (m * h**2) + 0.25, "the mu1 root")
            k2 = _sqrt_arg(M * params.mu2 / (m * h**2) + 0.25, "the mu2 root")
            bracket = n + signs[0] * k1 + signs[1] * k2 if form == "printed" else \
                n + (signs[0] * k1 + signs[1] * k2) / 2
        else:
            kk = _sqrt_arg(M * params.mu / (m * h**2) + 0.25, "the mu root")
            bracket = n + signs[0] * kk / 2
        if form == "printed":
            return Et**2 * M, 4 * h**2 * m**2 * w**2 * bracket**2
        return Et * np.sqrt(M), 2 * h * w * np.sqrt(m) * bracket
    if case_id == 3:
        f = 1.0 if form == "printed" else 2.0
        k1 = _sqrt_arg(f * M * params.mu1 / (m * h**2) + 0.25, "the mu1 root")
        k2 = _sqrt_arg(f * M * params.mu2 / (m * h**2) + 0.25, "the mu2 root")
        S = 2 * n + signs[0] * k1 + signs[1] * k2
        kk = params.k if form == "printed" else params.k**2
        return Et * 2 * m * h**2 * S**2, -M * kk
    if Et > 0:
        raise DomainError("case 4 needs E~ <= 0 for the (-(E - m c^2) M)^(3/2) term")
    eps = signs[0]
    q = params.mu1**2 + params.mu2**2
    if form == "printed":
        lhs = 2**2.5 * np.sqrt(m) * n * h * (-Et * M) ** 1.5
        return lhs + 4 * eps * params.k * M**2 * Et, -eps * M**coupling_mass_power * q
    tp = tilde_params(params, Et + m * c**2, 4)
    lhs = 2 * h * n * (-2 * Et) ** 1.5 + 4 * eps * tp.k * Et
    return lhs, -eps * (tp.mu1**2 + tp.mu2**2)


def _validate(case_id, params, p, signs, form):
    case_id = _check_case(case_id)
    signs = _check_signs(case_id, signs)
    if p < 0:
        raise ValueError("p must be non-negative")
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}")
    return case_id, signs


def relativistic_residual_tilde(case_id: int, params: PhysicalParams, p: int, signs: Sequence[int],
                                E_tilde: float, form: str = "composed",
                                coupling_mass_power: float = 2.0) -> float:
    """Left minus right side of the implicit spectrum equation at ``E~ = E - m c^2``.

    ``form="composed"`` (default) is the quasi-spectrum with the
    energy-dependent parameter map substituted (for cases 1-2 unsquared, so
    no spurious branch); ``"printed"`` is the equation as typeset, which for
    cases 1-3 does not reduce to the quasi-spectrum (see the README).
    ``coupling_mass_power`` is the power of ``M`` multiplying
    ``mu1^2 + mu2^2`` in the printed case 4 form.
    """
    case_id, signs = _validate(case_id, params, p, signs, form)
    if not E_tilde > -2 * params.m * params.c**2:
        raise DomainError("E must exceed -m c^2")
    lhs, rhs = _terms(case_id, params, p, signs, E_tilde, form, coupling_mass_power)
    return float(lhs - rhs)


def relativistic_residual(case_id: int, params: PhysicalParams, p: int, signs: Sequence[int],
                          E: float, form: str = "composed", coupling_mass_power: float = 2.0) -> float:
    """Residual of the implicit spectrum equation at the relativistic energy ``E``."""
    if not E > -params.m * params.c**2:
        raise DomainError(f"E = {E!r} must exceed -m c^2")
    return relativistic_residual_tilde(case_id, params, p, signs, E - params.m * params.c**2,
                                       form, coupling_mass_power)


def _scale(case_id, params, p, signs, Et, form, coupling_mass_power) -> float:
    lhs, rhs = _terms(case_id, params, p, signs, Et, form, coupling_mass_power)
    return abs(lhs) + abs(rhs)


def _spurious(case_id, params, p, signs, Et, form) -> bool:
    """Root of the squared printed form whose unsquared sides differ in sign."""
    if form != "printed" or case_id not in (1, 2):
        return False
    m, c, h = params.m, params.c, params.hbar
    M = m + Et / (2 * c**2)
    if case_id == 1:
        k1 = np.sqrt(M * params.mu1 / (m * h**2) + 0.25)
        k2 = np.sqrt(M * params.mu2 / (m * h**2) + 0.25)
        bracket = p + 1 + signs[0] * k1 + signs[1] * k2
    else:
        bracket = p + 1 + signs[0] * np.sqrt(M * params.mu / (m * h**2) + 0.25) / 2
    return bool(np.sign(Et) != np.sign(bracket))


# --- two independent paths ------------------------------------------------------

def _quasi_gap(case_id, params, p, signs, Et):
    """``E~ - Q(E~)`` with ``Q`` the quasi-spectrum at the mapped parameters.

    For case 4 the quantization relation itself is used (normalized).
    """
    tp = tilde_params(params, Et + params.m * params.c**2, case_id)
    if case_id == 4:
        r = case4_quantization_residual(tp, p, signs[0], Et)
        scale = 2 * tp.hbar * (p + 1) * (-2 * Et) ** 1.5 + 4 * abs(tp.k * Et) + tp.mu1**2 + tp.mu2**2
        return r / scale
    return Et - quasi_spectrum(case_id, tp, p, signs)[0]


def two_path_energy(case_id: int, params: PhysicalParams, p: int, signs: Sequence[int],
                    E_tilde_guess: float, tol: float = 1e-14) -> float | None:
    """Self-consistent ``E~`` solving ``E~ = Q(tilde_map(E))`` near a guess.

    The bracket around the guess is widened geometrically until the gap
    changes sign; returns ``None`` if none is found.
    """
    case_id = _check_case(case_id)
    signs = _check_signs(case_id, signs)
    lo_lim = -2 * params.m * params.c**2
    hi_lim = 0.0 if case_id == 4 else np.inf

    def g(Et):
        return _quasi_gap(case_id, params, p, signs, Et)

    width = 1e-6 * max(abs(E_tilde_guess), 1e-300) + 1e-300
    for _ in range(200):
        lo = max(E_tilde_guess - width, lo_lim * (1 - 1e-15))
        hi = min(E_tilde_guess + width, hi_lim - (1e-300 if case_id == 4 else 0.0))
        if case_id == 4:
            hi = min(hi, -1e-300)
        try:
            glo, ghi = g(lo), g(hi)
        except DomainError:
            width *= 2
            continue
        if glo == 0.0:
            return float(lo)
        if ghi == 0.0:
            return float(hi)
        if glo * ghi < 0:
            return float(bisect_root(g, lo, hi, tol)[0])
        width *= 2
    return None


# --- solving ----------------------------------------------------------------------

@dataclass(frozen=True)
class RelativisticLevel:
    """A root of the implicit relativistic spectrum equation."""

    case_id: int
    p: int
    signs: tuple[int, ...]
    E: float
    E_tilde: float
    residual: float
    converged: bool
    branch: dict
    two_path_E_tilde: float | None = None
    two_path_discrepancy: float | None = None


@dataclass(frozen=True)
class SolveResult:
    levels: list
    diagnostic: str = ""
    dropped: list = field(default_factory=list)


def _scan_grid(lo: float, hi: float, n: int, focus: float) -> np.ndarray:
    """Uniform grid on ``[lo, hi]`` merged with a geometric grid around 0.

    ``focus`` sets the outer radius of the geometric part; it resolves the
    region ``|E~| ~ focus`` even when the window is as wide as ``2 m c^2``.
    """
    parts = [np.linspace(lo, hi, n)]
    r = np.geomspace(1e-9 * focus, 10 * focus, n)
    parts += [r[(r > lo) & (r < hi)], -r[(-r > lo) & (-r < hi)]]
    return np.unique(np.concatenate(parts))


def default_window(case_id: int, params: PhysicalParams) -> tuple[float, float]:
    """Default ``E~`` window: ``(-2 m c^2, U)`` with ``U`` from the nonrelativistic scale."""
    lo = -2 * params.m * params.c**2 * (1 - 1e-12)
    if case_id in (3, 4):
        return lo, 0.0
    couplings = abs(params.mu) + abs(params.mu1) + abs(params.mu2)
    return lo, 50 * params.hbar * params.omega * (1 + couplings) + 50.0


def _focus(case_id, params, p):
    h = params.hbar
    if case_id in (1, 2):
        return 2 * h * params.omega * (p + 3) * (1 + abs(params.mu) + abs(params.mu1) + abs(params.mu2))
    return (params.k**2 + params.mu1**2 + params.mu2**2 + 1) / h**2


def solve_relativistic(case_id: int, params: PhysicalParams, p: int, signs: Sequence[int],
                       window: tuple[float, float] | None = None, tol: float = 1e-12,
                       form: str = "composed", coupling_mass_power: float = 2.0,
                       scan_points: int = 1000, window_in_E: bool = False) -> SolveResult:
    """All sign-change roots of the implicit equation in ``window``.

    ``window`` is an ``E~`` interval unless ``window_in_E`` is set. Each
    root is refined by bisection, re-evaluated, and cross-checked against
    the self-consistent fixed point ``E~ = Q(tilde_map(E))``. Roots of the
    squared printed forms (cases 1-2) whose unsquared sides differ in sign
    are dropped and listed in ``dropped``.
    """
    case_id, signs = _validate(case_id, params, p, signs, form)
    mc2 = params.m * params.c**2
    if window is None:
        lo, hi = default_window(case_id, params)
    else:
        lo, hi = window
        if window_in_E:
            lo, hi = lo - mc2, hi - mc2
        if not lo >= -2 * mc2:
            raise DomainError("window must lie above E = -m c^2")
        lo = max(lo, -2 * mc2 * (1 - 1e-12))
    grid = _scan_grid(lo, hi, scan_points, _focus(case_id, params, p))

    def f(Et):
        return relativistic_residual_tilde(case_id, params, p, signs, Et, form, coupling_mass_power)

    vals = np.full(grid.size, np.nan)
    for i, Et in enumerate(grid):
        try:
            vals[i] = f(Et)
        except DomainError:
            pass
    levels, dropped = [], []
    brackets = [i for i in range(grid.size - 1)
                if np.isfinite(vals[i]) and np.isfinite(vals[i + 1])
                and (vals[i] == 0.0 or vals[i] * vals[i + 1] < 0)]
    for j, i in enumerate(brackets):
        Et, _ = (grid[i], vals[i]) if vals[i] == 0.0 else bisect_root(f, grid[i], grid[i + 1], tol)
        r = f(Et)  # independent re-evaluation
        if _spurious(case_id, params, p, signs, Et, form):
            dropped.append(float(Et))
            continue
        tp_E = two_path_energy(case_id, params, p, signs, Et)
        disc = None if tp_E is None else abs(tp_E - Et) / max(abs(Et), 1e-300)
        levels.append(RelativisticLevel(
            case_id=case_id, p=p, signs=signs, E=mc2 + Et, E_tilde=float(Et), residual=float(r),
            converged=bool(abs(r) <= tol or abs(r) <= 4 * np.finfo(float).eps
                           * _scale(case_id, params, p, signs, Et, form, coupling_mass_power)),
            branch={"form": form, "bracket": [float(grid[i]), float(grid[i + 1])]},
            two_path_E_tilde=tp_E, two_path_discrepancy=disc,
        ))
    n = len(levels)
    levels = [RelativisticLevel(**{**lv.__dict__, "branch": {**lv.branch, "root": k, "of": n}})
              for k, lv in enumerate(levels)]
    diag = "" if levels else f"no admissible root in E~ window [{lo}, {hi}] ({grid.size} scan points)"
    return SolveResult(levels=levels, diagnostic=diag, dropped=dropped)


# --- nonrelativistic limit -------------------------------------------------------

def nonrelativistic_params(case_id: int, params: PhysicalParams) -> TildeParams:
    """Quasi-parameters in the ``c -> infinity`` limit (``m~ = m``)."""
    return TildeParams(m=params.m, hbar=params.hbar, omega=params.omega, k=params.k,
                       mu=params.mu, mu1=params.mu1, mu2=params.mu2)


def nonrelativistic_limit(case_id: int, params: PhysicalParams, p: int, signs: Sequence[int],
                          cs: Sequence[float] = (10.0, 100.0, 1000.0), form: str = "composed",
                          coupling_mass_power: float = 2.0, E_tilde_nonrel: float | None = None) -> dict:
    """Convergence of ``E(c) - m c^2`` to the quasi-spectrum value.

    For each ``c`` the root nearest the nonrelativistic value is kept; the
    observed orders are ``log(err_i/err_{i+1}) / log(c_{i+1}/c_i)``.
    """
    case_id = _check_case(case_id)
    if E_tilde_nonrel is None:
        vals = quasi_spectrum(case_id, nonrelativistic_params(case_id, params), p, signs)
        if not vals:
            raise DomainError("no nonrelativistic level for these parameters")
        E_tilde_nonrel = vals[-1] if case_id == 4 else vals[0]
    errs, roots = [], []
    for c in cs:
        pc = PhysicalParams(**{**params.__dict__, "c": float(c)})
        res = solve_relativistic(case_id, pc, p, signs, form=form, coupling_mass_power=coupling_mass_power)
        if not res.levels:
            raise DomainError(f"no relativistic root at c = {c}: {res.diagnostic}")
        best = min(res.levels, key=lambda lv: abs(lv.E_tilde - E_tilde_nonrel))
        roots.append(best.E_tilde)
        errs.append(abs(best.E_tilde - E_tilde_nonrel))
    orders = [float(np.log(errs[i] / errs[i + 1]) / np.log(cs[i + 1] / cs[i]))
              for i in range(len(cs) - 1)]
    return {"c": list(cs), "E_tilde": roots, "E_tilde_nonrel": E_tilde_nonrel,
            "errors": errs, "orders": orders}


# --- Dirac-side algebras ----------------------------------------------------------

_AC_KEYS = ("A2", "AB", "A", "B", "1")
_BC_KEYS = ("A2", "B2", "AB", "A", "B", "1")
# A_d = 2mc A_r, B_d = 2mc B_r, C_d = 4 m^2 c^2 C_r
_SCALE_POWER = {"A2": 1, "AB": 1, "B2": 1, "A": 2, "B": 2, "1": 3}


@dataclass(frozen=True)
class DiracAlgebraConstants:
    """Coefficients of ``[A_d, C_d]`` and ``[B_d, C_d]`` as polynomials in ``H = E``.

    Keys name the monomials ``A^2, {A,B}, B^2, A, B, 1``. ``M = P_x - i P_y``
    enters only through the integrals themselves and is not represented.
    """

    case_id: int
    params: PhysicalParams
    ac: dict
    bc: dict


def dirac_structure_constants(case_id: int, params: PhysicalParams) -> DiracAlgebraConstants:
    """Commutator coefficients of the integrals of the Dirac equation itself."""
    case_id = _check_case(case_id)
    h, m, c, w = params.hbar, params.m, params.c, params.omega
    mu, m1, m2, k = params.mu, params.mu1, params.mu2, params.k
    P = lambda *cs: EnergyPolynomial(cs, "E")  # noqa: E731
    if case_id == 1:
        ac = {"A2": P(16 * c * h**2 * m),
              "A": P(32 * c**4 * h**2 * m**4, 0, -32 * h**2 * m**2),
              "B": P(32 * c**2 * h**2 * m**4 * w**2, 32 * h**2 * m**3 * w**2),
              "1": P(-32 * c**3 * h**2 * m**5 * (-h**2 + m1 + m2) * w**2,
                     32 * c * h**2 * m**4 * (h**2 - 2 * m1 - 2 * m2) * w**2,
                     -32 * h**2 * w**2 * m**3 * (m1 + m2) / c)}
        bc = {"AB": P(-16 * c * h**2 * m),
              "B": P(-32 * c**4 * h**2 * m**4, 0, 32 * h**2 * m**2),
              "A": P(64 * c**2 * m**2 * h**4),
              "1": P(32 * c**5 * h**2 * m**5 * (2 * h**2 + m2 - m1),
                     -32 * c**3 * h**2 * m**4 * (m1 - m2),
                     -32 * c * h**2 * m**3 * (2 * h**2 - m1 + m2),
                     32 * h**2 * m**2 * (m1 - m2) / c)}
    elif case_id == 2:
        ac = {"B": P(32 * c**2 * h**2 * m**4 * w**2, 32 * h**2 * m**3 * w**2)}
        bc = {"A2": P(12 * c * h**2 * m),
              "A": P(32 * c**4 * h**2 * m**4, 0, -32 * h**2 * m**2),
              "1": P(8 * c**3 * h**2 * m**3 * (2 * c**4 * m**4 + 3 * h**2 * m**2 * w**2
                                               - 2 * m**2 * mu * w**2),
                     8 * c * h**2 * m**4 * w**2 * (3 * h**2 - 4 * mu),
                     -16 * (2 * c**4 * h**2 * m**5 + h**2 * m**3 * mu * w**2) / c,
                     0,
                     16 * h**2 * m**3 / c)}
    elif case_id == 3:
        ac = {"AB": P(4 * c * h**2 * m),
              "B": P(-4 * c**2 * m**2 * h**4),
              "1": P(-2 * c**3 * h**2 * k * m**3.5 * (m1 - m2),
                     4 * c * h**2 * k * m**2.5 * (m2 - m1),
                     -2 * h**2 * k * m**1.5 * (m1 - m2) / c)}
        # the H^2 coefficient is read as hbar^2 m^2 (k^2 + 4 c^2 m (hbar^2 - 2(mu1 + mu2))) / c
        bc = {"B2": P(-4 * c * m * h**2),
              "A": P(-16 * c**4 * h**2 * m**4, 0, 16 * h**2 * m**2),
              "1": P(c**3 * h**2 * m**4 * (k**2 + m * c**2 * (-4 * h**2 + 8 * (m1 + m2))),
                     2 * c * h**2 * m**3 * (k**2 + 4 * c**2 * m * (m1 + m2)),
                     h**2 * m**2 * (k**2 + 4 * c**2 * m * (h**2 - 2 * (m1 + m2))) / c,
                     -8 * h**2 * m**2 * (m1 + m2) / c)}
    else:
        ac = {"B": P(4 * c**4 * h**2 * m**4, 0, -4 * h**2 * m**2),
              "1": P(-(c**3) * h**2 * m**4.5 * m1 * m2,
                     -2 * c * h**2 * m**3.5 * m1 * m2,
                     -(h**2) * m**2.5 * m1 * m2 / c)}
        bc = {"A": P(-4 * c**4 * h**2 * m**4, 0, 4 * h**2 * m**2),
              "1": P(-0.5 * c**3 * h**2 * m**4.5 * (m1**2 - m2**2),
                     c * h**2 * m**3.5 * (m2**2 - m1**2),
                     -(h**2) * m**2.5 * (m1**2 - m2**2) / (2 * c))}
    zero = EnergyPolynomial.constant(0.0, "E")
    ac = {key: ac.get(key, zero) for key in _AC_KEYS}
    bc = {key: bc.get(key, zero) for key in _BC_KEYS}
    return DiracAlgebraConstants(case_id, params, ac, bc)


def _quasi_brackets(case_id: int, params: PhysicalParams, E: float, printed: bool):
    tp = tilde_params(params, E, case_id)
    k = structure_constants(case_id, tp, printed=printed).at(tp.E_tilde)
    ac = {"A2": k.alpha, "AB": k.gamma, "A": k.delta, "B": k.epsilon, "1": k.zeta}
    bc = {"A2": k.a, "B2": -k.gamma, "AB": -k.beta, "A": k.d, "B": -k.delta, "1": k.z}
    return ac, bc


@dataclass(frozen=True)
class DiracReport:
    """Maximum relative deviation per coefficient over the energy samples."""

    case_id: int
    deviations: dict
    tol: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values()) if self.deviations else 0.0

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tol)


def verify_dirac_equivalence(case_id: int, params: PhysicalParams, E_samples: Sequence[float],
                             tol: float = 1e-10, printed: bool = False) -> DiracReport:
    """Compare the rescaled quasi-Hamiltonian algebra with the Dirac algebra.

    At each ``E`` the quasi-side coefficients (with ``E~``, ``m~`` and the
    tilded parameters from the energy map) are multiplied by the powers of
    ``2 m c`` implied by ``A_d = 2mc A_r, B_d = 2mc B_r, C_d = 4m^2c^2 C_r``
    and compared with the Dirac coefficients at ``H = E``. The deviation is
    ``|q - d|`` over the absolute sum of the Dirac polynomial's terms (or
    ``|q|`` if larger).
    """
    case_id = _check_case(case_id)
    dirac = dirac_structure_constants(case_id, params)
    s = 2 * params.m * params.c
    dev = {}
    for E in E_samples:
        if not E > -params.m * params.c**2:
            raise DomainError(f"sample E = {E!r} must exceed -m c^2")
        qac, qbc = _quasi_brackets(case_id, params, E, printed)
        for label, q, d in (("[A,C]", qac, dirac.ac), ("[B,C]", qbc, dirac.bc)):
            for key, poly in d.items():
                qv = q[key] * s ** _SCALE_POWER[key]
                dv = float(poly(E))
                size = float(np.sum(np.abs(np.asarray(poly.coefficients) * E ** np.arange(poly.degree + 1))))
                denom = max(size, abs(qv))
                rel = 0.0 if denom == 0 else abs(qv - dv) / denom
                name = f"{label}:{key}"
                dev[name] = max(dev.get(name, 0.0), rel)
    return DiracReport(case_id=case_id, deviations=dev, tol=tol)
