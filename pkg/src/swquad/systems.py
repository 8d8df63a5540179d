"""The four Smorodinsky-Winternitz systems as quasi-Hamiltonian families.

Each case is a 2D superintegrable potential whose relativistic
(Klein-Gordon / Dirac with equal scalar and vector potentials) problem maps
to a Schrodinger-like quasi-Hamiltonian with effective mass
``m~ = (E/c^2 + m)/2`` and quasi-energy ``E~ = E - m c^2``::

    V1 = m w^2 (x^2 + y^2)/2 + mu1/(2 m x^2) + mu2/(2 m y^2)
    V2 = m w^2 (4 x^2 + y^2)/2 + mu/(2 m y^2)
    V3 = k/(2 sqrt(m) r) + (mu1/(r + x) + mu2/(r - x))/(2 m r)
    V4 = k/(2 sqrt(m) r) + mu1 sqrt(r + x)/(2 m^(1/4) r) + mu2 sqrt(r - x)/(2 m^(1/4) r)

Representation parameters ``kappa`` (written k~_i in the literature) are the
non-negative roots of ``mu~ = (kappa^2 - 1/4) hbar^2`` (cases 1, 2) or
``mu~ = hbar^2 (kappa^2 - 1/4)/2`` (case 3).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .algebra import StructureConstants, bisect_root, realize
from .errors import DomainError
from .polynomial import EnergyPolynomial

__all__ = [
    "PhysicalParams",
    "TildeParams",
    "CaseSpec",
    "SpectrumLevel",
    "CASES",
    "SIGN_SLOTS",
    "tilde_map",
    "tilde_params",
    "inverse_tilde_map",
    "case_spec",
    "sign_choices",
    "structure_constants",
    "pole_limit",
    "realize_level",
    "u_value",
    "quasi_spectrum",
    "case4_quantization_residual",
    "structure_function_factored",
    "enumerate_levels",
]

CASES = (1, 2, 3, 4)
SIGN_SLOTS = {1: 2, 2: 1, 3: 2, 4: 1}
BRANCH = {1: "gamma-zero", 2: "gamma-zero", 3: "gamma-nonzero", 4: "gamma-zero"}


def _check_case(case_id: int) -> int:
    if case_id not in CASES:
        raise ValueError(f"case must be one of {CASES}, got {case_id!r}")
    return int(case_id)


@dataclass(frozen=True)
class PhysicalParams:
    """Relativistic parameters; fields not used by a case are ignored."""

    m: float = 1.0
    c: float = 1.0
    hbar: float = 1.0
    omega: float = 1.0
    k: float = 1.0
    mu: float = 0.0
    mu1: float = 0.0
    mu2: float = 0.0

    def __post_init__(self):
        for name in ("m", "c", "hbar"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")


@dataclass(frozen=True)
class TildeParams:
    """Quasi-Hamiltonian parameters.

    ``E_tilde`` is ``None`` for a bare parameter set not tied to an energy.
    """

    m: float = 1.0
    hbar: float = 1.0
    omega: float = 1.0
    k: float = 1.0
    mu: float = 0.0
    mu1: float = 0.0
    mu2: float = 0.0
    E_tilde: float | None = None

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError("effective mass m~ must be positive (E > -m c^2)")
        if not self.hbar > 0:
            raise DomainError("hbar must be positive")


def tilde_params(params: PhysicalParams, E: float, case_id: int) -> TildeParams:
    """Apply the energy-dependent parameter map for ``case_id`` at energy ``E``."""
    case_id = _check_case(case_id)
    m, c = params.m, params.c
    if not E > -m * c**2:
        raise DomainError(f"E = {E!r} must exceed -m c^2 = {-m * c**2!r}")
    mt = (E / c**2 + m) / 2
    r = mt / m
    tp = dict(m=mt, hbar=params.hbar, E_tilde=E - m * c**2)
    if case_id in (1, 2):
        tp.update(omega=np.sqrt(1 / r) * params.omega, mu1=r * params.mu1,
                  mu2=r * params.mu2, mu=r * params.mu)
    elif case_id == 3:
        tp.update(k=np.sqrt(r) * params.k, mu1=r * params.mu1, mu2=r * params.mu2)
    else:
        tp.update(k=np.sqrt(r) * params.k, mu1=r**0.25 * params.mu1, mu2=r**0.25 * params.mu2)
    return TildeParams(**tp)


def tilde_map(params: PhysicalParams, E: float, case_id: int) -> TildeParams:
    """``m~ = (E/c^2 + m)/2``, ``E~ = E - m c^2`` plus the case's rescalings."""
    return tilde_params(params, E, case_id)


def inverse_tilde_map(tp: TildeParams, m: float, case_id: int) -> dict:
    """Recover the untilded case parameters from ``tp`` given the bare mass."""
    case_id = _check_case(case_id)
    r = tp.m / m
    if case_id in (1, 2):
        return dict(omega=tp.omega * np.sqrt(r), mu1=tp.mu1 / r, mu2=tp.mu2 / r, mu=tp.mu / r)
    if case_id == 3:
        return dict(k=tp.k / np.sqrt(r), mu1=tp.mu1 / r, mu2=tp.mu2 / r)
    return dict(k=tp.k / np.sqrt(r), mu1=tp.mu1 / r**0.25, mu2=tp.mu2 / r**0.25)


def _kappa(mu: float, hbar: float, case_id: int, label: str) -> float:
    factor = 2.0 if case_id == 3 else 1.0
    arg = factor * mu / hbar**2 + 0.25
    if arg < 0:
        bound = "-hbar^2/8" if case_id == 3 else "-hbar^2/4"
        raise DomainError(f"{label} = {mu!r} < {bound}: representation parameter is imaginary")
    return float(np.sqrt(arg))


@dataclass(frozen=True)
class CaseSpec:
    """Representation data of one case at fixed quasi-parameters."""

    case_id: int
    kappa1: float | None
    kappa2: float | None
    kappa: float | None
    sign_slots: int
    branch: str
    u_rule: str


def case_spec(case_id: int, tp: TildeParams) -> CaseSpec:
    case_id = _check_case(case_id)
    k1 = k2 = k = None
    if case_id in (1, 3):
        k1 = _kappa(tp.mu1, tp.hbar, case_id, "mu~1")
        k2 = _kappa(tp.mu2, tp.hbar, case_id, "mu~2")
    elif case_id == 2:
        k = _kappa(tp.mu, tp.hbar, case_id, "mu~")
    rule = {
        1: "u = 1/2 + eps1 kappa1 / 2",
        2: "u = 1/2",
        3: "u = (1 + eps1 kappa1 + eps2 kappa2) / 2",
        4: "u = root of phi(u) = 0 selected by eps (see u_value)",
    }[case_id]
    return CaseSpec(case_id, k1, k2, k, SIGN_SLOTS[case_id], BRANCH[case_id], rule)


def sign_choices(case_id: int) -> list[tuple[int, ...]]:
    """All sign tuples for the case, in a fixed order."""
    return list(itertools.product((1, -1), repeat=SIGN_SLOTS[_check_case(case_id)]))


def _check_signs(case_id: int, signs: Sequence[int]) -> tuple[int, ...]:
    signs = tuple(int(s) for s in signs)
    if len(signs) != SIGN_SLOTS[case_id] or any(s not in (1, -1) for s in signs):
        raise ValueError(f"case {case_id} takes {SIGN_SLOTS[case_id]} signs in {{+1, -1}}, got {signs}")
    return signs


# --- structure constants ------------------------------------------------------

def structure_constants(case_id: int, tp: TildeParams, printed: bool = False,
                        name: str = "Etilde") -> StructureConstants:
    """Quadratic-algebra coefficients with ``E~`` as the indeterminate.

    With ``printed=False`` (default) the constants are the ones that close on
    the integrals of motion. ``printed=True`` reproduces the literal
    typeset coefficients where they differ: the case 1 Casimir's last term
    lacks ``m~^2 w~^2``, the case 3 Casimir doubles ``hbar^4 k~^2 m~/2`` and
    the case 4 ``zeta`` and ``z`` carry ``m~`` instead of ``m~^(3/2)``.
    """
    case_id = _check_case(case_id)
    H = EnergyPolynomial.variable(name)
    h, m = tp.hbar, tp.m
    C = lambda v: EnergyPolynomial.constant(v, name)  # noqa: E731
    if case_id == 1:
        w2 = tp.omega**2
        mu1, mu2 = tp.mu1, tp.mu2
        last = 2 * (mu1 + mu2) * (1.0 if printed else m**2 * w2)
        K = (16 * h**2 * ((mu2 - mu1) ** 2 * m**2 * w2 + 4 * mu1 * m**2 * H**2)
             - 16 * h**4 * (3 * m**2 * H**2 + 2 * h**2 * m**2 * w2 - last))
        return StructureConstants.from_values(
            name, alpha=8 * h**2, beta=8 * h**2, gamma=0.0, delta=-16 * h**2 * m * H,
            epsilon=16 * h**2 * m**2 * w2,
            zeta=-16 * h**2 * (mu1 + mu2) * m**2 * w2 + 8 * h**4 * m**2 * w2,
            a=0.0, d=16 * h**4,
            z=(-16 * h**2 * (mu2 - mu1) * m - 16 * h**4 * m) * H,
            casimir=K,
        )
    if case_id == 2:
        w2 = tp.omega**2
        return StructureConstants.from_values(
            name, epsilon=16 * h**2 * m**2 * w2, a=6 * h**2, d=-16 * h**2 * m * H,
            z=-8 * h**2 * (tp.mu * w2 - H**2) * m**2 + 6 * h**4 * m**2 * w2,
            casimir=64 * h**4 * m**3 * w2 * H,
        )
    if case_id == 3:
        k, s = tp.k, tp.mu1 + tp.mu2
        kterm = (1.0 if printed else 0.5) * h**4 * k**2 * m
        K = (-h**2 * (2 * (tp.mu1 - tp.mu2) ** 2 * m * H - k**2 * m * s)
             - 2 * h**4 * s * m * H + kterm + h**6 * m * H)
        return StructureConstants.from_values(
            name, gamma=2 * h**2, epsilon=-(h**4),
            zeta=-(h**2) * k * np.sqrt(m) * (tp.mu1 - tp.mu2),
            d=8 * h**2 * m * H,
            z=h**4 * m * H - 4 * h**2 * s * m * H + h**2 * k**2 * m / 2,
            casimir=K,
        )
    mass = m if printed else m**1.5
    k, q = tp.k, tp.mu1**2 + tp.mu2**2
    return StructureConstants.from_values(
        name, epsilon=-2 * h**2 * m * H,
        zeta=C(-(h**2) * tp.mu1 * tp.mu2 * mass / 2),
        d=2 * h**2 * m * H,
        z=C(-(h**2) * (tp.mu1**2 - tp.mu2**2) * mass / 4),
        casimir=h**2 * m**2 / 2 * k**2 * H + h**2 * m**2 * k * q / 4 + h**4 * m**2 * H**2,
    )


# --- u-values and spectra ------------------------------------------------------

def u_value(case_id: int, tp: TildeParams, signs: Sequence[int], E_tilde: float | None = None) -> float:
    """Offset ``u`` making ``phi(0) = 0`` for the chosen sign branch.

    Case 4 depends on energy: with ``s = sqrt(-2 E~)`` the two zeros of the
    quadratic structure function are
    ``1/2 - k~/(2 hbar s) + mu~2^2/(2 hbar s^3)`` (eps = +1) and
    ``1/2 + k~/(2 hbar s) - mu~1^2/(2 hbar s^3)`` (eps = -1).
    """
    case_id = _check_case(case_id)
    signs = _check_signs(case_id, signs)
    cs = case_spec(case_id, tp)
    if case_id == 1:
        return 0.5 + signs[0] * cs.kappa1 / 2
    if case_id == 2:
        return 0.5
    if case_id == 3:
        # kappa terms first, so equal kappas with mixed signs give u = 1/2 exactly
        return 0.5 * (1 + (signs[0] * cs.kappa1 + signs[1] * cs.kappa2))
    E = tp.E_tilde if E_tilde is None else E_tilde
    if E is None or not E < 0:
        raise DomainError(f"case 4 needs E~ < 0 for its u-value, got {E!r}")
    s = np.sqrt(-2 * E)
    h = tp.hbar
    if signs[0] > 0:
        return 0.5 - tp.k / (2 * h * s) + tp.mu2**2 / (2 * h * s**3)
    return 0.5 + tp.k / (2 * h * s) - tp.mu1**2 / (2 * h * s**3)


def pole_limit(case_id: int, tp: TildeParams, signs: Sequence[int]) -> float | None:
    """Closed form of the pole term of ``b(0)`` where the quotient is ill-conditioned.

    For case 3 with mixed signs, ``X - 1/2 = eps1 (kappa1 - kappa2) / 2`` at
    ``N = 0`` and ``coef = -k~ sqrt(m~) (kappa1^2 - kappa2^2) / 8`` vanish
    together as the couplings approach each other; their ratio is
    ``-eps1 k~ sqrt(m~) (kappa1 + kappa2) / (4 + 2 eps1 (kappa1 - kappa2))``,
    which is ``-eps1 k~ sqrt(m~) kappa / 2`` at equal couplings. Other
    branches return None.
    """
    case_id = _check_case(case_id)
    signs = _check_signs(case_id, signs)
    if case_id != 3 or signs[0] == signs[1]:
        return None
    cs = case_spec(case_id, tp)
    e = signs[0]
    return -e * tp.k * np.sqrt(tp.m) * (cs.kappa1 + cs.kappa2) / (4 + 2 * e * (cs.kappa1 - cs.kappa2))


def realize_level(case_id: int, tp: TildeParams, signs: Sequence[int]):
    """Deformed-oscillator realization of a branch at ``tp.E_tilde``."""
    if tp.E_tilde is None:
        raise ValueError("realize_level needs tp.E_tilde")
    sc = structure_constants(case_id, tp)
    return realize(sc, tp.E_tilde, u_value(case_id, tp, signs), pole_limit(case_id, tp, signs))


def case4_quantization_residual(tp: TildeParams, p: int, eps: int, E_tilde: float,
                                printed: bool = False) -> float:
    """Left side of the case 4 quantization relation at ``E~ < 0``.

    Derived form: ``2 hbar (p+1) (-2E~)^(3/2) + 4 eps k~ E~ + eps (mu~1^2 + mu~2^2)``.
    ``printed=True`` uses ``4 eps m~ k~ E~^2`` and ``eps m~^(3/2) (...)``.
    """
    if not E_tilde < 0:
        raise DomainError("case 4 quantization needs E~ < 0")
    h, q = tp.hbar, tp.mu1**2 + tp.mu2**2
    lead = 2 * h * (p + 1) * (-2 * E_tilde) ** 1.5
    if printed:
        return lead + 4 * eps * tp.m * tp.k * E_tilde**2 + eps * tp.m**1.5 * q
    return lead + 4 * eps * tp.k * E_tilde + eps * q


def case4_window(tp: TildeParams) -> float:
    """Half-width ``W`` of the case 4 search window ``(-W, 0)``."""
    return 10 * tp.m * (tp.k**2 + tp.mu1**2 + tp.mu2**2) + 1


def quasi_spectrum(case_id: int, tp: TildeParams, p: int, signs: Sequence[int],
                   printed: bool = False, scan_points: int = 1000, tol: float = 1e-12) -> list[float]:
    """Quasi-energies ``E~`` for the representation of dimension ``p + 1``.

    Cases 1-3 have closed forms and return one value. Case 4 scans
    ``(-W, 0)`` for sign changes of :func:`case4_quantization_residual` and
    refines each by bisection; an empty list means no root in the window.
    """
    case_id = _check_case(case_id)
    signs = _check_signs(case_id, signs)
    if p < 0:
        raise ValueError("p must be non-negative")
    h = tp.hbar
    cs = case_spec(case_id, tp)
    if case_id == 1:
        return [2 * h * tp.omega * (p + 1 + (signs[0] * cs.kappa1 + signs[1] * cs.kappa2) / 2)]
    if case_id == 2:
        return [2 * h * tp.omega * (p + 1 + signs[0] * cs.kappa / 2)]
    if case_id == 3:
        S = 2 * (p + 1) + signs[0] * cs.kappa1 + signs[1] * cs.kappa2
        if S == 0:
            raise DomainError("2(p+1) + eps1 kappa1 + eps2 kappa2 vanishes")
        return [-tp.k**2 / (2 * h**2 * S**2)]
    W = case4_window(tp)
    eps = signs[0]

    def f(E):
        q = tp.mu1**2 + tp.mu2**2
        scale = 2 * h * (p + 1) * (-2 * E) ** 1.5 + 4 * abs(tp.k * E) + q
        if printed:
            scale = 2 * h * (p + 1) * (-2 * E) ** 1.5 + 4 * tp.m * abs(tp.k) * E**2 + tp.m**1.5 * q
        return case4_quantization_residual(tp, p, eps, E, printed) / scale

    # the end point 0 is excluded: u and the residual are singular there
    grid = -W * (1 - np.linspace(0, 1, scan_points, endpoint=False))
    grid = np.append(grid, -W * 1e-12)
    vals = np.array([f(E) for E in grid])
    roots = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0:
            roots.append(float(bisect_root(f, grid[i], grid[i + 1], tol)[0]))
    return roots


def structure_function_factored(case_id: int, tp: TildeParams, p: int, signs: Sequence[int],
                                x: float, reading: str = "derived") -> float:
    """Factorized structure function at a quantized energy.

    ``reading`` selects the form:

    - ``"derived"``: the exact value of the generic structure function
      (case 1 ``16 hbar^4 x (p+1-x)(x + eps1 kappa1)(p+1-x + eps2 kappa2)``,
      case 2 ``4 hbar^3 m~ w~ x (p+1-x)(p+1-x + eps kappa)``,
      case 3 the printed product with ``m~`` in place of ``m~^2``,
      case 4 ``-hbar^2 m~ E~ x (p+1-x)/2``);
    - ``"printed"``: the typeset product, with case 1 read as
      ``(x + eps1 kappa1)(x + eps1 kappa2)``;
    - ``"spectrum"``: case 1 only, ``(x + eps1 kappa1)(x + eps2 kappa2)``.
    """
    case_id = _check_case(case_id)
    signs = _check_signs(case_id, signs)
    cs = case_spec(case_id, tp)
    h = tp.hbar
    base = x * (p + 1 - x)
    if reading not in ("derived", "printed", "spectrum"):
        raise ValueError(f"unknown reading {reading!r}")
    if reading == "spectrum" and case_id != 1:
        raise ValueError("the 'spectrum' reading exists only for case 1")
    if case_id == 1:
        e1, e2 = signs
        if reading == "derived":
            return 16 * h**4 * base * (x + e1 * cs.kappa1) * (p + 1 - x + e2 * cs.kappa2)
        other = cs.kappa2 * (e1 if reading == "printed" else e2)
        return 16 * h**4 * base * (x + e1 * cs.kappa1) * (x + other)
    if case_id == 2:
        pref = 4 * h**3 * (tp.m * tp.omega if reading == "derived" else 1.0)
        return pref * base * (p + 1 - x + signs[0] * cs.kappa)
    if case_id == 3:
        e1, e2 = signs
        t = e1 * cs.kappa1 + e2 * cs.kappa2
        S = 2 * (p + 1) + t
        mass = tp.m if reading == "derived" else tp.m**2
        return (2**20 * 3 * tp.k**2 * mass * h**16 * base * (x + e1 * cs.kappa1)
                * (x + e2 * cs.kappa2) * (x + t) * (x + p + 1 + t) / S**2)
    E = tp.E_tilde
    if E is None:
        raise DomainError("case 4 factorized form needs E~")
    return -(h**2 if reading == "derived" else 1.0) * E * tp.m / 2 * base


# --- enumeration ----------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumLevel:
    """A quantized level of the quasi-Hamiltonian."""

    case_id: int
    p: int
    signs: tuple[int, ...]
    u: float
    E_tilde: float
    E: float | None
    residual: float
    positive: bool
    degenerate: bool = False
    notes: str = ""

    @property
    def accepted(self) -> bool:
        return self.positive and not self.degenerate


def level_status(case_id: int, tp: TildeParams, p: int, signs, E_tilde: float,
                 degenerate_tol: float = 1e-9):
    """Evaluate the generic structure function at ``E~``.

    Returns ``(u, relative residual at p+1, phi(0..p+1), positive, degenerate)``.
    """
    tpe = replace(tp, E_tilde=E_tilde)
    real = realize_level(case_id, tpe, signs)
    u = real.u
    phis = [real.phi(n) for n in range(p + 2)]
    scale = max(float(np.sum(np.abs(real.phi_terms(n)))) for n in range(p + 2)) or 1.0
    inner = [phis[n] / scale for n in range(1, p + 1)]
    return (u, real.phi_relative(p + 1), phis,
            all(v > degenerate_tol for v in inner),
            any(abs(v) <= degenerate_tol for v in inner))


def enumerate_levels(case_id: int, tp: TildeParams, p_max: int,
                     signs: Sequence[Sequence[int]] | None = None,
                     degenerate_tol: float = 1e-9) -> list[SpectrumLevel]:
    """All levels for ``p = 0..p_max`` and each sign choice, sorted by ``E~``.

    Positivity uses the generic structure function; levels failing it are
    kept and flagged. Ties keep the (p, signs) enumeration order.
    """
    case_id = _check_case(case_id)
    if p_max < 0:
        raise ValueError("p_max must be non-negative")
    choices = sign_choices(case_id) if signs is None else [_check_signs(case_id, s) for s in signs]
    out = []
    for p in range(p_max + 1):
        for sg in choices:
            try:
                energies = quasi_spectrum(case_id, tp, p, sg)
            except DomainError as exc:
                out.append(SpectrumLevel(case_id, p, sg, float("nan"), float("nan"), None,
                                         float("nan"), False, False, str(exc)))
                continue
            for E in energies:
                try:
                    u, r, _, pos, deg = level_status(case_id, tp, p, sg, E, degenerate_tol)
                    note = "degenerate representation" if deg else ("" if pos else "phi not positive")
                except DomainError as exc:
                    u, r, pos, deg, note = float("nan"), float("nan"), False, False, str(exc)
                out.append(SpectrumLevel(case_id, p, sg, u, E, None, r, pos, deg, note))
    order = sorted(range(len(out)), key=lambda i: (np.nan_to_num(out[i].E_tilde, nan=np.inf), i))
    return [out[i] for i in order]
