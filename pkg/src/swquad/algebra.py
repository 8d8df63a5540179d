"""Quadratic algebras, their deformed-oscillator realizations and matrix checks.

The algebra is generated by two integrals ``A`` and ``B`` with ``C = [A, B]``::

    [A, C] = alpha A^2 + gamma {A,B} + delta A + epsilon B + zeta
    [B, C] = a A^2 - gamma B^2 - beta {A,B} + d A - delta B + z

Every coefficient is a polynomial in the (quasi-)Hamiltonian, which is a
number on each energy eigenspace. A unitary representation of dimension
``p + 1`` exists when the structure function vanishes at 0 and ``p + 1`` and
is positive in between.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Callable, Sequence

import numpy as np

from .errors import BranchError, DomainError, NonUnitaryError
from .polynomial import EnergyPolynomial

__all__ = [
    "StructureConstants",
    "EvaluatedConstants",
    "OscillatorRealization",
    "MatrixRep",
    "ClosureReport",
    "QuantizedEnergy",
    "QuantizationResult",
    "casimir_expression",
    "realize",
    "realize_gamma_nonzero",
    "realize_gamma_zero",
    "build_matrix_rep",
    "verify_closure",
    "find_quantized_energies",
    "bisect_root",
]

_NAMES = ("alpha", "beta", "gamma", "delta", "epsilon", "zeta", "a", "d", "z", "casimir")


@dataclass(frozen=True)
class EvaluatedConstants:
    """Structure constants evaluated at one value of the spectral parameter."""

    alpha: float
    beta: float
    gamma: float
    delta: float
    epsilon: float
    zeta: float
    a: float
    d: float
    z: float
    casimir: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class StructureConstants:
    """The nine commutator coefficients and the Casimir value, as polynomials."""

    alpha: EnergyPolynomial
    beta: EnergyPolynomial
    gamma: EnergyPolynomial
    delta: EnergyPolynomial
    epsilon: EnergyPolynomial
    zeta: EnergyPolynomial
    a: EnergyPolynomial
    d: EnergyPolynomial
    z: EnergyPolynomial
    casimir: EnergyPolynomial

    def __post_init__(self):
        names = {getattr(self, n).name for n in _NAMES}
        if len(names) != 1:
            raise ValueError(f"structure constants use mixed indeterminates: {sorted(names)}")

    @property
    def name(self) -> str:
        return self.alpha.name

    @classmethod
    def from_values(cls, name: str = "Etilde", **kw) -> "StructureConstants":
        """Build from numbers or polynomials; missing coefficients are zero."""
        unknown = set(kw) - set(_NAMES)
        if unknown:
            raise TypeError(f"unknown structure constants: {sorted(unknown)}")
        vals = {}
        for n in _NAMES:
            v = kw.get(n, 0.0)
            vals[n] = v if isinstance(v, EnergyPolynomial) else EnergyPolynomial.constant(v, name)
        return cls(**vals)

    def at(self, energy: float) -> EvaluatedConstants:
        return EvaluatedConstants(**{n: float(getattr(self, n)(energy)) for n in _NAMES})

    def magnitudes(self, energy: float) -> EvaluatedConstants:
        """Monomial magnitudes of each constant at ``energy`` (see ``EnergyPolynomial.magnitude``)."""
        return EvaluatedConstants(**{n: getattr(self, n).magnitude(energy) for n in _NAMES})

    def as_dict(self) -> dict[str, EnergyPolynomial]:
        return {n: getattr(self, n) for n in _NAMES}


def _evaluated(sc, energy) -> EvaluatedConstants:
    if isinstance(sc, EvaluatedConstants):
        return sc
    return sc.at(energy)


def _magnitudes(sc, energy) -> EvaluatedConstants:
    if isinstance(sc, EvaluatedConstants):
        return EvaluatedConstants(**{n: abs(v) for n, v in sc.as_dict().items()})
    return sc.magnitudes(energy)


def _anti(x, y):
    return x @ y + y @ x


def casimir_expression(sc, A, B, C, energy: float | None = None) -> np.ndarray:
    """Casimir element built from the generator matrices.

    ``sc`` is either already evaluated or is evaluated at ``energy``.
    """
    A, B, C = (np.asarray(m) for m in (A, B, C))
    if not (A.ndim == B.ndim == C.ndim == 2 and A.shape == B.shape == C.shape
            and A.shape[0] == A.shape[1]):
        raise ValueError("A, B, C must be square matrices of equal size")
    k = _evaluated(sc, energy)
    return sum(_casimir_terms(k, A, B, C))


def _casimir_terms(k: EvaluatedConstants, A, B, C):
    A2 = A @ A
    return [
        C @ C,
        -k.alpha * _anti(A2, B),
        -k.gamma * _anti(A, B @ B),
        (k.alpha * k.gamma - k.delta) * _anti(A, B),
        (k.gamma**2 - k.epsilon) * (B @ B),
        (k.gamma * k.delta - 2 * k.zeta) * B,
        (2 * k.a / 3) * (A2 @ A),
        (k.d + k.a * k.gamma / 3 + k.alpha**2) * A2,
        (k.a * k.epsilon / 3 + k.alpha * k.delta + 2 * k.z) * A,
    ]


# --- realizations -----------------------------------------------------------

@dataclass(frozen=True)
class OscillatorRealization:
    """Deformed-oscillator realization at a fixed energy and offset ``u``.

    ``A(N)`` and ``b(N)`` are diagonal functions, ``rho(N)`` multiplies the
    ladder operators in ``B = b(N) + b† rho(N) + rho(N) b`` and ``phi(N)``
    is the structure function with ``b b† = phi(N + 1)``.

    ``phi_terms(N)`` returns the additive terms of the unnormalized
    polynomial structure function; their absolute sum sets the scale for
    relative residuals.
    """

    u: float
    energy: float
    A: Callable[[float], float]
    b: Callable[[float], float]
    rho: Callable[[float], float]
    phi: Callable[[float], float]
    phi_terms: Callable[[float], np.ndarray]
    branch: str
    constants: EvaluatedConstants

    def phi_raw(self, n: float) -> float:
        """Unnormalized structure function (sum of ``phi_terms``)."""
        return float(np.sum(self.phi_terms(n)))

    def phi_relative(self, n: float) -> float:
        """Unnormalized structure function divided by the size of its terms."""
        t = self.phi_terms(n)
        s = float(np.sum(np.abs(t)))
        return float(np.sum(t)) / s if s > 0 else 0.0


def _phi_terms_gamma_zero(k: EvaluatedConstants, X: float) -> np.ndarray:
    s = np.sqrt(k.epsilon)
    al, de, ze, ep = k.alpha, k.delta, k.zeta, k.epsilon
    c0 = 0.25 * (-k.casimir / ep - k.z / s - de / s * ze / ep + ze**2 / ep**2)
    c1 = -(3 * k.d - k.a * s - 3 * al * de / s + 3 * (de / s) ** 2 - 6 * k.z / s
           + 6 * al * ze / ep - 6 * de / s * ze / ep) / 12
    c2 = 0.25 * (al**2 + k.d - k.a * s - 3 * al * de / s + (de / s) ** 2 + 2 * al * ze / ep)
    c3 = -(3 * al**2 - k.a * s - 3 * al * de / s) / 6
    c4 = 0.25 * al**2
    return np.array([c0, c1 * X, c2 * X**2, c3 * X**3, c4 * X**4])


def realize_gamma_zero(sc, energy: float, u: float) -> OscillatorRealization:
    """Realization for ``gamma = 0`` and ``epsilon > 0``, with ``rho = 1``."""
    k = _evaluated(sc, energy)
    if k.gamma != 0.0:
        raise BranchError(f"gamma = {k.gamma!r} is nonzero; use realize_gamma_nonzero")
    if not k.epsilon > 0:
        raise BranchError(f"epsilon = {k.epsilon!r} must be positive for the gamma = 0 branch")
    s = float(np.sqrt(k.epsilon))

    def A(n):
        return s * (n + u)

    def b(n):
        X = n + u
        return -k.alpha * X**2 - k.delta / s * X - k.zeta / k.epsilon

    def terms(n):
        return _phi_terms_gamma_zero(k, n + u)

    def phi(n):
        return float(np.sum(terms(n)))

    return OscillatorRealization(
        u=float(u), energy=float(energy), A=A, b=b, rho=lambda n: 1.0, phi=phi,
        phi_terms=terms, branch="gamma-zero", constants=k,
    )


def _phi_terms_gamma_nonzero(k: EvaluatedConstants, X: float) -> np.ndarray:
    al, ga, de, ep, ze = k.alpha, k.gamma, k.delta, k.epsilon, k.zeta
    Y = 2 * X
    t1 = -3072 * ga**6 * k.casimir * (Y - 1) ** 2
    t2 = (-48 * ga**6 * (al**2 * ep - al * de * ga + k.a * ep * ga - k.d * ga**2)
          * (Y - 3) * (Y - 1) ** 4 * (Y + 1))
    t3 = ga**8 * (3 * al**2 + 4 * k.a * ga) * (Y - 3) ** 2 * (Y - 1) ** 4 * (Y + 1) ** 2
    t4 = 768 * (al * ep**2 - 2 * de * ep * ga + 4 * ga**2 * ze) ** 2
    t5 = (32 * ga**4 * (Y - 1) ** 2 * (-1 - 12 * X + 12 * X**2)
          * (3 * al**2 * ep**2 - 6 * al * de * ep * ga + 2 * k.a * ep**2 * ga
             + 2 * de**2 * ga**2 - 4 * k.d * ep * ga**2 + 8 * ga**3 * k.z
             + 4 * al * ga**2 * ze))
    t6 = (-256 * ga**2 * (Y - 1) ** 2
          * (3 * al**2 * ep**3 - 9 * al * de * ep**2 * ga + k.a * ep**3 * ga
             + 6 * de**2 * ep * ga**2 - 3 * k.d * ep**2 * ga**2 + 2 * de**2 * ga**4
             + 2 * k.d * ep * ga**4 + 12 * ep * ga**3 * k.z - 4 * ga**5 * k.z
             + 12 * al * ep * ga**2 * ze - 12 * de * ga**3 * ze + 4 * al * ga**4 * ze))
    return np.array([t1, t2, t3, t4, t5, t6])


def _normalization(k: EvaluatedConstants, X: float) -> float:
    den = 3 * 2**12 * k.gamma**8 * X * (1 + X) * (1 + 2 * X) ** 2
    return np.inf if den == 0 else 1.0 / den


def realize_gamma_nonzero(sc, energy: float, u: float,
                          pole_limit: float | None = None) -> OscillatorRealization:
    """Realization for ``gamma != 0``.

    The polynomial structure function ``Phi_D`` carries an ``N``-dependent
    normalization ``r(N) = 1 / (3 * 2**12 gamma**8 X (X+1) (2X+1)**2)``,
    ``X = N + u``: the off-diagonal element of ``B`` squared is
    ``r(n) Phi_D(n + 1 + u)``. That normalization is split as
    ``rho = sqrt|r(N)|`` and ``phi(N) = sign(r(N - 1)) Phi_D(N + u)`` so
    that ``phi(n) > 0`` is exactly the unitarity condition.

    ``b(N)`` contains ``coef / (X**2 - 1/4)``. For families where numerator
    and denominator vanish together at ``N = 0`` the quotient is lost to
    cancellation (or is 0/0); ``pole_limit`` then supplies its value at
    ``N = 0`` in closed form. Elsewhere a 0/0 point takes the limit along
    ``coef = 0``, i.e. 0.
    """
    k = _evaluated(sc, energy)
    if k.gamma == 0.0:
        raise BranchError("gamma = 0; use realize_gamma_zero")
    ga = k.gamma
    coef = (k.alpha * k.epsilon**2 - 2 * k.delta * ga * k.epsilon + 4 * ga**2 * k.zeta) / (4 * ga**4)

    def A(n):
        X = n + u
        return ga / 2 * (X**2 - 0.25) - k.epsilon / (2 * ga)

    def b(n):
        X = n + u
        q = X**2 - 0.25
        if n == 0 and pole_limit is not None:
            pole = pole_limit
        elif q == 0.0:
            if coef != 0.0:
                raise DomainError(f"b(N) is singular at N + u = {X!r}")
            pole = 0.0
        else:
            pole = coef / q
        return -k.alpha * q / 4 + (k.alpha * k.epsilon - k.delta * ga) / (2 * ga**2) - pole

    def rho(n):
        r = _normalization(k, n + u)
        if not np.isfinite(r):
            raise DomainError(f"rho(N) is singular at N + u = {n + u!r}")
        return float(np.sqrt(abs(r)))

    def terms(n):
        return _phi_terms_gamma_nonzero(k, n + u)

    def phi(n):
        r = _normalization(k, n - 1 + u)
        sign = -1.0 if r < 0 else 1.0
        return sign * float(np.sum(terms(n)))

    return OscillatorRealization(
        u=float(u), energy=float(energy), A=A, b=b, rho=rho, phi=phi,
        phi_terms=terms, branch="gamma-nonzero", constants=k,
    )


def realize(sc: StructureConstants, energy: float, u: float,
            pole_limit: float | None = None) -> OscillatorRealization:
    """Dispatch on whether ``gamma`` vanishes identically."""
    if sc.gamma.is_zero():
        return realize_gamma_zero(sc, energy, u)
    return realize_gamma_nonzero(sc, energy, u, pole_limit)


# --- matrices ---------------------------------------------------------------

@dataclass(frozen=True)
class MatrixRep:
    """Finite-dimensional representation on the Fock states ``|0>..|p>``."""

    dimension: int
    N: np.ndarray
    b: np.ndarray
    bdag: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    phi: np.ndarray = field(repr=False)  # phi(0), ..., phi(p + 1)
    # entry sizes of A and b(N) on the ladder 0..p+1; they set the scale of
    # the closure checks when the represented entries vanish by cancellation
    A_ref: float = 0.0
    B_ref: float = 0.0


def build_matrix_rep(real: OscillatorRealization, p: int) -> MatrixRep:
    """Assemble ``N, b, b†, A, B, C`` of dimension ``p + 1``.

    Raises ``NonUnitaryError`` if ``phi(n) < 0`` for some ``1 <= n <= p``.
    """
    if p < 0:
        raise ValueError("p must be non-negative")
    dim = p + 1
    phi = np.array([real.phi(n) for n in range(p + 2)])
    bad = [n for n in range(1, dim) if phi[n] < 0]
    if bad:
        raise NonUnitaryError(f"phi(n) < 0 at n = {bad}: {phi[bad]}")
    bdag = np.zeros((dim, dim))
    for n in range(p):
        bdag[n + 1, n] = np.sqrt(phi[n + 1])
    b = bdag.T.copy()
    ns = np.arange(dim, dtype=float)
    # rho(p) multiplies the empty top column of b†, so only rho(0..p-1) enter
    R = np.diag([real.rho(n) for n in ns[:-1]] + [0.0])
    A = np.diag([real.A(n) for n in ns])
    B = np.diag([real.b(n) for n in ns]) + bdag @ R + R @ b
    C = A @ B - B @ A
    A_ref = max(abs(real.A(n)) for n in range(p + 2))
    try:
        B_ref = max(abs(real.b(n)) for n in range(p + 2))
    except DomainError:
        B_ref = float(np.max(np.abs(np.diag(B))))
    return MatrixRep(dimension=dim, N=np.diag(ns), b=b, bdag=bdag, A=A, B=B, C=C, phi=phi,
                     A_ref=float(A_ref), B_ref=float(B_ref))


@dataclass(frozen=True)
class ClosureReport:
    """Relative deviations of the three commutation relations and the Casimir."""

    deviations: dict
    casimir_value: float
    casimir_matrix_value: float
    tol: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values())

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tol)


def _rel(lhs, rhs_terms, lhs_size: float = 0.0) -> float:
    """Frobenius norm of ``lhs - sum(c M)`` over the size of all terms.

    ``rhs_terms`` holds ``(c, |c|, M, size)``: ``|c|`` is the monomial
    magnitude of an energy-dependent coefficient, so a constant that is
    itself a near-cancelling sum is scaled by its parts, and ``size`` is a
    norm bound for ``M``.
    """
    resid = lhs - sum(c * M for c, _, M, _ in rhs_terms)
    scale = max(np.linalg.norm(lhs), lhs_size) + sum(g * size for _, g, _, size in rhs_terms)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(resid) / scale)


def _casimir_scale(g: EvaluatedConstants, nA: float, nB: float, nC: float) -> float:
    """Bound on the Casimir terms, each coefficient taken at its magnitude."""
    return float(
        nC**2 + 2 * g.alpha * nA**2 * nB + 2 * g.gamma * nA * nB**2
        + 2 * (g.alpha * g.gamma + g.delta) * nA * nB + (g.gamma**2 + g.epsilon) * nB**2
        + (g.gamma * g.delta + 2 * g.zeta) * nB + 2 * g.a / 3 * nA**3
        + (g.d + g.a * g.gamma / 3 + g.alpha**2) * nA**2
        + (g.a * g.epsilon / 3 + g.alpha * g.delta + 2 * g.z) * nA)


def verify_closure(rep: MatrixRep, sc, energy: float | None = None, tol: float = 1e-9) -> ClosureReport:
    """Check all defining relations on the matrices of ``rep``.

    Each deviation is the Frobenius norm of the residual divided by a bound
    on the sizes of the individual terms, so cancellation between large
    terms is measured on the scale of those terms. Energy-dependent
    coefficients enter through their monomial magnitudes, and the sizes of
    ``A`` and ``B`` are floored by the ladder entry sizes ``rep.A_ref`` and
    ``rep.B_ref`` (a one-state representation can have ``A = 0`` exactly).
    """
    k = _evaluated(sc, energy)
    g = _magnitudes(sc, energy)
    A, B, C = rep.A, rep.B, rep.C
    I = np.eye(rep.dimension)
    nI = np.sqrt(rep.dimension)
    nA = max(np.linalg.norm(A), rep.A_ref)
    nB = max(np.linalg.norm(B), rep.B_ref)
    nC = np.linalg.norm(C)
    AA, BB, AB = A @ A, B @ B, _anti(A, B)
    dev = {
        "[A,B]=C": _rel(A @ B - B @ A, [(1.0, 1.0, C, nC)]),
        "[A,C]": _rel(A @ C - C @ A, [
            (k.alpha, g.alpha, AA, nA**2), (k.gamma, g.gamma, AB, 2 * nA * nB),
            (k.delta, g.delta, A, nA), (k.epsilon, g.epsilon, B, nB), (k.zeta, g.zeta, I, nI),
        ], 2 * nA * nC),
        "[B,C]": _rel(B @ C - C @ B, [
            (k.a, g.a, AA, nA**2), (-k.gamma, g.gamma, BB, nB**2),
            (-k.beta, g.beta, AB, 2 * nA * nB), (k.d, g.d, A, nA),
            (-k.delta, g.delta, B, nB), (k.z, g.z, I, nI),
        ], 2 * nB * nC),
    }
    K = sum(_casimir_terms(k, A, B, C))
    scale = _casimir_scale(g, nA, nB, nC) + g.casimir * nI
    dev["casimir"] = float(np.linalg.norm(K - k.casimir * I) / scale) if scale > 0 else 0.0
    return ClosureReport(
        deviations=dev,
        casimir_value=k.casimir,
        casimir_matrix_value=float(np.trace(K) / rep.dimension),
        tol=tol,
    )


# --- quantization -------------------------------------------------------------

def bisect_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
                max_iter: int = 200) -> tuple[float, float]:
    """Bisection on a sign-changing bracket; returns ``(root, f(root))``.

    Stops once ``|f| <= tol`` or the bracket shrinks to adjacent floats.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo, flo
    if fhi == 0.0:
        return hi, fhi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError("bracket does not change sign")
    best = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if abs(fm) < abs(best[1]):
            best = (mid, fm)
        if fm == 0.0 or abs(fm) <= tol and hi - lo <= 4 * np.spacing(max(abs(lo), abs(hi))):
            return mid, fm
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return best


@dataclass(frozen=True)
class QuantizedEnergy:
    """One root of ``phi(p + 1) = 0`` with its positivity annotation."""

    energy: float
    u: float
    residual: float
    converged: bool
    positive: bool
    degenerate: bool
    phi: tuple[float, ...]


@dataclass(frozen=True)
class QuantizationResult:
    roots: list
    diagnostic: str = ""


def find_quantized_energies(
    family: Callable[[float], StructureConstants],
    u_rule: Callable[[float, Sequence[int]], float],
    p: int,
    signs: Sequence[int],
    bracket: tuple[float, float],
    tol: float = 1e-12,
    scan_points: int = 1000,
    degenerate_tol: float = 1e-9,
) -> QuantizationResult:
    """Roots of ``r(E) = phi(p + 1; E, u(E))`` in ``bracket``.

    ``r`` is the structure function divided by the absolute sum of its terms,
    so ``tol`` is a relative residual. The bracket is scanned at
    ``scan_points`` equally spaced points and each sign change refined by
    bisection. Roots failing positivity are flagged, not dropped.
    """
    lo, hi = map(float, bracket)
    if not hi > lo:
        raise ValueError("bracket must satisfy lo < hi")

    def residual(E):
        try:
            u = u_rule(E, signs)
        except (ValueError, FloatingPointError) as exc:
            raise DomainError(f"u-rule undefined at E = {E!r}: {exc}") from exc
        return realize(family(E), E, u).phi_relative(p + 1)

    grid = np.linspace(lo, hi, scan_points)
    vals = np.array([residual(E) for E in grid])
    roots = []
    for i in range(len(grid) - 1):
        f0, f1 = vals[i], vals[i + 1]
        if f0 == 0.0:
            cands = [grid[i]]
        elif f0 * f1 < 0:
            cands = [bisect_root(residual, grid[i], grid[i + 1], tol)[0]]
        else:
            cands = []
        for E in cands:
            u = u_rule(E, signs)
            real = realize(family(E), E, u)
            r = real.phi_relative(p + 1)
            ph = tuple(real.phi(n) for n in range(p + 2))
            scale = max(float(np.sum(np.abs(real.phi_terms(n)))) for n in range(1, p + 2)) or 1.0
            inner = [ph[n] / scale for n in range(1, p + 1)]
            roots.append(QuantizedEnergy(
                energy=float(E), u=float(u), residual=float(r), converged=abs(r) <= tol,
                positive=all(x > degenerate_tol for x in inner),
                degenerate=any(abs(x) <= degenerate_tol for x in inner),
                phi=ph,
            ))
    if vals[-1] == 0.0:
        E = grid[-1]
        u = u_rule(E, signs)
        real = realize(family(E), E, u)
        ph = tuple(real.phi(n) for n in range(p + 2))
        roots.append(QuantizedEnergy(float(E), float(u), 0.0, True,
                                     all(x > 0 for x in ph[1:p + 1]), False, ph))
    diag = "" if roots else f"no sign change of phi(p+1) in [{lo}, {hi}] at {scan_points} points"
    return QuantizationResult(roots=roots, diagnostic=diag)
