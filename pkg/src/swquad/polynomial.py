"""Univariate polynomials in a spectral parameter."""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real

import numpy as np
from numpy.polynomial import polynomial as P

__all__ = ["EnergyPolynomial"]


def _trim(coeffs) -> tuple[float, ...]:
    arr = np.atleast_1d(np.asarray(coeffs, dtype=float))
    if arr.ndim != 1:
        raise ValueError("coefficients must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coefficients must be finite")
    nz = np.flatnonzero(arr)
    if nz.size == 0:
        return (0.0,)
    return tuple(float(c) for c in arr[: nz[-1] + 1])


@dataclass(frozen=True)
class EnergyPolynomial:
    """Real polynomial ``c0 + c1 x + c2 x**2 + ...`` in a named indeterminate.

    Coefficients are stored constant term first, with trailing zeros removed.
    Arithmetic between polynomials requires matching indeterminate names;
    plain real numbers are promoted to constants.
    """

    coefficients: tuple[float, ...]
    name: str = "Etilde"

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _trim(self.coefficients))

    @classmethod
    def constant(cls, value: float, name: str = "Etilde") -> "EnergyPolynomial":
        return cls((float(value),), name)

    @classmethod
    def variable(cls, name: str = "Etilde") -> "EnergyPolynomial":
        return cls((0.0, 1.0), name)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return self.coefficients == (0.0,)

    def __call__(self, x):
        return P.polyval(x, self.coefficients)

    def magnitude(self, x: float) -> float:
        """Sum of the absolute monomials ``|c_i x**i|``, the scale of ``self(x)``."""
        return float(sum(abs(c * x**i) for i, c in enumerate(self.coefficients)))

    def _coerce(self, other) -> "EnergyPolynomial":
        if isinstance(other, EnergyPolynomial):
            if other.name != self.name:
                raise ValueError(
                    f"indeterminate mismatch: {self.name!r} vs {other.name!r}"
                )
            return other
        if isinstance(other, Real):
            return EnergyPolynomial.constant(float(other), self.name)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return EnergyPolynomial(P.polyadd(self.coefficients, o.coefficients), self.name)

    __radd__ = __add__

    def __neg__(self):
        return EnergyPolynomial(tuple(-c for c in self.coefficients), self.name)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return EnergyPolynomial(P.polymul(self.coefficients, o.coefficients), self.name)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        return EnergyPolynomial(P.polypow(self.coefficients, n), self.name)

    def compose(self, inner: "EnergyPolynomial") -> "EnergyPolynomial":
        """Return ``self(inner(x))`` (Horner scheme), in the indeterminate of ``inner``."""
        out = EnergyPolynomial.constant(0.0, inner.name)
        for c in reversed(self.coefficients):
            out = out * inner + c
        return out

    def __repr__(self) -> str:
        return f"EnergyPolynomial({list(self.coefficients)}, name={self.name!r})"
