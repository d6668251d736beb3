"""Gamma machinery, Pochhammer symbols and a real Gauss hypergeometric 2F1.

Gamma quotients are carried as :class:`SignedLogValue` so that products of
large and small factors never overflow before the final exponentiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import ConvergenceError, DomainError, PoleError

DEFAULT_TOL = 1e-15
MAX_TERMS = 200_000
SERIES_RADIUS = 0.75
# Parameter combinations closer than this to an integer are treated as integers
# by the connection formulas (their Gamma coefficients blow up there).
_INTEGER_GUARD = 1e-9


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def _near_integer(x: float) -> bool:
    return abs(x - round(x)) < _INTEGER_GUARD


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as ``sign * exp(log_magnitude)``."""

    log_magnitude: float
    sign: int

    @classmethod
    def from_float(cls, x: float) -> "SignedLogValue":
        if x == 0:
            return ZERO
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return SignedLogValue(self.log_magnitude + other.log_magnitude, self.sign * other.sign)

    def __truediv__(self, other: "SignedLogValue") -> "SignedLogValue":
        return self * other.reciprocal()

    def reciprocal(self) -> "SignedLogValue":
        if self.sign == 0:
            raise ZeroDivisionError("reciprocal of an exact zero")
        return SignedLogValue(-self.log_magnitude, self.sign)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    @property
    def value(self) -> float:
        return float(self)


ONE = SignedLogValue(0.0, 1)
ZERO = SignedLogValue(0.0, 0)


def log_gamma(x: float) -> SignedLogValue:
    """log|Gamma(x)| together with the sign of Gamma(x).

    Raises PoleError at zero and the negative integers.
    """
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at x={x!r}")
    sign = 1
    if x < 0 and math.floor(x) % 2 == 1:
        sign = -1
    return SignedLogValue(math.lgamma(x), sign)


def rgamma_log(x: float) -> SignedLogValue:
    """1/Gamma(x) in signed-log form; exactly zero at the poles of Gamma."""
    if _is_nonpositive_integer(x):
        return ZERO
    return log_gamma(x).reciprocal()


def gamma_ratio(numerator: Iterable[float], denominator: Iterable[float]) -> float:
    """prod Gamma(numerator) / prod Gamma(denominator), exponentiated once.

    A pole in the denominator makes the ratio exactly zero; a pole in the
    numerator raises PoleError.
    """
    acc = ONE
    for a in numerator:
        acc = acc * log_gamma(a)
    for d in denominator:
        acc = acc * rgamma_log(d)
    return float(acc)


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a(a+1)...(a+n-1), formed as a direct product."""
    if n < 0:
        raise DomainError(f"pochhammer needs n >= 0, got {n}")
    out = 1.0
    for k in range(n):
        out *= a + k
    return out


def log_pochhammer(a: float, n: int) -> SignedLogValue:
    """(a)_n as a SignedLogValue, accumulated factor by factor."""
    if n < 0:
        raise DomainError(f"pochhammer needs n >= 0, got {n}")
    acc = ONE
    for k in range(n):
        acc = acc * SignedLogValue.from_float(a + k)
    return acc


@dataclass(frozen=True)
class HypergeometricParams:
    """Parameters (a, b, c, z) of a real 2F1 evaluation."""

    a: float
    b: float
    c: float
    z: float

    def __post_init__(self):
        if _is_nonpositive_integer(self.c):
            raise DomainError(f"2F1 lower parameter c={self.c!r} is zero or a negative integer")
        if not math.isfinite(self.z) or self.z > 1:
            raise DomainError(f"2F1 argument must satisfy z <= 1, got z={self.z!r}")
        if self.z == 1 and self.c - self.a - self.b <= 0 and not self.terminating:
            raise DomainError(
                f"2F1 at z=1 needs c-a-b > 0, got c-a-b={self.c - self.a - self.b!r}"
            )

    @property
    def terminating(self) -> bool:
        return _is_nonpositive_integer(self.a) or _is_nonpositive_integer(self.b)


def _series(a: float, b: float, c: float, z: float, tol: float) -> tuple[float, int]:
    """Direct Gauss series; stops after three consecutive negligible terms.

    A term counts as negligible once it, inflated by the geometric tail factor
    1/(1 - |z|), falls below ``tol * |sum|``.
    """
    term = 1.0
    total = 1.0
    small = 0
    tail = 1.0 / (1.0 - min(abs(z), 0.999999))
    for k in range(MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if term == 0.0:
            return total, k + 1
        if abs(term) * tail <= tol * abs(total):
            small += 1
            if small == 3:
                return total, k + 1
        else:
            small = 0
    raise ConvergenceError(
        f"2F1 series ({a}, {b}; {c}; {z}) did not converge in {MAX_TERMS} terms",
        partial=total,
        count=MAX_TERMS,
    )


def _connection_at_one(a: float, b: float, c: float, z: float, tol: float) -> float:
    # c-a-b is not an integer here; both coefficients are finite Gamma ratios.
    w = 1.0 - z
    d = c - a - b
    first = gamma_ratio((c, d), (c - a, c - b))
    second = gamma_ratio((c, -d), (a, b))
    out = 0.0
    if first != 0.0:
        out += first * _series(a, b, 1.0 - d, w, tol)[0]
    if second != 0.0:
        out += second * w**d * _series(c - a, c - b, d + 1.0, w, tol)[0]
    return out


def _connection_at_infinity(a: float, b: float, c: float, z: float, tol: float) -> float:
    # z < -1 and b-a is not an integer.
    t = 1.0 / z
    first = gamma_ratio((c, b - a), (b, c - a))
    second = gamma_ratio((c, a - b), (a, c - b))
    out = 0.0
    if first != 0.0:
        out += first * (-z) ** (-a) * _series(a, a - c + 1.0, a - b + 1.0, t, tol)[0]
    if second != 0.0:
        out += second * (-z) ** (-b) * _series(b, b - c + 1.0, b - a + 1.0, t, tol)[0]
    return out


def _gauss_sum(a: float, b: float, c: float) -> float:
    return gamma_ratio((c, c - a - b), (c - a, c - b))


def _positive_argument(a: float, b: float, c: float, z: float, tol: float) -> float:
    if z <= SERIES_RADIUS:
        return _series(a, b, c, z, tol)[0]
    if not _near_integer(c - a - b):
        return _connection_at_one(a, b, c, z, tol)
    # Logarithmic case: neither Pfaff image nor the 1/z map is non-degenerate,
    # so fall back on the (slow but convergent) direct series.
    return _series(a, b, c, z, tol)[0]


def gauss_2f1(a: float, b: float, c: float, z: float, tol: float = DEFAULT_TOL) -> float:
    """Real Gauss hypergeometric function 2F1(a, b; c; z) for z <= 1.

    Regimes: direct series on [0, 0.75] (and for terminating series), the
    1 - z connection formula on (0.75, 1), Gauss summation at z = 1, and for
    negative z either Pfaff's transformation onto (0, 0.75] or the connection
    formula at infinity.

    Raises DomainError for an invalid ``c`` or ``z`` and ConvergenceError if a
    series exhausts its term budget.
    """
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    p = HypergeometricParams(float(a), float(b), float(c), float(z))
    a, b, c, z = p.a, p.b, p.c, p.z
    if z == 0.0:
        return 1.0
    if p.terminating:
        return _series(a, b, c, z, tol)[0]
    if z == 1.0:
        return _gauss_sum(a, b, c)
    if z > 0:
        return _positive_argument(a, b, c, z, tol)
    w = z / (z - 1.0)
    if w <= SERIES_RADIUS:
        return (1.0 - z) ** (-a) * _series(a, c - b, c, w, tol)[0]
    if not _near_integer(b - a):
        return _connection_at_infinity(a, b, c, z, tol)
    return (1.0 - z) ** (-a) * _positive_argument(a, c - b, c, w, tol)


def gauss_2f1_integral_oracle(
    a: float, b: float, c: float, z: float, quad_tol: float = 1e-13
) -> float:
    """2F1 from Euler's integral, evaluated by double-exponential quadrature.

    Valid for c > b > 0 and z < 1. Independent of :func:`gauss_2f1`.
    """
    from .quadrature import QuadratureSpec, integrate_de

    if not (c > b > 0):
        raise DomainError(f"Euler representation needs c > b > 0, got b={b!r}, c={c!r}")
    if not z < 1:
        raise DomainError(f"Euler representation needs z < 1, got z={z!r}")

    def integrand(u, du_left, du_right):
        # 1 - z*u written through the distance to u = 1 to keep it accurate near z -> 1.
        base = (1.0 - z) + z * du_right if z > 0 else 1.0 - z * u
        return du_left ** (b - 1.0) * du_right ** (c - b - 1.0) * base ** (-a)

    spec = QuadratureSpec(abs_tol=quad_tol, rel_tol=quad_tol, max_level=14)
    value = integrate_de(integrand, 0.0, 1.0, spec, distances=True).value
    beta = float(log_gamma(b) * log_gamma(c - b) / log_gamma(c))
    return value / beta
