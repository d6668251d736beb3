"""Polynomial Pell solutions, mapping polynomials and their branch inverses.

The E2 mapping (degree 2) and the E4 mapping (degree 4) pull [-1, 1] back to
the gap sets; every Pell pair here is certified by the residual of

    prod(x - alpha) P^2 - (x^2 - 1) prod(x - beta) Q^2 - prod(x - gamma),

which vanishes identically for a genuine solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError
from .geometry import SQRT_HALF, SetKind, check_b, complement


class Polynomial:
    """Dense real polynomial, coefficients in ascending order, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = [float(v) for v in coeffs]
        while c and c[-1] == 0.0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def from_roots(cls, roots, leading=1.0):
        return cls(leading * npoly.polyfromroots(list(roots))) if roots else cls([leading])

    @property
    def degree(self) -> int:
        """Exact degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1] if self.coeffs else 0.0

    def _arr(self):
        return np.array(self.coeffs or (0.0,))

    def __call__(self, x):
        # Horner from the top coefficient
        acc = 0.0 * x if isinstance(x, np.ndarray) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polyadd(self._arr(), other._arr()))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polymul(self._arr(), other._arr()))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial([1.0])
        for _ in range(k):
            out = out * self
        return out

    def deriv(self) -> "Polynomial":
        return Polynomial(npoly.polyder(self._arr())) if self.degree > 0 else Polynomial([])

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"


def _as_poly(v) -> Polynomial:
    return v if isinstance(v, Polynomial) else Polynomial([v])


X = Polynomial([0.0, 1.0])


def chebyshev_t(n: int) -> Polynomial:
    if n < 0:
        raise DomainError(f"Chebyshev degree must be >= 0, got {n}")
    prev, cur = Polynomial([1.0]), X
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2 * X * cur - prev
    return cur


def chebyshev_u(n: int) -> Polynomial:
    if n < 0:
        raise DomainError(f"Chebyshev degree must be >= 0, got {n}")
    prev, cur = Polynomial([1.0]), 2 * X
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2 * X * cur - prev
    return cur


# --- E2 mapping pair -------------------------------------------------------


def make_p2_e2(b: float) -> Polynomial:
    b = check_b(SetKind.E2, b)
    d = (1.0 - b) * (1.0 + b)
    return Polynomial([-(1.0 + b * b) / d, 0.0, 2.0 / d])


def make_q2_e2(b: float) -> Polynomial:
    b = check_b(SetKind.E2, b)
    d = (1.0 - b) * (1.0 + b)
    return Polynomial([2.0 * b / d, 2.0 / d])


# --- E4 pairs --------------------------------------------------------------


def _e4(b):
    b = check_b(SetKind.E4, b)
    return b, complement(b)


def make_p4(b: float) -> Polynomial:
    b, s = _e4(b)
    d = b * b * s * s
    return Polynomial([1.0, 0.0, -2.0 / d, 0.0, 2.0 / d])


def make_q4(b: float) -> Polynomial:
    b, s = _e4(b)
    # denominator b^2 (b^2 - 1) = -b^2 s^2
    scale = -2.0 / (b * b * s * s)
    return scale * X * Polynomial([-b * s, b - s, 1.0])


def make_p2_e4(b: float) -> Polynomial:
    b, s = _e4(b)
    return Polynomial.from_roots([b, -s], leading=1.0 / (b * s))


def make_q2_e4(b: float) -> Polynomial:
    b, s = _e4(b)
    return Polynomial([0.0, 1.0 / (b * s)])


# The two degree-2 polynomials belong to different sets; keep their names apart.
p2_of_e2 = make_p2_e2
p2_of_e4 = make_p2_e4


# --- Pell equations --------------------------------------------------------


@dataclass(frozen=True)
class PellData:
    """Root data of a generalized Pell equation. Empty tuples drop the factor,
    so the classical equation P^2 - (x^2 - 1) Q^2 = 1 is ``PellData()``."""

    alphas: tuple[float, ...] = ()
    betas: tuple[float, ...] = ()
    gammas: tuple[float, ...] = ()

    @classmethod
    def e2(cls, b: float) -> "PellData":
        # degree-2 solution: gamma = (-1)^{n+1} b = -b
        return cls(alphas=(-b,), betas=(b,), gammas=(-b,))

    @classmethod
    def e4(cls, b: float, degree: int) -> "PellData":
        b, s = _e4(b)
        if degree == 4:
            gammas = (-b, s)
        elif degree == 2:
            gammas = (-s, b)
        else:
            raise DomainError(f"E4 gamma points are only known for degree 2 and 4, got {degree}")
        return cls(alphas=(-b, s), betas=(b, -s), gammas=gammas)


@dataclass(frozen=True)
class PellSolution:
    P: Polynomial
    Q: Polynomial
    data: PellData

    def _terms(self):
        left = Polynomial.from_roots(self.data.alphas) * self.P**2
        right = (X * X - 1.0) * Polynomial.from_roots(self.data.betas) * self.Q**2
        rhs = Polynomial.from_roots(self.data.gammas)
        return left, right, rhs

    def residual(self) -> Polynomial:
        left, right, rhs = self._terms()
        return left - right - rhs

    def relative_residual(self) -> float:
        """max|residual coefficient| over the largest coefficient of either side term."""
        left, right, _ = self._terms()
        scale = max(left.max_abs_coeff(), right.max_abs_coeff(), 1.0)
        res = self.residual()
        return res.max_abs_coeff() / scale


def pell_residual(sol: PellSolution) -> Polynomial:
    return sol.residual()


def classical_solution(n: int) -> PellSolution:
    """(T_n, U_{n-1}) for the classical Pell equation, n >= 1."""
    if n < 1:
        raise DomainError(f"classical Pell solution needs n >= 1, got {n}")
    return PellSolution(chebyshev_t(n), chebyshev_u(n - 1), PellData())


def e2_solution(b: float) -> PellSolution:
    return PellSolution(make_p2_e2(b), make_q2_e2(b), PellData.e2(check_b(SetKind.E2, b)))


def e4_solution(b: float, degree: int = 4) -> PellSolution:
    if degree == 4:
        return PellSolution(make_p4(b), make_q4(b), PellData.e4(b, 4))
    if degree == 2:
        return PellSolution(make_p2_e4(b), make_q2_e4(b), PellData.e4(b, 2))
    raise DomainError(f"E4 Pell solutions are only constructed for degree 2 and 4, got {degree}")


# --- branch inverses -------------------------------------------------------


def _check_z(z: float):
    if not -1.0 <= z <= 1.0:
        raise DomainError(f"branch inverse needs -1 <= z <= 1, got z={z!r}")


def branch_inverse_p2(i: int, z: float, b: float) -> float:
    """Preimage of z under the E2 map on [-1,-b] (i=1) or [b,1] (i=2)."""
    _check_z(z)
    b = check_b(SetKind.E2, b)
    r = math.sqrt(0.5 * ((1.0 + b * b) + z * (1.0 - b) * (1.0 + b)))
    if i == 1:
        return -r
    if i == 2:
        return r
    raise DomainError(f"E2 branch index must be 1 or 2, got {i}")


def branch_inverse_p4(i: int, z: float, b: float) -> float:
    """Preimage of z under P4 on the i-th monotone piece.

    Pieces left to right: [-1,-b], [-s,0], [0,s], [b,1].
    """
    _check_z(z)
    b, s = _e4(b)
    eps = 2.0 * (1.0 - z) * b * b * s * s
    root = math.sqrt(1.0 - eps)
    if i in (2, 3):
        # 1 - sqrt(1 - eps) without cancellation
        mag = math.sqrt(0.5 * eps / (1.0 + root))
    elif i in (1, 4):
        mag = math.sqrt(0.5 * (1.0 + root))
    else:
        raise DomainError(f"E4 branch index must be in 1..4, got {i}")
    return -mag if i in (1, 2) else mag


def partial_fraction_weights(z: float, b: float, degree: int = 4) -> list[float]:
    """Residues Q(x_i)/P'(x_i) at the preimages x_i of z, for the degree-2 (E2)
    or degree-4 (E4) mapping, ordered by branch. They sum to one."""
    if not -1.0 < z < 1.0:
        raise DomainError(f"partial fractions need -1 < z < 1 (distinct roots), got z={z!r}")
    if degree == 4:
        p, q = make_p4(b), make_q4(b)
        roots = [branch_inverse_p4(i, z, b) for i in (1, 2, 3, 4)]
    elif degree == 2:
        p, q = make_p2_e2(b), make_q2_e2(b)
        roots = [branch_inverse_p2(i, z, b) for i in (1, 2)]
    else:
        raise DomainError(f"degree must be 2 or 4, got {degree}")
    # Pell pairs are fixed only up to the sign of Q; the sum rule needs Q and P
    # to share their leading coefficient.
    if q.leading * p.leading < 0:
        q = -q
    dp = p.deriv()
    return [q(x) / dp(x) for x in roots]


def middle_weight_deficit(z: float, b: float) -> float:
    """1 - 2(w2 + w3) for the E4 mapping, in closed form."""
    if not -1.0 <= z <= 1.0:
        raise DomainError(f"need -1 <= z <= 1, got z={z!r}")
    b = float(b)
    if not SQRT_HALF - 1e-15 <= b < 1.0:
        raise DomainError(f"need 1/sqrt(2) <= b < 1, got b={b!r}")
    s = complement(b)
    b2 = b * b
    radicand = 1.0 - 2.0 * b2 + 2.0 * b2 * b2 + (2.0 * b2 - 2.0 * b2 * b2) * z
    return (b - s) ** 2 / math.sqrt(radicand)


def e2_odd_weight(z: float, b: float) -> float:
    """1 - 2 w1 for the E2 mapping, in closed form."""
    b = check_b(SetKind.E2, b)
    return b * math.sqrt(2.0) / math.sqrt(1.0 + b * b) / math.sqrt(
        1.0 - (b * b - 1.0) / (b * b + 1.0) * z
    )
