"""Interval sets, the deformation angle cos(phi) and the Akhiezer weights.

Everything here is a scalar point evaluator. E2(b) = [-1,-b] U [b,1] and
E4(b) = [-1,-b] U [-s,s] U [b,1] with s = sqrt(1 - b^2).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError, PoleError

SQRT_HALF = math.sqrt(0.5)
MU_FLOOR = -0.5 + 1e-12
_REL_EPS = 1e-14


def _close(x: float, y: float) -> bool:
    return abs(x - y) <= _REL_EPS * max(1.0, abs(x))


class SetKind(enum.Enum):
    FULL = "full"
    HALF = "half"
    E2 = "e2"
    E4 = "e4"


class Method(enum.Enum):
    CLOSED = "closed"
    SERIES = "series"
    QUADRATURE = "quad"


def complement(b: float) -> float:
    """s = sqrt(1 - b^2), formed as sqrt((1-b)(1+b))."""
    return math.sqrt((1.0 - b) * (1.0 + b))


def check_b(kind: SetKind, b: float | None) -> float:
    """Validate the gap parameter for ``kind`` and return it as a float."""
    if kind in (SetKind.FULL, SetKind.HALF):
        return 0.0 if b is None else float(b)
    if b is None:
        raise DomainError(f"set {kind.value} needs a gap parameter b")
    b = float(b)
    if kind is SetKind.E2 and not (0.0 <= b < 1.0):
        raise DomainError(f"E2 needs 0 <= b < 1, got b={b!r}")
    if kind is SetKind.E4 and not (SQRT_HALF - 1e-15 <= b < 1.0):
        raise DomainError(f"E4 needs 1/sqrt(2) <= b < 1, got b={b!r}")
    return b


def check_mu(mu: float) -> float:
    mu = float(mu)
    if not mu > MU_FLOOR:
        raise DomainError(f"weight exponent needs mu > -1/2, got mu={mu!r}")
    return mu


@dataclass(frozen=True)
class IntervalSet:
    """Sorted disjoint closed intervals; ``singular[i]`` flags (lo, hi) of interval i
    where the weight has an inverse-square-root singularity."""

    intervals: tuple[tuple[float, float], ...]
    singular: tuple[tuple[bool, bool], ...]

    def __post_init__(self):
        prev = -math.inf
        for lo, hi in self.intervals:
            if not lo < hi or lo <= prev:
                raise DomainError(f"intervals must be sorted and disjoint: {self.intervals}")
            prev = hi

    def contains(self, x: float) -> bool:
        return any(
            (lo <= x <= hi) or _close(x, lo) or _close(x, hi) for lo, hi in self.intervals
        )

    @property
    def endpoints(self) -> list[float]:
        return [e for iv in self.intervals for e in iv]


def contains(s: IntervalSet, x: float) -> bool:
    return s.contains(x)


def _merged(pieces, flags) -> IntervalSet:
    ivs = [list(pieces[0])]
    fl = [list(flags[0])]
    for (lo, hi), (fl_lo, fl_hi) in zip(pieces[1:], flags[1:]):
        if lo - ivs[-1][1] <= _REL_EPS * max(1.0, abs(lo)):
            ivs[-1][1] = hi
            fl[-1][1] = fl_hi
        else:
            ivs.append([lo, hi])
            fl.append([fl_lo, fl_hi])
    return IntervalSet(tuple(map(tuple, ivs)), tuple(map(tuple, fl)))


def make_set(kind: SetKind, b: float | None = None) -> IntervalSet:
    """Interval structure of the support of each moment family.

    Touching intervals (E2 at b=0, E4 at b=1/sqrt(2)) are merged.
    """
    kind = SetKind(kind)
    b = check_b(kind, b)
    if kind is SetKind.FULL:
        return IntervalSet(((-1.0, 1.0),), ((True, True),))
    if kind is SetKind.HALF:
        return IntervalSet(((0.0, 1.0),), ((False, True),))
    if kind is SetKind.E2:
        return _merged([(-1.0, -b), (b, 1.0)], [(True, False), (True, True)])
    s = complement(b)
    return _merged(
        [(-1.0, -b), (-s, s), (b, 1.0)],
        [(True, False), (True, False), (True, True)],
    )


@dataclass(frozen=True)
class MomentQuery:
    """A moment request. ``n`` is the literal power of cos(phi) (or of x for the
    full and half range families)."""

    kind: SetKind
    n: int
    mu: float
    b: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", SetKind(self.kind))
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"moment order needs n >= 0 integer, got n={self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "mu", check_mu(self.mu))
        if self.kind in (SetKind.E2, SetKind.E4):
            object.__setattr__(self, "b", check_b(self.kind, self.b))


@dataclass(frozen=True)
class MomentValue:
    value: float
    method: Method
    error_estimate: float = 0.0
    terms_or_nodes: int = 0
    details: dict = field(default_factory=dict, compare=False)


def _require_member(s: IntervalSet, x: float, name: str):
    if not s.contains(x):
        raise DomainError(f"x={x!r} is not in {name}")


def cos_phi_e2(x: float, b: float) -> float:
    """sign(x) * sqrt((x^2 - b^2) / (1 - b^2)) on E2(b)."""
    b = check_b(SetKind.E2, b)
    _require_member(make_set(SetKind.E2, b), x, f"E2({b})")
    mag = math.sqrt(max(0.0, (abs(x) - b) * (abs(x) + b) / ((1.0 - b) * (1.0 + b))))
    return math.copysign(mag, x) if x != 0 else 0.0


def _in_middle(x: float, s: float) -> bool:
    return abs(x) <= s or _close(abs(x), s)


def cos_phi_e4(x: float, b: float) -> float:
    """cos(phi) on E4(b): magnitude sqrt((P4 + 1)/2), negative on the middle interval."""
    b = check_b(SetKind.E4, b)
    _require_member(make_set(SetKind.E4, b), x, f"E4({b})")
    s = complement(b)
    ax = abs(x)
    prod = (ax - b) * (ax + b) * (ax - s) * (ax + s)
    mag = math.sqrt(max(0.0, prod)) / (b * s)
    return -mag if _in_middle(x, s) else mag


def weight_e2(x: float, b: float) -> float:
    """Akhiezer weight sqrt((x + b) / ((1 - x^2)(x - b))) on E2(b)."""
    b = check_b(SetKind.E2, b)
    _require_member(make_set(SetKind.E2, b), x, f"E2({b})")
    poles = (-1.0, 1.0) if b == 0 else (-1.0, b, 1.0)
    if any(_close(x, p) for p in poles):
        raise PoleError(f"E2 weight is singular at x={x!r}")
    if b == 0:
        return 1.0 / math.sqrt((1.0 - x) * (1.0 + x))
    return math.sqrt(abs(x + b) / ((1.0 - x) * (1.0 + x) * abs(x - b)))


def weight_e4(x: float, b: float) -> float:
    """Akhiezer weight of E4(b)."""
    b = check_b(SetKind.E4, b)
    _require_member(make_set(SetKind.E4, b), x, f"E4({b})")
    s = complement(b)
    if any(_close(x, p) for p in (-1.0, 1.0, b, -s)):
        raise PoleError(f"E4 weight is singular at x={x!r}")
    num = abs((x - s) * (x + b))
    den = (1.0 - x) * (1.0 + x) * abs((x - b) * (x + s))
    return math.sqrt(num / den)
