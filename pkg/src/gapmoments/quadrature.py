"""Double-exponential (tanh-sinh) quadrature and direct moment integrals.

Integrands that blow up algebraically at an endpoint lose accuracy if they
are evaluated at ``x`` alone, because ``x - lo`` is then only known to one ulp
of ``lo``. With ``distances=True`` the integrand is called as
``f(x, x - lo, hi - x)`` with both distances computed directly from the
transformation, so singular factors can be formed without cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConvergenceError, DomainError
from .geometry import (
    Method,
    MomentQuery,
    MomentValue,
    SetKind,
    complement,
    make_set,
)

_HALF_PI = 0.5 * math.pi
# Nodes stop where the distance to the nearest endpoint falls below this
# fraction of the half-width.
_TINY = 1e-200
_T_MAX = math.asinh(math.log(2.0 / _TINY) / math.pi)
_MIN_LEVEL = 3
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_level: int = 12
    split_points: tuple[float, ...] = ()

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if not 0 < self.max_level <= 15:
            raise DomainError(f"max_level must lie in 1..15, got {self.max_level}")


DEFAULT_SPEC = QuadratureSpec()


class QuadResult(NamedTuple):
    value: float
    error: float
    n_eval: int


def _nodes(t: np.ndarray, half_width: float):
    """Distances to both endpoints and weights for abscissae t (unit step)."""
    u = math.pi * np.sinh(t)
    # 1 - tanh(u/2) = 2 / (1 + e^u) and 1 + tanh(u/2) = 2 / (1 + e^-u)
    e = np.exp(-np.abs(u))
    small = 2.0 * half_width * e / (1.0 + e)
    large = 2.0 * half_width / (1.0 + e)
    dr = np.where(t >= 0, small, large)
    dl = np.where(t >= 0, large, small)
    w = half_width * _HALF_PI * np.cosh(t) * 4.0 * e / (1.0 + e) ** 2
    return dl, dr, w


def _level_sum(f, lo, hi, t, distances):
    half_width = 0.5 * (hi - lo)
    dl, dr, w = _nodes(t, half_width)
    keep = (dl > 0) & (dr > 0)
    dl, dr, w, t = dl[keep], dr[keep], w[keep], t[keep]
    x = np.where(t < 0, lo + dl, hi - dr)
    if distances:
        fx = f(x, dl, dr)
    else:
        # nodes that round onto an endpoint are nudged one ulp inward
        x = np.where(x <= lo, np.nextafter(lo, hi), x)
        x = np.where(x >= hi, np.nextafter(hi, lo), x)
        fx = f(x)
    fx = np.broadcast_to(np.asarray(fx, dtype=float), x.shape)
    return float(np.sum(w * fx)), x.size


def _integrate_one(f, lo, hi, spec, distances) -> QuadResult:
    k_max = int(math.ceil(_T_MAX))
    t = np.arange(-k_max, k_max + 1, dtype=float)
    t = t[np.abs(t) <= _T_MAX]
    total, n_eval = _level_sum(f, lo, hi, t, distances)
    estimate = total
    prev = math.nan
    diff = math.inf
    for level in range(1, spec.max_level + 1):
        h = 2.0**-level
        t = np.arange(-k_max / h + 1, k_max / h, 2.0) * h
        t = t[np.abs(t) <= _T_MAX]
        part, n = _level_sum(f, lo, hi, t, distances)
        total += part
        n_eval += n
        prev, estimate = estimate, total * h
        # successive levels can agree bit-for-bit; keep a rounding-level floor
        diff = max(abs(estimate - prev), 4 * _EPS * abs(estimate))
        if not math.isfinite(estimate):
            raise ConvergenceError(
                f"non-finite quadrature estimate on [{lo}, {hi}]",
                partial=estimate,
                count=n_eval,
            )
        if level >= _MIN_LEVEL and diff <= max(spec.abs_tol, spec.rel_tol * abs(estimate)):
            return QuadResult(estimate, diff, n_eval)
    raise ConvergenceError(
        f"tanh-sinh quadrature on [{lo}, {hi}] missed tolerance at level {spec.max_level}"
        f" (last difference {diff:.3g})",
        partial=estimate,
        count=n_eval,
        error=diff,
    )


def integrate_de(
    f: Callable,
    lo: float,
    hi: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    distances: bool = False,
) -> QuadResult:
    """Integrate ``f`` over [lo, hi] with level-doubling tanh-sinh quadrature.

    ``f`` must accept numpy arrays. Interior ``spec.split_points`` cut the
    range into pieces that are integrated separately, left to right; values
    and error estimates add.

    Raises ConvergenceError (carrying the best estimate) if ``max_level`` is
    reached before successive levels agree to
    ``max(abs_tol, rel_tol * |value|)``.
    """
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    cuts = [lo] + sorted(p for p in spec.split_points if lo < p < hi) + [hi]
    value = error = 0.0
    n_eval = 0
    for a, b in zip(cuts[:-1], cuts[1:]):
        r = _integrate_one(f, a, b, spec, distances)
        value += r.value
        error += r.error
        n_eval += r.n_eval
    return QuadResult(value, error, n_eval)


# ---------------------------------------------------------------------------
# Moment integrands. Each factor (x - c) is taken from the exact endpoint
# distance when c is an endpoint of the current piece.


def _shift(c, lo, hi, x, dl, dr):
    """x - c, exact near the endpoints of [lo, hi]."""
    if c == lo:
        return dl
    if c == hi:
        return -dr
    return x - c


def _full_range_integrand(n, mu, lo, hi):
    def f(x, dl, dr):
        xm1 = _shift(1.0, lo, hi, x, dl, dr)
        xp1 = _shift(-1.0, lo, hi, x, dl, dr)
        xx = _shift(0.0, lo, hi, x, dl, dr)
        return xx**n * (-xm1 * xp1) ** (mu - 0.5)

    return f


def _pieces_with_zero_split(intervals) -> list[tuple[float, float]]:
    out = []
    for lo, hi in intervals:
        if lo < 0.0 < hi:
            out.extend([(lo, 0.0), (0.0, hi)])
        else:
            out.append((lo, hi))
    return out


def _e2_integrand(n, mu, b, lo, hi):
    sign = 1.0 if lo >= 0 else -1.0

    def f(x, dl, dr):
        xm1 = _shift(1.0, lo, hi, x, dl, dr)
        xp1 = _shift(-1.0, lo, hi, x, dl, dr)
        xmb = _shift(b, lo, hi, x, dl, dr)
        xpb = _shift(-b, lo, hi, x, dl, dr)
        one_minus_x2 = -xm1 * xp1
        cos_phi = sign * np.sqrt(np.abs(xmb * xpb) / ((1.0 - b) * (1.0 + b)))
        ratio = np.sqrt(np.abs(xpb) / np.abs(xmb)) if b > 0 else 1.0
        return (
            cos_phi**n
            * one_minus_x2 ** (mu - 0.5)
            * ((1.0 - b) * (1.0 + b)) ** (-mu)
            * ratio
        )

    return f


def _e4_integrand(n, mu, b, lo, hi):
    s = complement(b)
    bs = b * s

    def f(x, dl, dr):
        xm1 = _shift(1.0, lo, hi, x, dl, dr)
        xp1 = _shift(-1.0, lo, hi, x, dl, dr)
        xmb = _shift(b, lo, hi, x, dl, dr)
        xpb = _shift(-b, lo, hi, x, dl, dr)
        xms = _shift(s, lo, hi, x, dl, dr)
        xps = _shift(-s, lo, hi, x, dl, dr)
        xx = _shift(0.0, lo, hi, x, dl, dr)
        one_minus_x2 = -xm1 * xp1
        # negative on the middle interval [-s, s]
        sign = np.where(np.abs(x) <= s, -1.0, 1.0)
        cos_phi = sign * np.sqrt(np.abs(xmb * xpb * xms * xps)) / bs
        return (
            cos_phi**n
            * np.abs(xx) ** (2.0 * mu)
            * one_minus_x2 ** (mu - 0.5)
            * bs ** (-2.0 * mu)
            * np.sqrt(np.abs(xms * xpb) / np.abs(xmb * xps))
        )

    return f


def _t2_integrand(n, mu, lo, hi):
    # cos(phi) at b = 1/sqrt(2) is T2(x) = 2x^2 - 1 and the weight is 1/sqrt(1-x^2).
    def f(x, dl, dr):
        xm1 = _shift(1.0, lo, hi, x, dl, dr)
        xp1 = _shift(-1.0, lo, hi, x, dl, dr)
        xx = _shift(0.0, lo, hi, x, dl, dr)
        one_minus_x2 = -xm1 * xp1
        t2 = 2.0 * xx * xx - 1.0
        return t2**n * np.abs(xx) ** (2.0 * mu) * (4.0 * one_minus_x2) ** mu * one_minus_x2 ** (-0.5)

    return f


def per_interval_integrals(q: MomentQuery, spec: QuadratureSpec = DEFAULT_SPEC):
    """Per-piece quadrature results for the moment integral of ``q``, left to right."""
    n, mu = q.n, q.mu
    if q.kind is SetKind.FULL:
        pieces = [(-1.0, 0.0), (0.0, 1.0)]
        factory = lambda lo, hi: _full_range_integrand(n, mu, lo, hi)  # noqa: E731
    elif q.kind is SetKind.HALF:
        pieces = [(0.0, 1.0)]
        factory = lambda lo, hi: _full_range_integrand(n, mu, lo, hi)  # noqa: E731
    elif q.kind is SetKind.E2:
        pieces = _pieces_with_zero_split(make_set(SetKind.E2, q.b).intervals)
        factory = lambda lo, hi: _e2_integrand(n, mu, q.b, lo, hi)  # noqa: E731
    else:
        pieces = _pieces_with_zero_split(make_set(SetKind.E4, q.b).intervals)
        factory = lambda lo, hi: _e4_integrand(n, mu, q.b, lo, hi)  # noqa: E731
    results = []
    for lo, hi in pieces:
        piece_spec = QuadratureSpec(spec.abs_tol, spec.rel_tol, spec.max_level)
        results.append(((lo, hi), integrate_de(factory(lo, hi), lo, hi, piece_spec, distances=True)))
    return results


def moment_by_quadrature(q: MomentQuery, spec: QuadratureSpec = DEFAULT_SPEC) -> MomentValue:
    """Evaluate the moment integral of ``q`` directly over its interval set."""
    parts = per_interval_integrals(q, spec)
    value = 0.0
    error = 0.0
    nodes = 0
    for _, r in parts:
        value += r.value
        error += r.error
        nodes += r.n_eval
    return MomentValue(value, Method.QUADRATURE, error, nodes)


def t2_composed_moment(n: int, mu: float, spec: QuadratureSpec = DEFAULT_SPEC) -> MomentValue:
    """Quadrature of int_{-1}^{1} T2(x)^n (1 - T2(x)^2)^mu dx / sqrt(1 - x^2),
    the E4 moment integral at the closing-gap parameter b = 1/sqrt(2)."""
    value = error = 0.0
    nodes = 0
    for lo, hi in [(-1.0, 0.0), (0.0, 1.0)]:
        r = integrate_de(_t2_integrand(n, mu, lo, hi), lo, hi, spec, distances=True)
        value += r.value
        error += r.error
        nodes += r.n_eval
    return MomentValue(value, Method.QUADRATURE, error, nodes)

