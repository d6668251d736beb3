"""Closed-form and series evaluators for the ultraspherical moment families.

Families and their integrals (weight exponent mu > -1/2):

* full range:  int_{-1}^{1} x^n (1-x^2)^(mu-1/2) dx
* half range:  int_0^1 x^n (1-x^2)^(mu-1/2) dx
* E2(b), E4(b): int_E cos(phi)^n (1 - cos(phi)^2)^mu w_E(x) dx

All Gamma quotients are assembled in signed-log space and exponentiated once.
"""

from __future__ import annotations

import math

from .errors import ConvergenceError, DomainError
from .geometry import (
    Method,
    MomentQuery,
    MomentValue,
    SetKind,
    check_b,
    check_mu,
    complement,
)
from .quadrature import DEFAULT_SPEC, QuadratureSpec, moment_by_quadrature
from .specfun import (
    DEFAULT_TOL,
    MAX_TERMS,
    SignedLogValue,
    gauss_2f1,
    log_gamma,
    log_pochhammer,
    pochhammer,
)

_EPS = 2.0**-52
_LOG_SQRT_PI = 0.5 * math.log(math.pi)


def _check_n(n: int) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"moment order needs n >= 0 integer, got n={n!r}")
    return int(n)


def _closed(value: float, ulps: float = 8.0) -> MomentValue:
    return MomentValue(value, Method.CLOSED, ulps * _EPS * abs(value), 0)


def full_range_moment(n: int, mu: float) -> MomentValue:
    """int_{-1}^{1} x^n (1-x^2)^(mu-1/2) dx; odd orders vanish exactly."""
    n, mu = _check_n(n), check_mu(mu)
    if n % 2:
        return MomentValue(0.0, Method.CLOSED, 0.0, 0)
    m = n // 2
    v = log_gamma(m + 0.5) * log_gamma(mu + 0.5) / log_gamma(m + mu + 1.0)
    return _closed(float(v))


def half_range_moment(n: int, mu: float) -> MomentValue:
    """int_0^1 x^n (1-x^2)^(mu-1/2) dx = Gamma(n/2+1/2) Gamma(mu+1/2) / (2 Gamma(n/2+mu+1))."""
    n, mu = _check_n(n), check_mu(mu)
    v = log_gamma(0.5 * n + 0.5) * log_gamma(mu + 0.5) / log_gamma(0.5 * n + mu + 1.0)
    return _closed(0.5 * float(v))


def half_range_moment_pochhammer(n: int, mu: float) -> MomentValue:
    """Half-range moments through shifted factorials, split by parity."""
    n, mu = _check_n(n), check_mu(mu)
    k = n // 2
    if n % 2 == 0:
        return _closed(0.5 * float(_even_log(k, mu)))
    v = log_pochhammer(1.0, k) / log_pochhammer(mu + 0.5, k + 1)
    return _closed(0.5 * float(v))


def _even_log(k: int, mu: float) -> SignedLogValue:
    # Gamma(1/2) Gamma(mu+1/2) / Gamma(mu+1) * (1/2)_k / (mu+1)_k
    return (
        log_gamma(0.5)
        * log_gamma(mu + 0.5)
        / log_gamma(mu + 1.0)
        * log_pochhammer(0.5, k)
        / log_pochhammer(mu + 1.0, k)
    )


def e2_even_moment(n: int, mu: float) -> MomentValue:
    """Moment of cos(phi)^(2n) on E2; the same for every gap parameter b."""
    n, mu = _check_n(n), check_mu(mu)
    return _closed(float(_even_log(n, mu)))


def e4_even_moment(n: int, mu: float) -> MomentValue:
    """Moment of cos(phi)^(2n) on E4; the same for every gap parameter b."""
    n, mu = _check_n(n), check_mu(mu)
    return _closed(float(_even_log(n, mu)))


def e2_odd_moment_hyp(n: int, mu: float, b: float, tol: float = DEFAULT_TOL) -> MomentValue:
    """Moment of cos(phi)^(2n+1) on E2(b) as a Gamma ratio times 2F1(.;1-b^2)."""
    n, mu = _check_n(n), check_mu(mu)
    b = check_b(SetKind.E2, b)
    if b == 0.0:
        return MomentValue(0.0, Method.CLOSED, 0.0, 0)
    c = mu + n + 1.5
    pref = log_gamma(n + 1.0) * log_gamma(mu + 0.5) / log_gamma(c)
    f = gauss_2f1(0.5, mu + 0.5, c, (1.0 - b) * (1.0 + b), tol)
    value = b * float(pref) * f
    return MomentValue(value, Method.CLOSED, (16 * _EPS + tol) * abs(value), 0)


def _gamma_ratios(mu: float):
    """Yield Gamma(mu + k/2) / Gamma(1/2 + k/2) for k = 1, 2, ...

    Each parity class is advanced by its two-step recurrence, which keeps the
    relative error near unit roundoff where lgamma of large arguments would not.
    """
    r = [float(log_gamma(mu + 0.5) / log_gamma(1.0)), float(log_gamma(mu + 1.0) / log_gamma(1.5))]
    k = 1
    while True:
        cur = r[(k - 1) % 2]
        yield cur
        r[(k - 1) % 2] = cur * (mu + 0.5 * k) / (0.5 + 0.5 * k)
        k += 1


def e2_odd_term(k: int, n: int, mu: float) -> float:
    """Coefficient of b^k in the E2 odd-moment series (without the common prefactor).

    The ratio Gamma(n+1-k/2)/Gamma(1-k/2) is read as the polynomial (1-k/2)_n.
    """
    coeff = pochhammer(1.0 - 0.5 * k, n)
    if coeff == 0.0:
        return 0.0
    g = log_gamma(mu + 0.5 * k) / log_gamma(0.5 + 0.5 * k)
    sign = 1.0 if k % 2 else -1.0
    return sign * coeff * float(g)


def e2_odd_moment_series(
    n: int, mu: float, b: float, tol: float = 1e-15
) -> MomentValue:
    """Moment of cos(phi)^(2n+1) on E2(b) as a power series in b.

    Stops after three consecutive terms below ``tol * max(1, |sum|)``. The
    series alternates and its terms can exceed the sum by many orders of
    magnitude as b -> 1; the error estimate covers both the truncated tail and
    that rounding loss.
    """
    n, mu = _check_n(n), check_mu(mu)
    b = check_b(SetKind.E2, b)
    pref = math.exp(_LOG_SQRT_PI) / float(log_gamma(n + 1.0 + mu))
    if b == 0.0:
        return MomentValue(0.0, Method.SERIES, 0.0, 0)
    terms: list[float] = []
    partial = 0.0
    small = 0
    # even k with 2 <= k <= 2n contribute exact zeros; do not let them stop the sum
    k_min_stop = 2 * n + 2
    ratios = _gamma_ratios(mu)
    for k in range(1, MAX_TERMS + 1):
        coeff = pochhammer(1.0 - 0.5 * k, n) * next(ratios)
        term = (coeff if k % 2 else -coeff) * b**k
        terms.append(term)
        partial += term
        if k < k_min_stop or term == 0.0:
            continue
        if abs(term) * pref <= tol * max(1.0, abs(partial * pref)):
            small += 1
            if small == 3:
                total = math.fsum(terms)
                rounding = 16 * _EPS * math.fsum(map(abs, terms))
                err = pref * (sum(map(abs, terms[-3:])) + rounding)
                return MomentValue(pref * total, Method.SERIES, err, k)
        else:
            small = 0
    raise ConvergenceError(
        f"E2 odd-moment series did not converge in {MAX_TERMS} terms (b={b})",
        partial=pref * partial,
        count=MAX_TERMS,
    )


def _e4_odd_prefactor(n: int, mu: float, b: float) -> tuple[float, float]:
    s = complement(b)
    # 1 - 2 b s = (b - s)^2, which stays accurate as b -> 1/sqrt(2)
    gap = (b - s) ** 2
    ratio = float(log_pochhammer(1.0, n) / log_pochhammer(mu + 0.5, n + 1))
    return gap * ratio, s


def e4_odd_moment(n: int, mu: float, b: float, tol: float = DEFAULT_TOL) -> MomentValue:
    """Moment of cos(phi)^(2n+1) on E4(b):

        (1 - 2 b s) (1)_n / (mu+1/2)_{n+1} 2F1(1/2, mu+1/2; mu+n+3/2; 4 b^2 s^2)

    with s = sqrt(1 - b^2). It vanishes as b -> 1/sqrt(2) and tends to
    twice the odd half-range moment as b -> 1.
    """
    n, mu = _check_n(n), check_mu(mu)
    b = check_b(SetKind.E4, b)
    pref, s = _e4_odd_prefactor(n, mu, b)
    z = 1.0 - (2.0 * b * b - 1.0) ** 2  # = 4 b^2 s^2
    if pref == 0.0:
        return MomentValue(0.0, Method.CLOSED, 0.0, 0)
    value = pref * gauss_2f1(0.5, mu + 0.5, mu + n + 1.5, z, tol)
    return MomentValue(value, Method.CLOSED, (16 * _EPS + tol) * abs(value), 0)


def e4_odd_moment_prepfaff(n: int, mu: float, b: float, tol: float = DEFAULT_TOL) -> MomentValue:
    """The same E4 odd moment before Pfaff's transformation:

        (1 - 2 b s)/(2 b^2 - 1) (1)_n/(mu+1/2)_{n+1} 2F1(1/2, n+1; mu+n+3/2; zeta)

    with zeta = -4 b^2 s^2 / (2 b^2 - 1)^2 <= 0. Undefined at b = 1/sqrt(2).
    """
    n, mu = _check_n(n), check_mu(mu)
    b = check_b(SetKind.E4, b)
    d = 2.0 * b * b - 1.0
    if d <= 0.0:
        raise DomainError("the pre-Pfaff form needs b > 1/sqrt(2)")
    pref, s = _e4_odd_prefactor(n, mu, b)
    zeta = -4.0 * b * b * s * s / (d * d)
    value = pref / d * gauss_2f1(0.5, n + 1.0, mu + n + 1.5, zeta, tol)
    return MomentValue(value, Method.CLOSED, (16 * _EPS + tol) * abs(value), 0)


def e4_odd_limit(n: int, mu: float) -> float:
    """(1)_n / (mu+1/2)_{n+1}: the E4 odd moment as the gaps reach maximal size."""
    n, mu = _check_n(n), check_mu(mu)
    return float(log_pochhammer(1.0, n) / log_pochhammer(mu + 0.5, n + 1))


def moment(
    q: MomentQuery,
    method: Method | str = Method.CLOSED,
    *,
    tol: float = DEFAULT_TOL,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> MomentValue:
    """Dispatch a query to the matching evaluator.

    ``q.n`` is the literal power; for E2/E4 it is split here into parity and
    half-order. The series method only exists for odd E2 moments.
    """
    method = Method(method)
    if method is Method.QUADRATURE:
        return moment_by_quadrature(q, spec)
    n, mu = q.n, q.mu
    half, odd = divmod(n, 2)
    if method is Method.SERIES:
        if q.kind is not SetKind.E2 or not odd:
            raise DomainError("the series method is only defined for odd E2 moments")
        return e2_odd_moment_series(half, mu, q.b, tol=max(tol, 1e-15))
    if q.kind is SetKind.FULL:
        return full_range_moment(n, mu)
    if q.kind is SetKind.HALF:
        return half_range_moment(n, mu)
    if q.kind is SetKind.E2:
        return e2_odd_moment_hyp(half, mu, q.b, tol) if odd else e2_even_moment(half, mu)
    return e4_odd_moment(half, mu, q.b, tol) if odd else e4_even_moment(half, mu)
