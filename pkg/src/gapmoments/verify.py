"""Verification suite: cross-route checks of every moment family and identity.

Each check returns a :class:`CheckResult`; ``run_all`` drives them for the
CLI ``verify`` command and the acceptance tests.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Union

from . import moments, pell
from .geometry import SQRT_HALF, MomentQuery, SetKind, complement, cos_phi_e4, weight_e4
from .quadrature import moment_by_quadrature, t2_composed_moment
from .specfun import gauss_2f1, gauss_2f1_integral_oracle

MU_GRID = (-0.25, 0.0, 0.5, 1.0, 2.5)
B_GRID = (0.72, 0.8, 0.9, 0.95)


@dataclass
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    passed: bool
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  {self.name:<44s} max_dev={self.max_deviation:.3e}"
            f"  tol={self.tolerance:.0e}  ({self.seconds:.2f}s)"
        )


def _result(name, devs, tol, t0, notes=()):
    worst = max(devs, default=0.0)
    ok = all(d <= tol for d in devs) and all(math.isfinite(d) for d in devs)
    return CheckResult(name, worst, tol, ok, time.perf_counter() - t0, list(notes))


def check_closed_vs_quadrature(quick: bool = False) -> CheckResult:
    """Criterion 1: E4 closed forms against direct quadrature."""
    t0 = time.perf_counter()
    mus = MU_GRID[:2] if quick else MU_GRID
    ns = range(4) if quick else range(9)
    bs = B_GRID[::2] if quick else B_GRID
    devs = []
    for mu, n, b in itertools.product(mus, ns, bs):
        q = MomentQuery(SetKind.E4, n, mu, b)
        quad = moment_by_quadrature(q).value
        closed = moments.moment(q).value
        devs.append(abs(closed - quad) / max(1.0, abs(quad)))
    return _result("closed form vs quadrature (E4)", devs, 1e-8, t0)


def check_even_b_independence(quick: bool = False) -> CheckResult:
    """Criterion 2: even E4 moments do not depend on b."""
    t0 = time.perf_counter()
    mus = MU_GRID[:2] if quick else MU_GRID
    ns = range(3) if quick else range(5)
    devs = []
    for mu, k in itertools.product(mus, ns):
        vals = [moment_by_quadrature(MomentQuery(SetKind.E4, 2 * k, mu, b)).value for b in B_GRID]
        ref = moments.e4_even_moment(k, mu).value
        devs.append(max(vals) - min(vals))
        devs.extend(abs(v - ref) for v in vals)
    return _result("E4 even moments independent of b", devs, 1e-8, t0)


def _grid(lo, hi, count):
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def check_e2_representations(quick: bool = False) -> list[CheckResult]:
    """Criterion 3: series vs hypergeometric (1e-9) and both vs quadrature (1e-8)."""
    t0 = time.perf_counter()
    devs_rep, devs_quad = [], []
    for b in _grid(0.0, 0.95, 10 if quick else 50):
        s = moments.e2_odd_moment_series(0, 0.0, b).value
        h = moments.e2_odd_moment_hyp(0, 0.0, b).value
        devs_rep.append(abs(s - h))
        if b > 0:
            qv = moment_by_quadrature(MomentQuery(SetKind.E2, 1, 0.0, b)).value
        else:
            qv = 0.0  # E2(0) is symmetric, so every odd moment vanishes
        devs_quad.extend([abs(s - qv), abs(h - qv)])
    return [
        _result("E2 odd moment: series vs 2F1", devs_rep, 1e-9, t0),
        _result("E2 odd moment: both vs quadrature", devs_quad, 1e-8, t0),
    ]


def check_pell_residuals(quick: bool = False, perturb: float = 0.0) -> CheckResult:
    """Criterion 4. ``perturb`` is added to Q4 as a fault-injection hook."""
    t0 = time.perf_counter()
    sols = [pell.classical_solution(n) for n in range(1, 21)]
    sols += [pell.e2_solution(b) for b in (0.0, 0.3, 0.6, 0.9)]
    for b in B_GRID + (0.99,):
        p4 = pell.e4_solution(b, 4)
        if perturb:
            p4 = pell.PellSolution(p4.P, p4.Q + perturb, p4.data)
        sols += [p4, pell.e4_solution(b, 2)]
    devs = [s.relative_residual() for s in sols]
    return _result("Pell residuals (classical, E2, E4)", devs, 1e-10, t0)


def check_partial_fractions(quick: bool = False, seed: int = 2024) -> CheckResult:
    """Criterion 5: partial-fraction sum rules and the middle-weight closed form."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    devs = []
    count = 20 if quick else 100
    for b in B_GRID:
        for _ in range(count):
            z = rng.uniform(-0.99, 0.99)
            w = pell.partial_fraction_weights(z, b, 4)
            devs.append(abs(sum(w) - 1.0))
            devs.append(abs(1.0 - 2.0 * (w[1] + w[2]) - pell.middle_weight_deficit(z, b)))
    for b in (0.0, 0.3, 0.6, 0.9):
        for _ in range(count):
            z = rng.uniform(-0.99, 0.99)
            devs.append(abs(sum(pell.partial_fraction_weights(z, b, 2)) - 1.0))
    return _result("partial-fraction weights sum to one", devs, 1e-11, t0)


def _e4_sample_points(b: float, count: int):
    """Midpoints of a uniform grid laid over the total length of E4(b)."""
    s = complement(b)
    pieces = [(-1.0, -b), (-s, s), (b, 1.0)]
    total = sum(hi - lo for lo, hi in pieces)
    for i in range(count):
        u = (i + 0.5) / count * total
        for lo, hi in pieces:
            if u <= hi - lo:
                yield lo + u
                break
            u -= hi - lo


def check_mapping_identities(quick: bool = False) -> CheckResult:
    """Criterion 6: cos^2(phi) = (P4+1)/2 and w = |Q4|/sqrt(1-P4^2) on E4."""
    t0 = time.perf_counter()
    devs = []
    count = 200 if quick else 1000
    for b in B_GRID:
        p4, q4 = pell.make_p4(b), pell.make_q4(b)
        for x in _e4_sample_points(b, count):
            c = cos_phi_e4(x, b)
            p = p4(x)
            devs.append(abs(c * c - 0.5 * (p + 1.0)))
            w = weight_e4(x, b)
            alt = abs(q4(x)) / math.sqrt((1.0 - p) * (1.0 + p))
            devs.append(abs(w - alt) / w)
    return _result("E4 mapping identities for cos(phi) and w", devs, 1e-11, t0)


def check_deformation_limits(quick: bool = False) -> list[CheckResult]:
    """Criterion 7: b -> 1 and b -> 1/sqrt(2) limits and the half-range factor 2."""
    t0 = time.perf_counter()
    near_one = []
    for n, mu in itertools.product(range(7), (0.0, 1.0)):
        lim = moments.e4_odd_limit(n, mu)
        val = moments.e4_odd_moment(n, mu, 1.0 - 1e-12).value
        near_one.append(abs(val - lim) / abs(lim))
    out = [_result("E4 odd moment as b -> 1", near_one, 1e-5, t0)]

    t0 = time.perf_counter()
    near = moments.e4_odd_moment(0, 0.0, SQRT_HALF + 1e-6).value
    ok = 0.0 < near <= 1e-3
    out.append(CheckResult("E4 odd moment near b = 1/sqrt(2)", near, 1e-3, ok,
                           time.perf_counter() - t0, [f"value {near:.3e}, must be positive"]))

    t0 = time.perf_counter()
    devs = []
    for n, mu in itertools.product(range(11), MU_GRID):
        lim = moments.e4_odd_limit(n, mu)
        half = moments.half_range_moment(2 * n + 1, mu).value
        devs.append(abs(lim - 2.0 * half) / abs(lim))
    out.append(_result("limit equals twice the half-range moment", devs, 1e-13, t0))
    return out


def check_hypergeometric(quick: bool = False) -> list[CheckResult]:
    """Criterion 8: 2F1 against the Euler integral and Pfaff self-consistency."""
    t0 = time.perf_counter()
    devs = []
    families = (
        lambda n, mu: (0.5, mu + 0.5, mu + n + 1.5),
        lambda n, mu: (0.5, mu + 1.0, mu + n + 1.5),
    )
    grid = itertools.product(families, (0, 2, 5), (-0.25, 0.5), (0.1, 0.5, 0.8, 0.95, 0.99))
    for fam, n, mu, z in grid:
        if quick and (n == 5 or z == 0.95):
            continue
        a, b, c = fam(n, mu)
        oracle = gauss_2f1_integral_oracle(a, b, c, z)
        devs.append(abs(gauss_2f1(a, b, c, z) - oracle) / abs(oracle))
    out = [_result(f"2F1 vs Euler integral ({len(devs)} points)", devs, 1e-9, t0)]

    t0 = time.perf_counter()
    pfaff = []
    for fam, n, mu in itertools.product(families, range(4), MU_GRID):
        a, b, c = fam(n, mu)
        for z in _grid(-0.9, 0.9, 7 if quick else 19):
            lhs = gauss_2f1(a, b, c, z)
            rhs = (1.0 - z) ** (-a) * gauss_2f1(a, c - b, c, z / (z - 1.0))
            pfaff.append(abs(lhs - rhs) / abs(lhs))
    out.append(_result("2F1 Pfaff self-consistency", pfaff, 1e-10, t0))
    return out


def check_degenerate_case(quick: bool = False) -> list[CheckResult]:
    """Criterion 9: the T2-composed integral at b = 1/sqrt(2)."""
    t0 = time.perf_counter()
    even, odd = [], []
    for mu, n in itertools.product(MU_GRID, range(9)):
        v = t2_composed_moment(n, mu).value
        if n % 2 == 0:
            ref = moments.e4_even_moment(n // 2, mu).value
            even.append(abs(v - ref) / max(1.0, abs(ref)))
        else:
            odd.append(abs(v))
            odd.append(abs(moments.e4_odd_moment(n // 2, mu, SQRT_HALF).value))
    return [
        _result("b = 1/sqrt(2): even powers vs closed form", even, 1e-8, t0),
        _result("b = 1/sqrt(2): odd powers vanish", odd, 1e-9, t0),
    ]


CHECKS: dict[str, Callable[..., Union[CheckResult, list[CheckResult]]]] = {
    "closed_vs_quadrature": check_closed_vs_quadrature,
    "even_b_independence": check_even_b_independence,
    "e2_representations": check_e2_representations,
    "pell_residuals": check_pell_residuals,
    "partial_fractions": check_partial_fractions,
    "mapping_identities": check_mapping_identities,
    "deformation_limits": check_deformation_limits,
    "hypergeometric": check_hypergeometric,
    "degenerate_case": check_degenerate_case,
}

QUICK_CHECKS = ("pell_residuals", "partial_fractions", "deformation_limits", "closed_vs_quadrature")


def run_check(name: str, quick: bool = False, perturb: float = 0.0) -> list[CheckResult]:
    """Run one named check; always returns a list of sub-results."""
    if name == "pell_residuals":
        res = check_pell_residuals(quick, perturb=perturb)
    else:
        res = CHECKS[name](quick)
    return res if isinstance(res, list) else [res]


def run_all(quick: bool = False, perturb: float = 0.0) -> list[CheckResult]:
    names = QUICK_CHECKS if quick else tuple(CHECKS)
    out: list[CheckResult] = []
    for name in names:
        out.extend(run_check(name, quick, perturb))
    return out
