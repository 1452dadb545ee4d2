"""
Adaptive Simpson quadrature and the iterated remainder integral.

The remainder is written as a double integral with both dummy variables named
u and both limits (c, x). Two readings are supported:

    RUNNING:  R(x) = int_c^x [ int_c^w f'(c) / (w - u + alpha) du ] dw
    FROZEN:   R(x) = int_c^x [ int_c^x f'(c) / (x - u + alpha) du ] dw
"""
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import structlog

from ..core.errors import ConvergenceError, SingularityError
from ..core.models import DerivationConstants, QuadratureSpec, RemainderReading


logger = structlog.get_logger()

# Smallest admissible integrand denominator
DENOMINATOR_FLOOR = 1e-12

# Levels always split before the error test may accept an interval
MIN_DEPTH = 3


@dataclass(frozen=True)
class QuadratureResult:
    """Integral value with its accumulated error estimate."""
    value: float
    error: float
    evaluations: int


def adaptive_simpson(
    fn: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec,
) -> QuadratureResult:
    """
    Integrate fn over [a, b] (b < a gives the oriented integral).

    Each interval is accepted once |S(left) + S(right) - S(whole)| <= 15*tol,
    with tol halved at every split; the returned value carries the Richardson
    correction, so the summed error estimate stays within spec.abs_tol.

    Raises:
        ConvergenceError: if an interval still fails the test at spec.max_depth
    """
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)

    count = [3]
    fa, fb = fn(a), fn(b)
    m = 0.5 * (a + b)
    fm = fn(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def step(a, fa, m, fm, b, fb, whole, tol, depth):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = fn(lm)
        frm = fn(rm)
        count[0] += 2
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if depth >= MIN_DEPTH and abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0, abs(delta) / 15.0
        if depth >= spec.max_depth:
            raise ConvergenceError(
                f"adaptive Simpson exhausted max_depth={spec.max_depth} on [{a}, {b}]",
                a=a, b=b,
            )
        lv, le = step(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)
        rv, re = step(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1)
        return lv + rv, le + re

    value, error = step(a, fa, m, fm, b, fb, whole, spec.abs_tol, 0)
    return QuadratureResult(value, error, count[0])


def inner_integral_closed_form(d: DerivationConstants, w: float) -> float:
    """int_c^w f'(c)/(w - u + alpha) du = f'(c) * ln((w - c + alpha)/alpha)."""
    return d.fprime_c * float(np.log((w - d.c + d.alpha) / d.alpha))


def _integrand(d: DerivationConstants, upper: float) -> Callable[[float], float]:
    fp, alpha = d.fprime_c, d.alpha

    def fn(u: float) -> float:
        denom = upper - u + alpha
        if denom < DENOMINATOR_FLOOR:
            raise SingularityError(
                f"integrand denominator {denom} below {DENOMINATOR_FLOOR} at u={u}",
                u=u, upper=upper,
            )
        return fp / denom

    return fn


def _check_region(d: DerivationConstants, x: float) -> None:
    # smallest denominator over the region is alpha + min(0, x - c)
    if d.alpha + min(0.0, x - d.c) < DENOMINATOR_FLOOR:
        raise SingularityError(
            f"x - c + alpha = {x - d.c + d.alpha} leaves the integrand singular",
            x=x, c=d.c, alpha=d.alpha,
        )


def _inner_spec(q: QuadratureSpec, span: float) -> QuadratureSpec:
    # inner errors are integrated over the outer span
    return QuadratureSpec(abs_tol=0.5 * q.abs_tol / max(abs(span), 1.0), max_depth=q.max_depth)


def double_quadrature_remainder(
    d: DerivationConstants,
    x: float,
    q: QuadratureSpec,
    reading: RemainderReading = RemainderReading.RUNNING,
) -> float:
    """
    Numerical value of the iterated remainder integral at x.

    Raises:
        SingularityError: when x - u + alpha approaches 0 inside the region
        ConvergenceError: when the recursion cap is reached
    """
    _check_region(d, x)
    if x == d.c:
        return 0.0

    inner_spec = _inner_spec(q, x - d.c)
    outer_spec = QuadratureSpec(abs_tol=0.5 * q.abs_tol, max_depth=q.max_depth)

    if reading == RemainderReading.FROZEN:
        inner = adaptive_simpson(_integrand(d, x), d.c, x, inner_spec).value
        return adaptive_simpson(lambda w: inner, d.c, x, outer_spec).value

    def inner(w: float) -> float:
        return adaptive_simpson(_integrand(d, w), d.c, w, inner_spec).value

    return adaptive_simpson(inner, d.c, x, outer_spec).value


def remainder_quadrature_sweep(
    d: DerivationConstants,
    xs: Sequence[float],
    q: QuadratureSpec,
) -> np.ndarray:
    """
    Running-reading remainder at every node of an increasing grid starting at or after c.

    The outer integral is accumulated segment by segment, so each inner
    integral is computed once per outer node rather than once per grid point.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return xs.copy()
    if np.any(np.diff(xs) <= 0.0) or xs[0] < d.c:
        # general grids fall back to the pointwise definition
        return np.array([double_quadrature_remainder(d, float(x), q) for x in xs])

    _check_region(d, float(xs[-1]))
    span = float(xs[-1] - d.c)
    inner_spec = _inner_spec(q, span)

    def inner(w: float) -> float:
        return adaptive_simpson(_integrand(d, w), d.c, w, inner_spec).value

    out = np.empty_like(xs)
    total = 0.0
    left = d.c
    evaluations = 0
    for i, x in enumerate(xs):
        if x > left:
            share = 0.5 * q.abs_tol * (x - left) / max(span, 1e-300)
            seg = adaptive_simpson(
                inner, left, float(x),
                QuadratureSpec(abs_tol=max(share, 1e-300), max_depth=q.max_depth),
            )
            total += seg.value
            evaluations += seg.evaluations
            left = float(x)
        out[i] = total
    logger.debug("oracles.quadrature.sweep", nodes=int(xs.size), outer_evaluations=evaluations)
    return out
