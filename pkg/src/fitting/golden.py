"""
Golden-section line search for the shift parameter.
"""
import math
from dataclasses import dataclass
from typing import Callable

from ..core.errors import ParameterError


INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


@dataclass(frozen=True)
class GoldenResult:
    x: float
    value: float
    evaluations: int


def _better(cand: tuple[float, float], best: tuple[float, float]) -> bool:
    # lower objective, then smaller |x|
    return (cand[1], abs(cand[0])) < (best[1], abs(best[0]))


def golden_section_minimize(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> GoldenResult:
    """
    Golden-section search for a minimum of fn on [lo, hi].

    Returns the best point actually evaluated, so the result is never worse
    than any interior probe of the bracket.

    Args:
        fn: objective, assumed unimodal on the bracket
        lo, hi: bracket ends
        tol: final bracket width
        max_iter: cap on the number of shrink steps
    """
    if not tol > 0.0:
        raise ParameterError(f"tol must be > 0, got {tol}", field="tol")
    a, b = min(lo, hi), max(lo, hi)
    h = b - a
    if h <= tol:
        mid = 0.5 * (a + b)
        return GoldenResult(x=mid, value=fn(mid), evaluations=1)

    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    n = min(n, max_iter)

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = fn(c)
    yd = fn(d)
    evaluations = 2
    best = (c, yc)
    if _better((d, yd), best):
        best = (d, yd)

    for _ in range(n - 1):
        if yc < yd:
            b = d
            d, yd = c, yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = fn(c)
            new = (c, yc)
        else:
            a = c
            c, yc = d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = fn(d)
            new = (d, yd)
        evaluations += 1
        if _better(new, best):
            best = new

    return GoldenResult(x=best[0], value=best[1], evaluations=evaluations)
