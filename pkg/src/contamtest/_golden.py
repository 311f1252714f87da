"""Deterministic golden-section minimization on a fixed bracket."""

from __future__ import annotations

import math
from typing import Callable

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_min(
    f: Callable[[float], float],
    a: float,
    b: float,
    *,
    xtol: float,
    max_iter: int = 200,
) -> tuple[float, float]:
    """Minimize f on [a, b]; returns (x, f(x)) at the final bracket midpoint.

    The schedule is fixed by (a, b, xtol) alone, so repeated runs are
    bit-identical.
    """
    if b < a:
        a, b = b, a
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)
