"""Adaptive Simpson quadrature with interval bisection."""
from __future__ import annotations

from typing import Callable

from .errors import QuadratureError

__all__ = ["adaptive_simpson"]


def adaptive_simpson(
    fn: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 60,
) -> float:
    """Integrate ``fn`` over ``[a, b]`` to absolute tolerance ``tol``.

    Each panel is accepted once ``|S_left + S_right - S_whole| <= 15 tol_panel``
    (with Richardson correction), halving the tolerance on every split.

    Raises
    ------
    QuadratureError
        If a panel still fails the test after ``max_depth`` bisections; the
        offending interval is attached as ``exc.interval``.
    """
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(fn, b, a, tol, max_depth)
    fa, fb = fn(a), fn(b)
    m = 0.5 * (a + b)
    fm = fn(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        a, b, fa, fm, fb, whole, eps, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = fn(lm), fn(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        err = left + right - whole
        if abs(err) <= 15.0 * eps:
            total += left + right + err / 15.0
            continue
        if depth >= max_depth:
            raise QuadratureError(
                f"adaptive Simpson did not converge on [{a:.6g}, {b:.6g}] after {max_depth} bisections",
                interval=(a, b),
            )
        stack.append((m, b, fm, frm, fb, right, 0.5 * eps, depth + 1))
        stack.append((a, m, fa, flm, fm, left, 0.5 * eps, depth + 1))
    return total
