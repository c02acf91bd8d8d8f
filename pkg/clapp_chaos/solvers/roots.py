"""
Scalar Root Finders.

Bracketed solvers for one-dimensional equations:
    - newton_bisection: Newton-Raphson that falls back to bisection whenever the
      Newton step leaves the bracket or stalls
    - bisection: plain interval halving via scipy.optimize.bisect

Both require f(lo) and f(hi) of opposite sign (or one of them zero).
"""

import logging
import math
import sys
from dataclasses import dataclass
from typing import Callable

from scipy import optimize

from clapp_chaos.core.exceptions import BracketError, ConvergenceError

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class RootResult:
    """Root and the number of iterations that produced it."""
    root: float
    iterations: int


def _check_bracket(fa: float, fb: float, a: float, b: float) -> None:
    if fa * fb > 0.0:
        raise BracketError(
            f"no sign change on [{a:.17g}, {b:.17g}]: f = ({fa:.6g}, {fb:.6g})"
        )


def newton_bisection(
    func: Callable[[float], tuple[float, float]],
    lo: float,
    hi: float,
    rel_tol: float = 1e-12,
    max_iter: int = DEFAULT_MAX_ITER,
) -> RootResult:
    """
    Safeguarded Newton iteration on a bracket.

    Args:
        func: Returns (f(x), f'(x))
        lo: Bracket end
        hi: Other bracket end
        rel_tol: Stop once the step is below rel_tol * |x| (or the bracket
            width is, for a root at zero)
        max_iter: Iteration cap

    Returns:
        RootResult

    Raises:
        BracketError: f(lo) and f(hi) have the same sign
        ConvergenceError: Iteration cap exceeded; carries the best iterate
    """
    f_lo, _ = func(lo)
    f_hi, _ = func(hi)
    if f_lo == 0.0:
        return RootResult(lo, 0)
    if f_hi == 0.0:
        return RootResult(hi, 0)
    _check_bracket(f_lo, f_hi, lo, hi)

    # orient so that f(x_neg) < 0 < f(x_pos)
    x_neg, x_pos = (lo, hi) if f_lo < 0.0 else (hi, lo)
    x = 0.5 * (lo + hi)
    dx_old = abs(hi - lo)
    dx = dx_old
    f, df = func(x)
    if f == 0.0:
        return RootResult(x, 0)
    if f < 0.0:
        x_neg = x
    else:
        x_pos = x

    for iteration in range(1, max_iter + 1):
        newton_leaves_bracket = ((x - x_pos) * df - f) * ((x - x_neg) * df - f) >= 0.0
        newton_too_slow = abs(2.0 * f) > abs(dx_old * df)
        if df == 0.0 or newton_leaves_bracket or newton_too_slow:
            dx_old = dx
            dx = 0.5 * (x_pos - x_neg)
            x = x_neg + dx
        else:
            dx_old = dx
            dx = f / df
            x -= dx

        if abs(dx) <= rel_tol * abs(x) or abs(x_pos - x_neg) <= rel_tol * abs(x):
            logger.debug("newton_bisection converged in %d iterations: x=%.17g", iteration, x)
            return RootResult(x, iteration)

        f, df = func(x)
        if f == 0.0:
            return RootResult(x, iteration)
        if f < 0.0:
            x_neg = x
        else:
            x_pos = x

    raise ConvergenceError(
        f"newton_bisection did not converge in {max_iter} iterations", best=x, iterations=max_iter
    )


def bisection(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = 4.0 * sys.float_info.epsilon,
    max_iter: int = DEFAULT_MAX_ITER,
) -> RootResult:
    """
    Plain bisection (scipy.optimize.bisect).

    Args:
        func: Scalar function
        lo: Bracket end
        hi: Other bracket end
        rel_tol: Relative interval tolerance (scipy requires >= 4 eps)
        max_iter: Iteration cap

    Returns:
        RootResult

    Raises:
        BracketError: No sign change
        ConvergenceError: Iteration cap exceeded
    """
    a, b = min(lo, hi), max(lo, hi)
    fa, fb = func(a), func(b)
    if fa == 0.0:
        return RootResult(a, 0)
    if fb == 0.0:
        return RootResult(b, 0)
    _check_bracket(fa, fb, a, b)

    root, info = optimize.bisect(
        func,
        a,
        b,
        xtol=math.ulp(0.0),
        rtol=rel_tol,
        maxiter=max_iter,
        full_output=True,
        disp=False,
    )
    if not info.converged:
        raise ConvergenceError(
            f"bisection did not converge in {max_iter} iterations",
            best=root,
            iterations=info.iterations,
        )
    return RootResult(float(root), info.iterations)
