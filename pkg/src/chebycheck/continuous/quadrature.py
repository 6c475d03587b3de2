"""
Composite trapezoid quadrature over SampledFunctions.

Jump points are inserted as double nodes (left limit, then right value), so
piecewise-linear and step integrands are integrated exactly on every panel.
"""
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from chebycheck.config import Config
from chebycheck.continuous.sampled import SampledFunction
from chebycheck.errors import DomainError, UsageError
from chebycheck.utils.logger import Logger

logger = Logger(name=__name__)


def _panels(n: Optional[int]) -> int:
    n = Config().numeric('panels') if n is None else int(n)
    if n < 1:
        logger.raise_error(UsageError, f"Quadrature needs at least one panel, got {n}.")
    return n


def quadrature_nodes(fn: SampledFunction, lo: float, hi: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes and values of fn on [lo, hi]: n uniform panels plus every jump point inside.

    Each interior jump point appears twice, first with its left limit; the value at hi
    is the left limit when hi itself is a jump point.
    """
    uniform = np.linspace(lo, hi, n + 1)
    jumps = np.asarray([x for x in fn.breakpoints if lo < x < hi], dtype=float)
    x = np.union1d(uniform, jumps)
    y = fn(x)
    if hi in fn.breakpoints:
        y[-1] = fn.left_limit(hi)
    if len(jumps):
        positions = np.searchsorted(x, jumps)
        x = np.insert(x, positions, jumps)
        y = np.insert(y, positions, fn.left_limit(jumps))
    return x, y


def _subinterval(fn: SampledFunction, sub: Optional[Tuple[float, float]]) -> Tuple[float, float]:
    if sub is None:
        if fn.is_truncated:
            logger.raise_error(UsageError, f"{fn.label} lives on an infinite interval; pass a finite subinterval.")
        return fn.left, fn.right
    lo, hi = float(sub[0]), float(sub[1])
    if not fn.left <= lo < hi <= fn.right:
        logger.raise_error(DomainError, f"[{lo}, {hi}] is not a subinterval of [{fn.left}, {fn.right}].")
    return lo, hi


def quadrature(fn: SampledFunction, sub: Optional[Tuple[float, float]] = None, n: Optional[int] = None) -> float:
    """
    Integral of fn over sub (default: its whole interval) with n trapezoid panels.

    Raises:
        DomainError: If sub leaves the interval of fn or is empty.
        UsageError: If n < 1.
    """
    lo, hi = _subinterval(fn, sub)
    x, y = quadrature_nodes(fn, lo, hi, _panels(n))
    return float(trapezoid(y, x))


class CumulativeIntegral:
    """
    Running integral of fn from lo, readable at any s in [lo, hi].

    Between nodes the integrand is interpolated linearly, which agrees with the
    trapezoid rule at every node.
    """

    def __init__(self, fn: SampledFunction, lo: float, hi: float, n: Optional[int] = None):
        self.fn = fn
        self.lo, self.hi = _subinterval(fn, (lo, hi))
        self.x, self.y = quadrature_nodes(fn, self.lo, self.hi, _panels(n))
        self.running = cumulative_trapezoid(self.y, self.x, initial=0.0)

    @property
    def total(self) -> float:
        return float(self.running[-1])

    def prefix(self, s):
        """Integral over [lo, s]; accepts scalars and arrays."""
        s_arr = np.asarray(s, dtype=float)
        if np.any(s_arr < self.lo) or np.any(s_arr > self.hi):
            logger.raise_error(DomainError, f"s must lie in [{self.lo}, {self.hi}].")

        last = len(self.x) - 1
        # side='right' lands past both copies of a double node
        index = np.minimum(np.searchsorted(self.x, s_arr, side='right') - 1, last - 1)
        x0, x1 = self.x[index], self.x[index + 1]
        y0, y1 = self.y[index], self.y[index + 1]
        width = s_arr - x0
        y_s = y0 + (y1 - y0) * width / (x1 - x0)
        out = self.running[index] + 0.5 * (y0 + y_s) * width
        out = np.where(s_arr >= self.hi, self.running[-1], out)
        return float(out) if out.ndim == 0 else out

    def suffix(self, s):
        """Integral over [s, hi]."""
        out = self.total - np.asarray(self.prefix(s))
        return float(out) if out.ndim == 0 else out
