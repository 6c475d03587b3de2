"""
Step-function approximation of a nonincreasing f at level n, and the
discrete sequence a step-function triple induces.

The partition is built greedily from the left: a piece [l_{k-1}, l_k) is kept
as long as M(f) stays within 1/n of its value at l_{k-1}. On each piece f_n
takes the left limit of f at l_k.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from chebycheck.config import Config
from chebycheck.continuous.bounds import validate_triple
from chebycheck.continuous.quadrature import CumulativeIntegral, quadrature, quadrature_nodes
from chebycheck.continuous.sampled import Monotonicity, SampledFunction, WeightedTriple
from chebycheck.curvature import CurvedFunction
from chebycheck.discrete import WeightedSequence
from chebycheck.errors import InvariantError, UsageError
from chebycheck.utils.logger import Logger

logger = Logger(name=__name__)


@dataclass
class StepApproximation:
    function: SampledFunction
    level: int
    error: float
    pieces: int
    partition: Tuple[float, ...]  # l_0 = a < l_1 < ... < l_m = b


def level_floor(f: SampledFunction, M: CurvedFunction, lo: float, hi: float, samples: int) -> int:
    """Smallest integer n0 with |M(f)| < n0 on [lo, hi], by sampling."""
    _, values = quadrature_nodes(f.compose(M), lo, hi, samples)
    return int(math.floor(float(np.max(np.abs(values))))) + 1


def step_approximation(f: SampledFunction, M: CurvedFunction, n: int, samples: Optional[int] = None,
                       horizon: Optional[float] = None) -> StepApproximation:
    """
    Builds f_n with sup |M(f_n) - M(f)| <= 1/n on the sampling grid.

    Raises:
        UsageError: If f is not tagged nonincreasing, or n does not exceed level_floor.
        InvariantError: If the partition needs more than 2 n^2 pieces.
    """
    if f.monotonicity is not Monotonicity.NONINCREASING:
        logger.raise_error(UsageError, f"step_approximation needs f tagged nonincreasing, got {f.monotonicity.value}.")
    lo = f.left
    hi = f.right if not f.is_truncated else horizon
    if hi is None:
        logger.raise_error(UsageError, "step_approximation on an infinite interval needs a horizon.")
    samples = int(Config().numeric('panels') if samples is None else samples)

    n0 = level_floor(f, M, lo, hi, samples)
    if n <= n0:
        logger.raise_error(UsageError, f"Level n={n} must exceed n0={n0}, the bound on |M(f)|.")

    # Values in x order; a jump point carries its left limit first, then its value
    x, fx = quadrature_nodes(f, lo, hi, samples)
    outer = M(fx)
    width = 1.0 / n

    cuts = [lo]
    start = 0
    last = len(x) - 1
    while True:
        reference = outer[start]
        drift = np.abs(outer[start + 1:] - reference) > width
        if not np.any(drift):
            break
        first_bad = start + 1 + int(np.argmax(drift))
        # cut at the last node still inside the band, or at the offending node when none is
        cut = x[first_bad - 1] if x[first_bad - 1] > x[start] else x[first_bad]
        cuts.append(float(cut))
        start = int(np.searchsorted(x, cut, side='right')) - 1
        if start >= last:
            break
    if cuts[-1] < hi:
        cuts.append(float(hi))
    partition = np.asarray(cuts)

    inner = partition[1:-1]
    values = f.left_limit(partition[1:])
    values[-1] = f.left_limit(hi) if hi in f.breakpoints else f(hi)

    def evaluate(t: np.ndarray) -> np.ndarray:
        return values[np.minimum(np.searchsorted(inner, t, side='right'), len(values) - 1)]

    approximation = SampledFunction(evaluate, f.left, f.right, Monotonicity.NONINCREASING,
                                    bool(np.all(values >= 0.0)), tuple(inner), f"{f.label}_n{n}")

    pieces = len(partition) - 1
    if pieces > 2 * n * n:
        logger.raise_error(InvariantError, f"Level {n} needed {pieces} pieces, more than 2 n^2 = {2 * n * n}.")

    grid = np.union1d(np.linspace(lo, hi, samples + 1), inner)
    error = float(np.max(np.abs(M(f(grid)) - M(approximation(grid)))))
    if error > width * (1.0 + 1e-9):
        logger.warning(f"Step approximation at level {n} reached error {error!r} above 1/n on the sampling grid.")
    logger.debug(f"step_approximation level={n}: {pieces} pieces, error={error!r}")
    return StepApproximation(approximation, n, error, pieces, tuple(float(c) for c in partition))


def integral_gap(t: WeightedTriple, M: CurvedFunction, level: int, n: Optional[int] = None) -> float:
    """int p g (M(f) - M(f_n)) over the triple's interval; vanishes as the level grows."""
    n = int(Config().numeric('panels') if n is None else n)
    approximation = step_approximation(t.f, M, level, samples=n, horizon=t.horizon)
    difference = t.f.compose(M).minus(approximation.function.compose(M))
    return quadrature(SampledFunction.product(t.p, t.g, difference), (t.left, t.right), n)


def induced_sequence(t: WeightedTriple, n: Optional[int] = None) -> WeightedSequence:
    """
    The WeightedSequence of a triple whose f is a step function:
    a_k is the value of f on piece k, p_k the p-mass of the piece and
    b_k its p g-mass divided by p_k.

    Raises:
        UsageError: If f is not constant between its jump points.
    """
    n = int(Config().numeric('panels') if n is None else n)
    validate_triple(t, n)
    partition = np.concatenate(([t.left], [x for x in t.f.breakpoints if t.left < x < t.right], [t.right]))
    a_values = t.f(partition[:-1])
    # f must be flat between consecutive jump points
    _, f_samples = quadrature_nodes(t.f, t.left, t.right, n)
    if len(np.unique(f_samples)) > len(a_values):
        logger.raise_error(UsageError, f"{t.f.label} is not piecewise constant on its jump points.")

    p_mass = CumulativeIntegral(t.p, t.left, t.right, n).prefix(partition)
    pg_mass = CumulativeIntegral(t.pg(), t.left, t.right, n).prefix(partition)
    p_k = np.diff(p_mass)
    b_k = np.diff(pg_mass) / p_k
    return WeightedSequence(tuple(a_values), tuple(b_k), tuple(p_k))
