"""
Sufficient conditions for power-mean bounds of int p g f.

The ratio int_a^s p g / (int_a^s p)^(1/r) is compared with its value at s = b.
If it never exceeds the endpoint value (r in (0, 1]) then

    int p g f <= (int p f^r)^(1/r) * int p g / (int p)^(1/r)

for every nonincreasing nonnegative f; if it never falls below the endpoint
value (r >= 1) the inequality reverses. With r = 1 both reduce to the
classical integral inequality.
"""
from enum import Enum
from typing import Optional, Union

import numpy as np

from chebycheck.config import Config
from chebycheck.continuous.bounds import validate_triple
from chebycheck.continuous.quadrature import CumulativeIntegral, quadrature
from chebycheck.continuous.sampled import Monotonicity, SampledFunction, WeightedTriple
from chebycheck.errors import DomainError, UsageError
from chebycheck.reports import LOWER, UPPER, BoundReport, ConditionReport
from chebycheck.utils.logger import Logger

logger = Logger(name=__name__)


class Direction(str, Enum):
    COROLLARY1 = 'corollary1'  # ratio stays below its endpoint value, r in (0, 1]
    COROLLARY2 = 'corollary2'  # ratio stays above its endpoint value, r >= 1

    @classmethod
    def parse(cls, value: Union[str, 'Direction']) -> 'Direction':
        aliases = {'c1': cls.COROLLARY1, 'c2': cls.COROLLARY2}
        try:
            return aliases.get(value) or cls(value)
        except ValueError:
            logger.raise_error(UsageError, f"Unknown condition direction '{value}'; use c1 or c2.")


def _interval(p: SampledFunction, g: SampledFunction, horizon: Optional[float]):
    if p.interval != g.interval:
        logger.raise_error(DomainError, "p and g must share one interval.")
    if p.is_truncated:
        if horizon is None:
            logger.raise_error(UsageError, "An infinite interval needs a horizon.")
        return p.left, float(horizon)
    return p.left, p.right


def _check_r(r: float, direction: Direction) -> None:
    if not r > 0.0:
        logger.raise_error(DomainError, f"r must be positive, got {r!r}.")
    if direction is Direction.COROLLARY1 and r > 1.0:
        logger.raise_error(UsageError, f"The corollary1 condition needs r in (0, 1], got {r!r}.")
    if direction is Direction.COROLLARY2 and r < 1.0:
        logger.raise_error(UsageError, f"The corollary2 condition needs r >= 1, got {r!r}.")


def _ratio(pg_mass, p_mass, r: float) -> np.ndarray:
    return np.asarray(pg_mass) / np.power(np.asarray(p_mass), 1.0 / r)


def steffensen_ratio(p: SampledFunction, g: SampledFunction, s: float, r: float, n: Optional[int] = None,
                     horizon: Optional[float] = None) -> float:
    """
    int_a^s p g / (int_a^s p)^(1/r).

    Raises:
        DomainError: If s is outside (a, b] or r <= 0.
    """
    lo, hi = _interval(p, g, horizon)
    if not lo < s <= hi:
        logger.raise_error(DomainError, f"s must lie in ({lo}, {hi}], got {s!r}.")
    if not r > 0.0:
        logger.raise_error(DomainError, f"r must be positive, got {r!r}.")
    n = Config().numeric('panels') if n is None else n
    pg_mass = quadrature(SampledFunction.product(p, g), (lo, s), n)
    p_mass = quadrature(p, (lo, s), n)
    return float(_ratio(pg_mass, p_mass, r))


def check_condition(p: SampledFunction, g: SampledFunction, r: float, direction: Union[str, Direction],
                    s_grid: Optional[int] = None, n: Optional[int] = None, tol_rel: Optional[float] = None,
                    horizon: Optional[float] = None) -> ConditionReport:
    """
    Evaluates the ratio on s_j = a + j (b - a) / s_grid, j = 1..s_grid, against its s = b value.

    Raises:
        UsageError: If r does not fit the direction.
    """
    config = Config()
    direction = Direction.parse(direction)
    _check_r(r, direction)
    s_grid = int(config.numeric('s_grid') if s_grid is None else s_grid)
    if s_grid < 1:
        logger.raise_error(UsageError, f"s_grid must be positive, got {s_grid}.")
    n = config.numeric('panels') if n is None else n
    tol_rel = config.numeric('tol_rel_continuous') if tol_rel is None else tol_rel

    lo, hi = _interval(p, g, horizon)
    grid = lo + np.arange(1, s_grid + 1) * (hi - lo) / s_grid
    p_mass = CumulativeIntegral(p, lo, hi, n)
    pg_mass = CumulativeIntegral(SampledFunction.product(p, g), lo, hi, n)
    if np.any(p_mass.prefix(grid) <= 0.0):
        logger.raise_error(DomainError, "p must carry positive mass on every (a, s].")
    ratio = _ratio(pg_mass.prefix(grid), p_mass.prefix(grid), r)
    boundary = float(ratio[-1])

    sign = 1.0 if direction is Direction.COROLLARY1 else -1.0
    margins = sign * (boundary - ratio)
    worst = int(np.argmin(margins))
    passed = bool(margins[worst] >= -tol_rel * (1.0 + abs(boundary)))

    slack = config.numeric('monotone_slack')
    head = ratio[:3]
    edge_growth = bool(len(head) == 3 and np.all(head[:-1] - head[1:] > slack * (1.0 + np.abs(head[1:]))))
    if edge_growth:
        logger.warning(f"Condition ratio grows toward s={lo} (r={r:g}); the smallest grid point may not capture it.")

    logger.debug(f"check_condition {direction.value} r={r:g}: passed={passed} worst_s={grid[worst]!r}")
    return ConditionReport(r=float(r), direction=direction.value, grid=grid.tolist(), ratio=ratio.tolist(),
                           boundary_ratio=boundary, passed=passed, worst_s=float(grid[worst]),
                           worst_margin=float(margins[worst]), edge_growth=edge_growth)


def corollary_bound(p: SampledFunction, g: SampledFunction, f: SampledFunction, r: float,
                    direction: Union[str, Direction], n: Optional[int] = None,
                    condition: Optional[ConditionReport] = None, s_grid: Optional[int] = None,
                    tol_rel: Optional[float] = None, horizon: Optional[float] = None) -> BoundReport:
    """
    int p g f against (int p f^r)^(1/r) * int p g / (int p)^(1/r).

    condition is checked first when not given; the comparison is '<=' for
    corollary1 and '>=' for corollary2.

    Raises:
        UsageError: If the condition fails, belongs to other (r, direction), or f is not nonincreasing.
    """
    config = Config()
    direction = Direction.parse(direction)
    n = int(config.numeric('panels') if n is None else n)
    tol_rel = config.numeric('tol_rel_continuous') if tol_rel is None else tol_rel
    if f.monotonicity is not Monotonicity.NONINCREASING:
        logger.raise_error(UsageError, f"corollary_bound needs f tagged nonincreasing, got {f.monotonicity.value}.")

    if condition is None:
        condition = check_condition(p, g, r, direction, s_grid, n, tol_rel, horizon)
    elif condition.r != r or condition.direction != direction.value:
        logger.raise_error(UsageError, "The condition report was computed for another r or direction.")
    if not condition.passed:
        logger.raise_error(UsageError, f"The {direction.value} condition fails at s={condition.worst_s!r}; no bound follows.")

    triple = WeightedTriple(f, g, p, horizon)
    validate_triple(triple, n)
    sub = (triple.left, triple.right)
    lhs = quadrature(SampledFunction.product(p, g, f), sub, n)
    power_mean = quadrature(SampledFunction.product(p, f.power(r)), sub, n) ** (1.0 / r)
    rhs = power_mean * quadrature(triple.pg(), sub, n) / quadrature(p, sub, n) ** (1.0 / r)

    kind = UPPER if direction is Direction.COROLLARY1 else LOWER
    return BoundReport.build(lhs, rhs, triple.right, kind, tol_rel, theorem=direction.value)
