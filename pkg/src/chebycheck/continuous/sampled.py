import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from chebycheck.curvature import CurvedFunction
from chebycheck.errors import DomainError, InvariantError, UsageError
from chebycheck.utils.logger import Logger

logger = Logger(name=__name__)


class Monotonicity(str, Enum):
    NONINCREASING = 'nonincreasing'
    NONDECREASING = 'nondecreasing'
    NONE = 'none'


@dataclass(frozen=True)
class SampledFunction:
    """
    A piecewise-continuous function on [left, right].

    fn takes numpy arrays and is right-continuous at the interior jump points
    listed in breakpoints; left limits are read just below a point. right may
    be math.inf, in which case a WeightedTriple horizon truncates it.
    """
    fn: Callable[[np.ndarray], np.ndarray]
    left: float
    right: float
    monotonicity: Monotonicity = Monotonicity.NONE
    nonnegative: bool = False
    breakpoints: Tuple[float, ...] = ()
    label: str = 'fn'

    def __post_init__(self):
        if not self.left < self.right:
            logger.raise_error(DomainError, f"{self.label}: interval needs left < right, got [{self.left}, {self.right}].")
        object.__setattr__(self, 'breakpoints', tuple(sorted(float(x) for x in self.breakpoints)))

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    def left_limit(self, x) -> np.ndarray:
        return self(np.nextafter(np.asarray(x, dtype=float), -np.inf))

    @property
    def interval(self) -> Tuple[float, float]:
        return self.left, self.right

    @property
    def is_truncated(self) -> bool:
        return math.isinf(self.right)

    def compose(self, M: CurvedFunction) -> 'SampledFunction':
        """x -> M(f(x)); the monotonicity tag is dropped."""
        inner = self.fn
        return SampledFunction(lambda x: M(inner(x)), self.left, self.right, Monotonicity.NONE,
                               False, self.breakpoints, f"{M.label}({self.label})")

    def power(self, r: float) -> 'SampledFunction':
        inner = self.fn
        return SampledFunction(lambda x: np.power(inner(x), r), self.left, self.right, self.monotonicity,
                               self.nonnegative, self.breakpoints, f"{self.label}^{r:g}")

    def minus(self, other: 'SampledFunction') -> 'SampledFunction':
        first, second = self.fn, other.fn
        return SampledFunction(lambda x: first(x) - second(x), self.left, self.right, Monotonicity.NONE,
                               False, self.breakpoints + other.breakpoints, f"{self.label}-{other.label}")

    @staticmethod
    def product(*factors: 'SampledFunction') -> 'SampledFunction':
        """Pointwise product on the shared interval of the factors."""
        head = factors[0]
        for factor in factors[1:]:
            if factor.interval != head.interval:
                logger.raise_error(DomainError, f"Cannot multiply {head.label} and {factor.label}: intervals differ.")
        functions = [factor.fn for factor in factors]

        def evaluate(x):
            out = np.ones_like(x, dtype=float)
            for fn in functions:
                out = out * fn(x)
            return out

        breakpoints = tuple(x for factor in factors for x in factor.breakpoints)
        label = "*".join(factor.label for factor in factors)
        return SampledFunction(evaluate, head.left, head.right, Monotonicity.NONE,
                               all(factor.nonnegative for factor in factors), breakpoints, label)

    @classmethod
    def from_samples(cls, x: Sequence[float], values: Sequence[float],
                     monotonicity: Monotonicity = Monotonicity.NONE, nonnegative: bool = False,
                     label: str = 'samples') -> 'SampledFunction':
        """Piecewise-linear interpolation of samples taken at increasing x."""
        xs = np.asarray(x, dtype=float)
        ys = np.asarray(values, dtype=float)
        if len(xs) < 2 or len(xs) != len(ys) or np.any(np.diff(xs) <= 0.0):
            logger.raise_error(DomainError, f"{label}: samples need at least two strictly increasing x values.")
        return cls(lambda t: np.interp(t, xs, ys), float(xs[0]), float(xs[-1]), monotonicity, nonnegative, (), label)

    def check_tags(self, values: np.ndarray, slack: float) -> None:
        """
        Validates the nonnegativity flag and the monotonicity tag against values sampled
        in increasing x order.

        Raises:
            InvariantError: If a sampled value breaks a tag.
        """
        if self.nonnegative and np.any(values < 0.0):
            logger.raise_error(InvariantError, f"{self.label} is flagged nonnegative but takes the value {values.min()!r}.")
        if self.monotonicity is Monotonicity.NONE or len(values) < 2:
            return
        steps = np.diff(values)
        scale = slack * (1.0 + np.abs(values[1:]))
        rising = steps > scale if self.monotonicity is Monotonicity.NONINCREASING else -steps > scale
        if np.any(rising):
            logger.raise_error(InvariantError, f"{self.label} is tagged {self.monotonicity.value} but is not on the sample grid.")


@dataclass(frozen=True)
class WeightedTriple:
    """
    f (monotone, nonnegative), g (nonnegative) and p (strictly positive) on a shared interval.

    horizon stands in for an infinite right endpoint.
    """
    f: SampledFunction
    g: SampledFunction
    p: SampledFunction
    horizon: Optional[float] = None
    label: str = field(default='triple', compare=False)

    def __post_init__(self):
        if not (self.f.interval == self.g.interval == self.p.interval):
            logger.raise_error(DomainError, "f, g and p must share one interval.")
        if self.f.is_truncated:
            if self.horizon is None or not self.left < self.horizon < math.inf:
                logger.raise_error(UsageError, "An infinite interval needs a finite horizon greater than its left end.")

    @property
    def left(self) -> float:
        return self.f.left

    @property
    def right(self) -> float:
        """The effective right end: the horizon for truncated-infinite triples."""
        return self.horizon if self.f.is_truncated else self.f.right

    @property
    def is_truncated(self) -> bool:
        return self.f.is_truncated

    def pg(self) -> SampledFunction:
        return SampledFunction.product(self.p, self.g)

    def pf(self) -> SampledFunction:
        return SampledFunction.product(self.p, self.f)
