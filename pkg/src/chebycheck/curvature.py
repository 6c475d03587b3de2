"""
Outer functions M: [0, inf) -> R with M(0) = 0 and a declared curvature.

Curvature is a tag checked by sampling, never proven. Builtin families are the
power functions t**e and continuous piecewise-linear functions through the origin.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from chebycheck.config import Config
from chebycheck.errors import ConfigError, CurvatureError, DomainError, UsageError
from chebycheck.utils.logger import Logger

logger = Logger(name=__name__)

ZERO_TOL = 1e-12
MIDPOINT_TOL = 1e-9

ArrayLike = Union[float, np.ndarray]


class Curvature(str, Enum):
    CONVEX = 'convex'
    CONCAVE = 'concave'


@dataclass(frozen=True)
class CurvedFunction:
    """
    An outer function M with its curvature tag.

    fn must accept numpy arrays of nonnegative reals. M(0) = 0 is checked on
    construction; evaluation at negative t raises DomainError.
    """
    fn: Callable[[np.ndarray], np.ndarray]
    curvature: Curvature
    label: str = 'M'

    def __post_init__(self):
        at_zero = float(self.fn(np.asarray(0.0)))
        if not abs(at_zero) <= ZERO_TOL:
            logger.raise_error(DomainError, f"{self.label}: M(0) = {at_zero!r}, expected 0.")

    def __call__(self, t: ArrayLike) -> ArrayLike:
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0.0):
            logger.raise_error(DomainError, f"{self.label} is defined on [0, inf), got a negative argument.")
        out = self.fn(arr)
        if arr.ndim == 0:
            return float(out)
        return np.asarray(out, dtype=float)

    @property
    def is_convex(self) -> bool:
        return self.curvature is Curvature.CONVEX

    def require(self, curvature: Curvature, operation: str) -> None:
        """Raises CurvatureError unless M carries the given curvature tag."""
        if self.curvature is not curvature:
            logger.raise_error(
                CurvatureError,
                f"{operation} needs a {curvature.value} M, got {self.label} tagged {self.curvature.value}."
            )


@dataclass
class CurvatureReport:
    curvature: Curvature
    passed: bool
    checked_pairs: int
    violations: List[Tuple[float, float, float]] = field(default_factory=list)


def make_power(exponent: float) -> CurvedFunction:
    """M(t) = t**exponent; convex for exponent >= 1 (including 1), concave below."""
    if not exponent > 0:
        logger.raise_error(DomainError, f"Power exponent must be positive, got {exponent!r}.")
    exponent = float(exponent)
    curvature = Curvature.CONVEX if exponent >= 1.0 else Curvature.CONCAVE
    return CurvedFunction(lambda t: np.power(t, exponent), curvature, f"power:{exponent:g}")


def make_piecewise_linear(slopes: Sequence[float], breakpoints: Optional[Sequence[float]] = None) -> CurvedFunction:
    """
    Continuous piecewise-linear M through the origin.

    slopes[k] is the slope on [breakpoints[k], breakpoints[k+1]); the last slope
    extends to infinity. Nondecreasing slopes give a convex M, nonincreasing
    slopes a concave one; constant slopes are tagged convex.

    Raises:
        CurvatureError: If the slopes are neither nondecreasing nor nonincreasing.
        DomainError: If the breakpoints do not start at 0 or are not increasing.
    """
    slopes = np.asarray(slopes, dtype=float)
    if breakpoints is None:
        breakpoints = [0.0] if len(slopes) == 1 else None
    if breakpoints is None or len(breakpoints) != len(slopes) or len(slopes) == 0:
        logger.raise_error(DomainError, "Piecewise-linear M needs one breakpoint per slope.")
    knots = np.asarray(breakpoints, dtype=float)
    if knots[0] != 0.0 or np.any(np.diff(knots) <= 0.0):
        logger.raise_error(DomainError, f"Breakpoints must start at 0 and increase, got {list(knots)}.")

    steps = np.diff(slopes)
    if np.all(steps >= 0.0):
        curvature = Curvature.CONVEX
    elif np.all(steps <= 0.0):
        curvature = Curvature.CONCAVE
    else:
        logger.raise_error(CurvatureError, f"Slopes {list(slopes)} are neither nondecreasing nor nonincreasing.")

    # Value at each knot, integrating the slopes from M(0) = 0
    values = np.concatenate(([0.0], np.cumsum(slopes[:-1] * np.diff(knots))))

    def evaluate(t: np.ndarray) -> np.ndarray:
        piece = np.searchsorted(knots, t, side='right') - 1
        return values[piece] + slopes[piece] * (t - knots[piece])

    label = "plin:" + ",".join(f"{s:g}" for s in slopes) + "@" + ",".join(f"{x:g}" for x in knots)
    return CurvedFunction(evaluate, curvature, label)


def curvature_grid(grid_points: int, t_max: float) -> np.ndarray:
    """Union of a uniform and a geometric grid on [0, t_max]."""
    uniform = np.linspace(0.0, t_max, grid_points)
    geometric = np.geomspace(t_max * 1e-6, t_max, grid_points)
    return np.unique(np.concatenate((uniform, geometric)))


def check_curvature(M: CurvedFunction, grid_points: Optional[int] = None,
                    t_max: Optional[float] = None) -> CurvatureReport:
    """
    Samples midpoint convexity (or concavity) over all grid pairs and reports every
    pair where the declared tag is violated beyond 1e-9 * (1 + |M(x)| + |M(y)|).
    """
    config = Config()
    grid_points = config.numeric('curvature_grid') if grid_points is None else grid_points
    t_max = float(config.numeric('t_max') if t_max is None else t_max)
    if grid_points < 3:
        logger.raise_error(UsageError, f"check_curvature needs at least 3 grid points, got {grid_points}.")

    grid = curvature_grid(grid_points, t_max)
    values = M(grid)
    i, j = np.triu_indices(len(grid), k=1)
    midpoint = M((grid[i] + grid[j]) / 2.0)
    chord = (values[i] + values[j]) / 2.0
    tolerance = MIDPOINT_TOL * (1.0 + np.abs(values[i]) + np.abs(values[j]))

    excess = midpoint - chord if M.is_convex else chord - midpoint
    bad = np.nonzero(excess > tolerance)[0]
    violations = [(float(grid[i[k]]), float(grid[j[k]]), float(excess[k])) for k in bad]
    if violations:
        logger.warning(f"{M.label} violates its {M.curvature.value} tag at {len(violations)} grid pairs.")
    return CurvatureReport(M.curvature, not violations, len(i), violations)


def _parse_float_list(text: str) -> List[float]:
    return [float(item) for item in text.split(',') if item.strip()]


def parse_family(descriptor: str) -> CurvedFunction:
    """
    Builds a CurvedFunction from a CLI/config descriptor.

    'power:<e>' gives t**e; 'plin:<slope-list>@<breakpoint-list>' gives a
    piecewise-linear M, e.g. 'plin:0,2@0,1'. A single slope may omit '@0'.
    """
    name, _, argument = descriptor.strip().partition(':')
    try:
        if name == 'power':
            return make_power(float(argument))
        if name == 'plin':
            slopes_text, _, knots_text = argument.partition('@')
            knots = _parse_float_list(knots_text) if knots_text else None
            return make_piecewise_linear(_parse_float_list(slopes_text), knots)
    except ValueError as e:
        if isinstance(e, (DomainError, CurvatureError)):
            raise
        logger.raise_error(ConfigError, f"Malformed M family '{descriptor}': {e}")
    logger.raise_error(ConfigError, f"Unknown M family '{descriptor}'. Use 'power:<e>' or 'plin:<slopes>@<breakpoints>'.")
