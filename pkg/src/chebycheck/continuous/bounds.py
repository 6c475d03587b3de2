"""
Integral inequalities for a WeightedTriple (f, g, p) on [a, b].

For nonincreasing f the left-hand side int p g M(f) is compared with the
extremum over s in (a, b] of

    M(int_a^b p f / int_a^s p) * int_a^s p g,

the sup for convex M and the inf for concave M. For nondecreasing f every
prefix integral over [a, s] becomes a suffix integral over [s, b] and s
ranges over [a, b). The extremum is searched on a uniform s-grid with one
round of local refinement; a candidate sequence that keeps growing (or
shrinking) toward the open end is flagged divergent instead of chased.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from chebycheck.config import Config
from chebycheck.continuous.quadrature import CumulativeIntegral, quadrature, quadrature_nodes
from chebycheck.continuous.sampled import Monotonicity, SampledFunction, WeightedTriple
from chebycheck.curvature import Curvature, CurvedFunction
from chebycheck.errors import DomainError, InvariantError, UsageError
from chebycheck.reports import LOWER, UPPER, BoundReport, ChebyshevReport
from chebycheck.utils.logger import Logger

logger = Logger(name=__name__)

PREFIX = 'prefix'
SUFFIX = 'suffix'


def _setting(value, key: str):
    return Config().numeric(key) if value is None else value


def validate_triple(t: WeightedTriple, n: int, nonnegative: bool = True) -> None:
    """
    Samples f, g and p at their quadrature nodes and checks the hypotheses:
    p strictly positive, f and g consistent with their tags and, unless
    nonnegative is False, f and g nonnegative.

    Raises:
        InvariantError: On the first violated hypothesis.
    """
    slack = Config().numeric('monotone_slack')
    lo, hi = t.left, t.right
    for role, fn in (('f', t.f), ('g', t.g), ('p', t.p)):
        _, values = quadrature_nodes(fn, lo, hi, n)
        if role == 'p' and np.any(values <= 0.0):
            logger.raise_error(InvariantError, f"p must be strictly positive, minimum sample {values.min()!r}.")
        if role != 'p' and nonnegative and np.any(values < 0.0):
            logger.raise_error(InvariantError, f"{role} must be nonnegative, minimum sample {values.min()!r}.")
        fn.check_tags(values, slack)


class BoundFunctional:
    """
    Cumulative integrals of p, p g and p f shared by every candidate evaluation.

    side is PREFIX (integrals over [a, s]) or SUFFIX (integrals over [s, b]).
    """

    def __init__(self, t: WeightedTriple, M: CurvedFunction, n: Optional[int] = None, side: str = PREFIX):
        self.triple = t
        self.M = M
        self.side = side
        self.n = int(_setting(n, 'panels'))
        validate_triple(t, self.n)

        lo, hi = t.left, t.right
        self.p_mass = CumulativeIntegral(t.p, lo, hi, self.n)
        self.pg_mass = CumulativeIntegral(t.pg(), lo, hi, self.n)
        self.pf_mass = CumulativeIntegral(t.pf(), lo, hi, self.n)
        self.total_pf = self.pf_mass.total

    @property
    def open_end(self) -> float:
        """The end of the s-range the functional is not defined at."""
        return self.triple.left if self.side == PREFIX else self.triple.right

    def check_points(self, s: np.ndarray) -> None:
        lo, hi = self.triple.left, self.triple.right
        inside = (s > lo) & (s <= hi) if self.side == PREFIX else (s >= lo) & (s < hi)
        if not np.all(inside):
            bounds = f"({lo}, {hi}]" if self.side == PREFIX else f"[{lo}, {hi})"
            logger.raise_error(DomainError, f"s must lie in {bounds}.")

    def __call__(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        self.check_points(s)
        if self.side == PREFIX:
            weight, mass = self.p_mass.prefix(s), self.pg_mass.prefix(s)
        else:
            weight, mass = self.p_mass.suffix(s), self.pg_mass.suffix(s)
        return self.M(np.maximum(self.total_pf / weight, 0.0)) * mass

    def grid(self, s_grid: int) -> np.ndarray:
        lo, hi = self.triple.left, self.triple.right
        j = np.arange(1, s_grid + 1) if self.side == PREFIX else np.arange(0, s_grid)
        return lo + j * (hi - lo) / s_grid

    def tail_is_heavy(self, tail_tol: float, tail_fraction: float) -> bool:
        """True when p f or p g keeps more than tail_tol mass on the last stretch before the horizon."""
        lo, hi = self.triple.left, self.triple.right
        start = hi - tail_fraction * (hi - lo)
        tail_pf = self.pf_mass.suffix(start)
        tail_pg = self.pg_mass.suffix(start)
        return tail_pf >= tail_tol or tail_pg >= tail_tol


def lhs_integral(t: WeightedTriple, M: CurvedFunction, n: Optional[int] = None) -> float:
    """int_a^b p g M(f) over [a, b] (the horizon for truncated triples)."""
    integrand = SampledFunction.product(t.p, t.g, t.f.compose(M))
    return quadrature(integrand, (t.left, t.right), _setting(n, 'panels'))


def candidate_continuous(t: WeightedTriple, M: CurvedFunction, s: float, n: Optional[int] = None) -> float:
    """
    M(int_a^b p f / int_a^s p) * int_a^s p g at a single s in (a, b].

    Raises:
        DomainError: If s <= a or s > b.
    """
    return float(BoundFunctional(t, M, n, PREFIX)(s)[0])


def _strictly_toward_edge(values: np.ndarray, kind: str, slack: float) -> bool:
    """values[0] is nearest the edge; True when the first three move strictly in the extremum's direction."""
    if len(values) < 3:
        return False
    head = values[:3] if kind == UPPER else -values[:3]
    scale = slack * (1.0 + np.abs(head))
    return bool(head[0] - head[1] > scale[0] and head[1] - head[2] > scale[1])


def _pick(values: np.ndarray, kind: str) -> int:
    # first extremum: ties resolve toward the smallest index
    return int(np.argmax(values)) if kind == UPPER else int(np.argmin(values))


def _search(functional: BoundFunctional, kind: str, s_grid: int, refine_points: int,
            s_points: Optional[Sequence[float]]) -> Tuple[float, float, bool]:
    """Returns (extremum, extremal s, divergent)."""
    slack = Config().numeric('monotone_slack')
    if s_points is not None:
        points = np.asarray(sorted(s_points), dtype=float)
        if len(points) == 0:
            logger.raise_error(UsageError, "s_points must not be empty.")
        values = functional(points)
        best = _pick(values, kind)
        return float(values[best]), float(points[best]), False

    if s_grid < 1:
        logger.raise_error(UsageError, f"s_grid must be positive, got {s_grid}.")
    points = functional.grid(s_grid)
    values = functional(points)
    best = _pick(values, kind)

    # candidates ordered from the open end inward
    edge_order = values if functional.side == PREFIX else values[::-1]
    edge_index = 0 if functional.side == PREFIX else len(values) - 1
    divergent = best == edge_index and _strictly_toward_edge(edge_order, kind, slack)

    bound, extremal_s = float(values[best]), float(points[best])
    if refine_points > 0:
        lo = points[best - 1] if best > 0 else functional.triple.left
        hi = points[best + 1] if best < len(points) - 1 else functional.triple.right
        local = np.linspace(lo, hi, refine_points + 2)[1:-1]
        local_values = functional(local)
        local_best = _pick(local_values, kind)
        improves = local_values[local_best] > bound if kind == UPPER else local_values[local_best] < bound
        if improves:
            bound, extremal_s = float(local_values[local_best]), float(local[local_best])

    if divergent:
        logger.warning(f"Bound functional keeps moving toward s={functional.open_end}; the extremum may be unbounded.")
    return bound, extremal_s, divergent


def _bound_report(t: WeightedTriple, M: CurvedFunction, kind: str, side: str, theorem: str,
                  s_grid: Optional[int], n: Optional[int], s_points: Optional[Sequence[float]],
                  tol_rel: Optional[float]) -> BoundReport:
    config = Config()
    functional = BoundFunctional(t, M, n, side)
    bound, extremal_s, divergent = _search(functional, kind, int(_setting(s_grid, 's_grid')),
                                           int(config.numeric('refine_points')), s_points)
    if t.is_truncated and functional.tail_is_heavy(config.numeric('tail_tol'), config.numeric('tail_fraction')):
        logger.warning(f"Horizon {t.horizon} leaves mass in the tail of {t.label}; report flagged divergent.")
        divergent = True

    report = BoundReport.build(lhs_integral(t, M, functional.n), bound, extremal_s, kind,
                               _setting(tol_rel, 'tol_rel_continuous'), divergent, theorem)
    logger.debug(f"{theorem}: lhs={report.lhs!r} bound={report.bound!r} s={report.extremal_s!r} divergent={divergent}")
    return report


def _require_tag(t: WeightedTriple, tag: Monotonicity, operation: str) -> None:
    if t.f.monotonicity is not tag:
        logger.raise_error(UsageError, f"{operation} needs f tagged {tag.value}, got {t.f.monotonicity.value}.")


def upper_bound_cont(t: WeightedTriple, M: CurvedFunction, s_grid: Optional[int] = None, n: Optional[int] = None,
                     s_points: Optional[Sequence[float]] = None, tol_rel: Optional[float] = None) -> BoundReport:
    """
    Sup of the bound functional over s in (a, b] for convex M and nonincreasing f.

    Raises:
        CurvatureError: If M is not tagged convex.
        UsageError: If f is not tagged nonincreasing.
    """
    M.require(Curvature.CONVEX, "upper_bound_cont")
    _require_tag(t, Monotonicity.NONINCREASING, "upper_bound_cont")
    return _bound_report(t, M, UPPER, PREFIX, 'theorem1-upper', s_grid, n, s_points, tol_rel)


def lower_bound_cont(t: WeightedTriple, M: CurvedFunction, s_grid: Optional[int] = None, n: Optional[int] = None,
                     s_points: Optional[Sequence[float]] = None, tol_rel: Optional[float] = None) -> BoundReport:
    """Inf of the bound functional over s in (a, b] for concave M and nonincreasing f."""
    M.require(Curvature.CONCAVE, "lower_bound_cont")
    _require_tag(t, Monotonicity.NONINCREASING, "lower_bound_cont")
    return _bound_report(t, M, LOWER, PREFIX, 'theorem1-lower', s_grid, n, s_points, tol_rel)


def extremal_bound_cont(t: WeightedTriple, M: CurvedFunction, s_grid: Optional[int] = None, n: Optional[int] = None,
                        s_points: Optional[Sequence[float]] = None, tol_rel: Optional[float] = None) -> BoundReport:
    bound = upper_bound_cont if M.is_convex else lower_bound_cont
    return bound(t, M, s_grid, n, s_points, tol_rel)


def bound_nondecreasing(t: WeightedTriple, M: CurvedFunction, s_grid: Optional[int] = None, n: Optional[int] = None,
                        s_points: Optional[Sequence[float]] = None, tol_rel: Optional[float] = None) -> BoundReport:
    """
    Mirror of the nonincreasing case with suffix integrals over [s, b] and s in [a, b);
    sup for convex M, inf for concave M.
    """
    _require_tag(t, Monotonicity.NONDECREASING, "bound_nondecreasing")
    kind = UPPER if M.is_convex else LOWER
    return _bound_report(t, M, kind, SUFFIX, f"remark-{kind}", s_grid, n, s_points, tol_rel)


def classical_chebyshev(p: SampledFunction, f: SampledFunction, g: SampledFunction, n: Optional[int] = None,
                        tol_rel: Optional[float] = None) -> ChebyshevReport:
    """
    int p f g against int p f * int p g / int p for monotone f and g:
    '>=' when the tags agree, '<=' when they differ.

    Raises:
        UsageError: If f or g carries no monotonicity tag.
    """
    for role, fn in (('f', f), ('g', g)):
        if fn.monotonicity is Monotonicity.NONE:
            logger.raise_error(UsageError, f"classical_chebyshev needs {role} tagged monotone.")
    n = int(_setting(n, 'panels'))
    triple = WeightedTriple(f, g, p)
    validate_triple(triple, n, nonnegative=False)

    lhs = quadrature(SampledFunction.product(p, f, g), None, n)
    rhs = quadrature(triple.pf(), None, n) * quadrature(triple.pg(), None, n) / quadrature(p, None, n)
    return ChebyshevReport.build(lhs, rhs, f.monotonicity is g.monotonicity,
                                 _setting(tol_rel, 'tol_rel_continuous'), theorem='classical')
