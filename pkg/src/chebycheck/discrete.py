"""
Weighted sums against prefix-sum bound functionals.

For a nonincreasing nonnegative a, nonnegative b and positive p, the left-hand
side sum_k p_k b_k M(a_k) is bounded by the extremum over s of

    M(sum_k p_k a_k / P_s) * B_s,    P_s = p_1 + ... + p_s,  B_s = p_1 b_1 + ... + p_s b_s,

from above for convex M (max) and from below for concave M (min). The proof's
reduction, which fuses two neighbouring elements without decreasing the
left-hand side, is available as merge_step / reduce_chain.
"""
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from chebycheck.config import Config
from chebycheck.curvature import Curvature, CurvedFunction
from chebycheck.errors import InvariantError, UsageError
from chebycheck.reports import LOWER, UPPER, BoundReport, ChebyshevReport
from chebycheck.utils.logger import Logger
from chebycheck.utils.summation import compensated_sum, prefix_sums

logger = Logger(name=__name__)


@dataclass(frozen=True)
class WeightedSequence:
    """
    Three sequences of equal length m >= 1: values a (nonnegative, nonincreasing),
    weights b (nonnegative) and weights p (strictly positive).
    """
    a: Tuple[float, ...]
    b: Tuple[float, ...]
    p: Tuple[float, ...]
    validated: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'a', tuple(float(x) for x in self.a))
        object.__setattr__(self, 'b', tuple(float(x) for x in self.b))
        object.__setattr__(self, 'p', tuple(float(x) for x in self.p))
        if self.validated:
            self.validate()

    @classmethod
    def unchecked(cls, a: Sequence[float], b: Sequence[float], p: Sequence[float]) -> 'WeightedSequence':
        """A sequence that skips the monotonicity check; used to probe hypothesis-violating inputs."""
        return cls(a, b, p, validated=False)

    def validate(self) -> None:
        m = len(self.a)
        if m == 0 or len(self.b) != m or len(self.p) != m:
            logger.raise_error(InvariantError, f"a, b, p must share a length m >= 1, got {len(self.a)}, {len(self.b)}, {len(self.p)}.")
        if not all(np.isfinite(self.a + self.b + self.p)):
            logger.raise_error(InvariantError, "Sequence entries must be finite.")
        if any(x < 0.0 for x in self.a) or any(x < 0.0 for x in self.b):
            logger.raise_error(InvariantError, "Sequences a and b must be nonnegative.")
        if any(x <= 0.0 for x in self.p):
            logger.raise_error(InvariantError, "Weights p must be strictly positive.")
        for k in range(m - 1):
            if self.a[k] < self.a[k + 1]:
                logger.raise_error(InvariantError, f"a must be nonincreasing, but a[{k}] = {self.a[k]} < a[{k + 1}] = {self.a[k + 1]}.")

    @property
    def m(self) -> int:
        return len(self.a)

    def weighted_a(self) -> List[float]:
        return [p * a for p, a in zip(self.p, self.a)]

    def weighted_b(self) -> List[float]:
        return [p * b for p, b in zip(self.p, self.b)]

    def mass_a(self) -> float:
        """sum_k p_k a_k"""
        return compensated_sum(self.weighted_a())

    def mass_b(self) -> float:
        """sum_k p_k b_k"""
        return compensated_sum(self.weighted_b())


@dataclass
class MergeResult:
    sequence: WeightedSequence
    case: int
    h_values: Tuple[float, float]
    retired_mass: float = 0.0  # p*b mass moved to a = 0 by a terminal case-2 merge


@dataclass
class ReductionChain:
    stages: List[WeightedSequence]
    lhs: List[float]
    bounds: List[float]
    cases: List[int]
    retired_mass: List[float]

    @property
    def steps(self) -> int:
        return len(self.stages) - 1


def _tolerance(tol_rel: Optional[float]) -> float:
    return Config().numeric('tol_rel') if tol_rel is None else tol_rel


def lhs_sum(seq: WeightedSequence, M: CurvedFunction) -> float:
    """sum_k p_k b_k M(a_k), summed in index order with compensation."""
    outer = M(np.asarray(seq.a))
    return compensated_sum(pk * bk * float(mk) for pk, bk, mk in zip(seq.p, seq.b, outer))


def candidates(seq: WeightedSequence, M: CurvedFunction) -> np.ndarray:
    """The bound functional for every s = 1..m (entry s-1), from one pass of prefix sums."""
    total = seq.mass_a()
    prefix_p = np.asarray(prefix_sums(seq.p))
    prefix_b = np.asarray(prefix_sums(seq.weighted_b()))
    return M(total / prefix_p) * prefix_b


def candidate(seq: WeightedSequence, M: CurvedFunction, s: int) -> float:
    """M(sum p a / P_s) * B_s for 1 <= s <= m."""
    if not 1 <= s <= seq.m:
        logger.raise_error(UsageError, f"s must lie in 1..{seq.m}, got {s}.")
    return float(candidates(seq, M)[s - 1])


def _extremal_bound(seq: WeightedSequence, M: CurvedFunction, kind: str, tol_rel: Optional[float],
                    theorem: str) -> BoundReport:
    values = candidates(seq, M)
    # argmax/argmin return the first extremum: ties go to the smallest s
    index = int(np.argmax(values)) if kind == UPPER else int(np.argmin(values))
    report = BoundReport.build(lhs_sum(seq, M), float(values[index]), index + 1, kind,
                               _tolerance(tol_rel), theorem=theorem)
    logger.debug(f"{theorem}: lhs={report.lhs!r} bound={report.bound!r} s={report.extremal_s}")
    return report


def upper_bound(seq: WeightedSequence, M: CurvedFunction, tol_rel: Optional[float] = None) -> BoundReport:
    """Maximum of the bound functional over s; needs a convex M."""
    M.require(Curvature.CONVEX, "upper_bound")
    return _extremal_bound(seq, M, UPPER, tol_rel, 'lemma1-upper')


def lower_bound(seq: WeightedSequence, M: CurvedFunction, tol_rel: Optional[float] = None) -> BoundReport:
    """Minimum of the bound functional over s; needs a concave M."""
    M.require(Curvature.CONCAVE, "lower_bound")
    return _extremal_bound(seq, M, LOWER, tol_rel, 'lemma1-lower')


def extremal_bound(seq: WeightedSequence, M: CurvedFunction, tol_rel: Optional[float] = None) -> BoundReport:
    """upper_bound for convex M, lower_bound for concave M."""
    return upper_bound(seq, M, tol_rel) if M.is_convex else lower_bound(seq, M, tol_rel)


# ---------------------------------
# Reduction
# ---------------------------------

def merge_step(seq: WeightedSequence, M: CurvedFunction) -> MergeResult:
    """
    Fuses two neighbouring elements so that the sequence shrinks by one.

    h(x) = p1 b1 M(x / p1) + p2 b2 M((c - x) / p2) on [0, c], c = p1 a1 + p2 a2,
    is compared at x1 = c p1 / (p1 + p2) and x2 = c - p2 a3 (a3 = 0 when m = 2).
    Case 1 fuses elements 1 and 2 into their p-weighted means; case 2 fuses
    elements 2 and 3 in b and p and moves the excess mass into a'1. For convex M
    the larger endpoint wins, for concave M the smaller one; ties pick case 1.
    """
    m = seq.m
    if m < 2:
        logger.raise_error(UsageError, "merge_step needs a sequence of length m >= 2.")

    a, b, p = seq.a, seq.b, seq.p
    c = p[0] * a[0] + p[1] * a[1]
    alpha = (p[0] * b[0], p[1] * b[1])
    beta = (1.0 / p[0], 1.0 / p[1])
    a_next = a[2] if m >= 3 else 0.0

    def h(x: float) -> float:
        return alpha[0] * M(beta[0] * x) + alpha[1] * M(beta[1] * max(c - x, 0.0))

    x1 = beta[1] * c / (beta[0] + beta[1])
    x2 = c - a_next * p[1]
    h1, h2 = h(x1), h(x2)
    first_case = h1 >= h2 if M.is_convex else h1 <= h2

    retired = 0.0
    if first_case:
        weight = p[0] + p[1]
        head_a = max((p[0] * a[0] + p[1] * a[1]) / weight, a_next)
        new_a = (head_a,) + a[2:]
        new_b = ((p[0] * b[0] + p[1] * b[1]) / weight,) + b[2:]
        new_p = (weight,) + p[2:]
    elif m >= 3:
        weight = p[1] + p[2]
        head_a = max((p[0] * a[0] + p[1] * a[1] - p[1] * a[2]) / p[0], a[2])
        new_a = (head_a,) + a[2:]
        new_b = (b[0], (p[1] * b[1] + p[2] * b[2]) / weight) + b[3:]
        new_p = (p[0], weight) + p[3:]
    else:
        # Element 2 lands at a = 0 where it contributes M(0) = 0
        new_a = (c / p[0],)
        new_b = (b[0],)
        new_p = (p[0],)
        retired = alpha[1]

    case = 1 if first_case else 2
    logger.debug(f"merge_step m={m}: h(x1)={h1!r} h(x2)={h2!r} -> case {case}")
    return MergeResult(WeightedSequence(new_a, new_b, new_p), case, (h1, h2), retired)


def reduce_chain(seq: WeightedSequence, M: CurvedFunction, tol_rel: Optional[float] = None) -> ReductionChain:
    """
    Applies merge_step down to a single element, recording lhs and bound per stage.

    For convex M every step must not decrease the lhs and must not increase the
    upper bound; for concave M the directions flip.

    Raises:
        InvariantError: If a step breaks the monotone chain beyond tolerance.
    """
    tol_rel = _tolerance(tol_rel)
    stage = seq
    chain = ReductionChain([stage], [lhs_sum(stage, M)], [extremal_bound(stage, M, tol_rel).bound], [], [])
    sign = 1.0 if M.is_convex else -1.0

    while stage.m > 1:
        result = merge_step(stage, M)
        stage = result.sequence
        lhs = lhs_sum(stage, M)
        bound = extremal_bound(stage, M, tol_rel).bound

        previous_lhs, previous_bound = chain.lhs[-1], chain.bounds[-1]
        lhs_tol = tol_rel * (1.0 + abs(previous_lhs))
        bound_tol = tol_rel * (1.0 + abs(previous_bound))
        if sign * (previous_lhs - lhs) > lhs_tol:
            logger.raise_error(InvariantError, f"Reduction step {chain.steps + 1} moved lhs the wrong way: {previous_lhs!r} -> {lhs!r}.")
        if sign * (bound - previous_bound) > bound_tol:
            logger.raise_error(InvariantError, f"Reduction step {chain.steps + 1} moved the bound the wrong way: {previous_bound!r} -> {bound!r}.")

        chain.stages.append(stage)
        chain.lhs.append(lhs)
        chain.bounds.append(bound)
        chain.cases.append(result.case)
        chain.retired_mass.append(result.retired_mass)

    return chain


# ---------------------------------
# Infinite sequences
# ---------------------------------

QUIET_TERMS = 3


def truncated_series_bound(seq_stream: Iterable[Tuple[float, float, float]], M: CurvedFunction,
                           tail_tol: Optional[float] = None, max_terms: Optional[int] = None,
                           tol_rel: Optional[float] = None) -> BoundReport:
    """
    Bound for an infinite sequence, evaluated on a prefix of the stream.

    Terms (a_k, b_k, p_k) are consumed until both p_k b_k |M(a_k)| and p_k a_k stay
    below tail_tol for three consecutive terms, or until max_terms is reached, in
    which case the report is flagged divergent. Convex M gives the sup, concave M the inf.

    Raises:
        InvariantError: If the stream yields an increasing a or a non-positive p.
    """
    config = Config()
    tail_tol = config.numeric('tail_tol') if tail_tol is None else tail_tol
    max_terms = config.numeric('max_terms') if max_terms is None else max_terms

    a: List[float] = []
    b: List[float] = []
    p: List[float] = []
    quiet = 0
    stopped = False
    for a_k, b_k, p_k in seq_stream:
        if a and a_k > a[-1]:
            logger.raise_error(InvariantError, f"Stream a must be nonincreasing, term {len(a) + 1} rose to {a_k!r}.")
        if p_k <= 0.0:
            logger.raise_error(InvariantError, f"Stream p must be positive, term {len(a) + 1} is {p_k!r}.")
        a.append(a_k)
        b.append(b_k)
        p.append(p_k)

        increment = abs(p_k * b_k * M(a_k))
        quiet = quiet + 1 if increment < tail_tol and p_k * a_k < tail_tol else 0
        if quiet >= QUIET_TERMS:
            stopped = True
            break
        if len(a) >= max_terms:
            break

    if not a:
        logger.raise_error(UsageError, "truncated_series_bound received an empty stream.")

    divergent = not stopped and len(a) >= max_terms
    if divergent:
        logger.warning(f"Series did not settle below tail_tol={tail_tol} within {max_terms} terms.")

    report = extremal_bound(WeightedSequence(a, b, p), M, tol_rel)
    report.divergent = divergent
    report.theorem = 'lemma1-series-upper' if M.is_convex else 'lemma1-series-lower'
    return report


# ---------------------------------
# Classical sum inequality
# ---------------------------------

def ordering(values: Sequence[float]) -> Optional[int]:
    """-1 for nonincreasing values, 1 for nondecreasing, None otherwise; constants count as nonincreasing."""
    steps = np.diff(np.asarray(values, dtype=float))
    if np.all(steps <= 0.0):
        return -1
    if np.all(steps >= 0.0):
        return 1
    return None


def classical_chebyshev_sum(f: Sequence[float], g: Sequence[float], p: Sequence[float],
                            tol_rel: Optional[float] = None) -> ChebyshevReport:
    """
    sum p f g against sum p f * sum p g / sum p for monotone f and g.

    Similarly ordered f, g give '>=', oppositely ordered '<='. Constant sequences
    count as similarly ordered with anything, and equality holds for them.

    Raises:
        UsageError: If f or g is not monotone.
    """
    f_order, g_order = ordering(f), ordering(g)
    if f_order is None or g_order is None:
        logger.raise_error(UsageError, "classical_chebyshev_sum needs monotone f and g.")
    if min(p) <= 0.0:
        logger.raise_error(InvariantError, "Weights p must be strictly positive.")

    lhs = compensated_sum(pk * fk * gk for pk, fk, gk in zip(p, f, g))
    rhs = (compensated_sum(pk * fk for pk, fk in zip(p, f))
           * compensated_sum(pk * gk for pk, gk in zip(p, g))
           / compensated_sum(p))
    constant = np.ptp(np.asarray(f, dtype=float)) == 0.0 or np.ptp(np.asarray(g, dtype=float)) == 0.0
    return ChebyshevReport.build(lhs, rhs, constant or f_order == g_order, _tolerance(tol_rel),
                                 theorem='classical-sum')
