"""
Random instances that satisfy (or, for probes, deliberately break) the
hypotheses of each inequality. Every generator draws from the numpy Generator
it is given, so an instance is fixed by the stream's seed.
"""
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from chebycheck.continuous.families import make_function
from chebycheck.continuous.sampled import Monotonicity, SampledFunction, WeightedTriple
from chebycheck.curvature import Curvature, CurvedFunction, make_piecewise_linear, parse_family
from chebycheck.discrete import WeightedSequence

P_FLOOR = 1e-3  # p draws stay above P_FLOOR * value_scale
MAX_STEP_PIECES = 20
RANDOM_PLIN = 'plin:random'


class Smoothness(str, Enum):
    STEP = 'step'
    PIECEWISE_LINEAR = 'piecewise-linear'
    SMOOTH = 'smooth'


def gen_sequence(rng: np.random.Generator, m: int, value_scale: float = 10.0) -> WeightedSequence:
    """a sorted descending on [0, value_scale]; b on [0, value_scale]; p on [P_FLOOR * value_scale, value_scale]."""
    a = np.sort(rng.uniform(0.0, value_scale, m))[::-1]
    b = rng.uniform(0.0, value_scale, m)
    p = rng.uniform(P_FLOOR * value_scale, value_scale, m)
    return WeightedSequence(tuple(a), tuple(b), tuple(p))


def gen_unsorted_sequence(rng: np.random.Generator, m: int, value_scale: float = 10.0) -> WeightedSequence:
    """Like gen_sequence but with a sorted ascending, which breaks the bound's hypothesis."""
    seq = gen_sequence(rng, m, value_scale)
    return WeightedSequence.unchecked(seq.a[::-1], seq.b, seq.p)


def _interior_points(rng: np.random.Generator, count: int, interval: Tuple[float, float]) -> np.ndarray:
    lo, hi = interval
    return np.unique(rng.uniform(lo, hi, count)) if count > 0 else np.empty(0)


def gen_monotone_fn(rng: np.random.Generator, kind: Monotonicity, smoothness: Smoothness,
                    interval: Tuple[float, float] = (0.0, 1.0), scale: float = 1.0) -> SampledFunction:
    """
    A nonnegative function carrying the monotonicity tag kind.

    STEP draws at most MAX_STEP_PIECES pieces, PIECEWISE_LINEAR interpolates sorted
    knots, SMOOTH mixes exponentials exp(-rate x) (nonincreasing) or
    1 - exp(-rate x) (nondecreasing) with positive coefficients.
    """
    descending = kind is Monotonicity.NONINCREASING
    smoothness = Smoothness(smoothness)

    if smoothness is Smoothness.STEP:
        breakpoints = _interior_points(rng, int(rng.integers(0, MAX_STEP_PIECES)), interval)
        values = np.sort(rng.uniform(0.0, scale, len(breakpoints) + 1))
        values = values[::-1] if descending else values
        return make_function('step', interval, {'values': values.tolist(), 'breakpoints': breakpoints.tolist()}, kind)

    if smoothness is Smoothness.PIECEWISE_LINEAR:
        knots = np.concatenate(([interval[0]], _interior_points(rng, int(rng.integers(0, 6)), interval), [interval[1]]))
        values = np.sort(rng.uniform(0.0, scale, len(knots)))
        values = values[::-1] if descending else values
        return SampledFunction.from_samples(knots, values, kind, True, label='plin-fn')

    count = int(rng.integers(1, 4))
    weights = rng.uniform(0.1, 1.0, count) * scale / count
    rates = rng.uniform(0.2, 5.0, count)
    left = interval[0]
    if descending:
        def evaluate(x):
            return np.sum(weights[:, None] * np.exp(-rates[:, None] * (np.atleast_1d(x) - left)), axis=0).reshape(np.shape(x))
    else:
        def evaluate(x):
            return np.sum(weights[:, None] * -np.expm1(-rates[:, None] * (np.atleast_1d(x) - left)), axis=0).reshape(np.shape(x))
    return SampledFunction(evaluate, interval[0], interval[1], kind, True, (), f"exp-mix:{count}")


def any_smoothness(rng: np.random.Generator) -> Smoothness:
    return list(Smoothness)[int(rng.integers(len(Smoothness)))]


def any_kind(rng: np.random.Generator) -> Monotonicity:
    return Monotonicity.NONINCREASING if rng.random() < 0.5 else Monotonicity.NONDECREASING


def gen_nonnegative(rng: np.random.Generator, interval: Tuple[float, float] = (0.0, 1.0),
                    kind: Optional[Monotonicity] = None) -> SampledFunction:
    """A monotone nonnegative g; the direction is random unless kind is given."""
    return gen_monotone_fn(rng, kind or any_kind(rng), any_smoothness(rng), interval)


def gen_weight(rng: np.random.Generator, interval: Tuple[float, float] = (0.0, 1.0)) -> SampledFunction:
    """A strictly positive p: a monotone nonnegative function lifted by an offset in [0.1, 1]."""
    base = gen_nonnegative(rng, interval)
    offset = float(rng.uniform(0.1, 1.0))
    inner = base.fn
    return SampledFunction(lambda x: offset + inner(x), base.left, base.right, base.monotonicity,
                           True, base.breakpoints, f"{offset:.3g}+{base.label}")


def gen_interval(rng: np.random.Generator) -> Tuple[float, float]:
    left = float(rng.uniform(-1.0, 1.0))
    return left, left + float(rng.uniform(0.5, 2.0))


def gen_triple(rng: np.random.Generator, f_kind: Monotonicity = Monotonicity.NONINCREASING,
               g_kind: Optional[Monotonicity] = None) -> WeightedTriple:
    interval = gen_interval(rng)
    f = gen_monotone_fn(rng, f_kind, any_smoothness(rng), interval)
    return WeightedTriple(f, gen_nonnegative(rng, interval, g_kind), gen_weight(rng, interval), label='random')


def gen_step_triple(rng: np.random.Generator, max_pieces: int = 8) -> WeightedTriple:
    """f, g and p piecewise constant on one shared random partition; f nonincreasing."""
    interval = gen_interval(rng)
    breakpoints = _interior_points(rng, int(rng.integers(0, max_pieces)), interval).tolist()
    pieces = len(breakpoints) + 1

    f_values = np.sort(rng.uniform(0.0, 1.0, pieces))[::-1]
    g_values = rng.uniform(0.0, 1.0, pieces)
    p_values = rng.uniform(0.1, 1.0, pieces)
    f, g, p = (make_function('step', interval, {'values': values.tolist(), 'breakpoints': breakpoints})
               for values in (f_values, g_values, p_values))
    return WeightedTriple(f, g, p, label='step')


def random_outer(rng: np.random.Generator, curvature: Curvature, value_scale: float = 10.0) -> CurvedFunction:
    """
    A piecewise-linear M with nonnegative slopes, ascending for convex and descending for concave.
    At least two distinct slopes are drawn, since a single slope is tagged convex.
    """
    count = int(rng.integers(2, 5))
    slopes = np.sort(rng.uniform(0.0, 3.0, count))
    slopes = slopes if curvature is Curvature.CONVEX else slopes[::-1]
    knots = np.concatenate(([0.0], np.sort(rng.uniform(0.0, value_scale, count - 1))))
    knots = np.unique(knots)
    return make_piecewise_linear(slopes[:len(knots)], knots)


def family_curvature(descriptor: str) -> Optional[Curvature]:
    """The curvature a descriptor produces, or None for 'plin:random', which fits either."""
    if descriptor == RANDOM_PLIN:
        return None
    return parse_family(descriptor).curvature


def resolve_family(descriptor: str, rng: np.random.Generator, curvature: Curvature,
                   value_scale: float = 10.0) -> CurvedFunction:
    if descriptor == RANDOM_PLIN:
        return random_outer(rng, curvature, value_scale)
    return parse_family(descriptor)


def draw_r(rng: np.random.Generator, at_most_one: bool) -> float:
    """r in [0.1, 1] for the first condition, r in [1, 4] for the second."""
    return float(rng.uniform(0.1, 1.0)) if at_most_one else float(rng.uniform(1.0, 4.0))
