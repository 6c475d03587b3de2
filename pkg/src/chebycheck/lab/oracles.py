"""Reference computations that share no caching or summation order with the main paths."""
from typing import Optional, Tuple

import numpy as np

from chebycheck.config import Config
from chebycheck.continuous.bounds import bound_nondecreasing, extremal_bound_cont
from chebycheck.continuous.sampled import Monotonicity, WeightedTriple
from chebycheck.curvature import CurvedFunction
from chebycheck.discrete import WeightedSequence

PANEL_FACTOR = 4
GRID_FACTOR = 10


def oracle_discrete(seq: WeightedSequence, M: CurvedFunction) -> Tuple[float, float]:
    """
    (lhs, extremal bound) by plain summation in reversed index order and a scan
    of every s that recomputes P_s and B_s from scratch.
    """
    m = seq.m
    lhs = 0.0
    for k in reversed(range(m)):
        lhs += seq.p[k] * seq.b[k] * float(M(np.asarray([seq.a[k]]))[0])

    total = 0.0
    for k in reversed(range(m)):
        total += seq.p[k] * seq.a[k]

    values = []
    for s in range(1, m + 1):
        weight = 0.0
        mass = 0.0
        for k in reversed(range(s)):
            weight += seq.p[k]
            mass += seq.p[k] * seq.b[k]
        values.append(float(M(np.asarray([total / weight]))[0]) * mass)
    bound = max(values) if M.is_convex else min(values)
    return lhs, bound


def oracle_continuous(t: WeightedTriple, M: CurvedFunction, n: Optional[int] = None,
                      s_grid: Optional[int] = None) -> Tuple[float, float]:
    """(lhs, extremal bound) at PANEL_FACTOR times the panels and GRID_FACTOR times the s-grid."""
    config = Config()
    n = PANEL_FACTOR * int(config.numeric('panels') if n is None else n)
    s_grid = GRID_FACTOR * int(config.numeric('s_grid') if s_grid is None else s_grid)
    if t.f.monotonicity is Monotonicity.NONDECREASING:
        report = bound_nondecreasing(t, M, s_grid, n)
    else:
        report = extremal_bound_cont(t, M, s_grid, n)
    return report.lhs, report.bound
