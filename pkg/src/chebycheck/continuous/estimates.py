"""
Classical and Jensen-type estimates of int p g M(f).

When M(f) is nonincreasing, the classical integral inequality applied to the
pair (M(f), g) bounds the left-hand side by the p-mean of M(f) times the
g-mass, from above for nondecreasing g and from below for nonincreasing g.
When the bound functional attains its extremum at the far endpoint, M of
the p-mean of f times the g-mass is itself a bound, and for convex M it is
the sharper of the two.
"""
from typing import Optional

import numpy as np

from chebycheck.config import Config
from chebycheck.continuous.bounds import (BoundFunctional, PREFIX, SUFFIX, bound_nondecreasing,
                                          extremal_bound_cont)
from chebycheck.continuous.quadrature import quadrature, quadrature_nodes
from chebycheck.continuous.sampled import Monotonicity, SampledFunction, WeightedTriple
from chebycheck.curvature import CurvedFunction
from chebycheck.errors import UsageError
from chebycheck.reports import UPPER, LOWER, EstimatesReport, within_tolerance
from chebycheck.utils.logger import Logger

logger = Logger(name=__name__)


def derived_estimates(t: WeightedTriple, M: CurvedFunction, n: Optional[int] = None,
                      s_grid: Optional[int] = None, tol_rel: Optional[float] = None) -> EstimatesReport:
    """
    Compares the classical estimate with the Jensen-type estimate and checks both against the lhs.

    classical_direction is 'upper' for nondecreasing g and 'lower' for nonincreasing g.
    jensen_holds is None unless the extremum of the bound functional sits at the
    endpoint (s = b for nonincreasing f, s = a for nondecreasing f).

    Raises:
        UsageError: If g is untagged or M(f) is not nonincreasing on the sample grid.
    """
    config = Config()
    n = int(config.numeric('panels') if n is None else n)
    tol_rel = config.numeric('tol_rel_continuous') if tol_rel is None else tol_rel

    if t.g.monotonicity is Monotonicity.NONE:
        logger.raise_error(UsageError, "derived_estimates needs g tagged monotone.")
    outer = t.f.compose(M)
    _, outer_values = quadrature_nodes(outer, t.left, t.right, n)
    slack = config.numeric('monotone_slack')
    if np.any(np.diff(outer_values) > slack * (1.0 + np.abs(outer_values[1:]))):
        logger.raise_error(UsageError, f"derived_estimates needs {outer.label} nonincreasing.")

    sub = (t.left, t.right)
    p_mass = quadrature(t.p, sub, n)
    pg_mass = quadrature(t.pg(), sub, n)
    mean_outer = quadrature(SampledFunction.product(t.p, outer), sub, n) / p_mass
    mean_f = quadrature(t.pf(), sub, n) / p_mass

    lhs = quadrature(SampledFunction.product(t.p, t.g, outer), sub, n)
    classical_rhs = mean_outer * pg_mass
    jensen_rhs = M(mean_f) * pg_mass

    classical_direction = UPPER if t.g.monotonicity is Monotonicity.NONDECREASING else LOWER
    classical_slack = classical_rhs - lhs if classical_direction == UPPER else lhs - classical_rhs
    classical_holds = within_tolerance(classical_slack, lhs, tol_rel)

    order_slack = classical_rhs - jensen_rhs if M.is_convex else jensen_rhs - classical_rhs
    jensen_ordered = within_tolerance(order_slack, classical_rhs, tol_rel)

    if t.f.monotonicity is Monotonicity.NONDECREASING:
        search = bound_nondecreasing(t, M, s_grid, n, tol_rel=tol_rel)
        endpoint, side = t.left, SUFFIX
    else:
        search = extremal_bound_cont(t, M, s_grid, n, tol_rel=tol_rel)
        endpoint, side = t.right, PREFIX

    # the endpoint attains the extremum when nothing beats it beyond tolerance
    at_endpoint = float(BoundFunctional(t, M, n, side)(endpoint)[0])
    gap = search.bound - at_endpoint if M.is_convex else at_endpoint - search.bound
    attained = within_tolerance(-gap, search.bound, tol_rel)

    jensen_holds = None
    if attained:
        jensen_slack = jensen_rhs - lhs if M.is_convex else lhs - jensen_rhs
        jensen_holds = within_tolerance(jensen_slack, lhs, tol_rel)

    logger.debug(f"derived_estimates: lhs={lhs!r} classical={classical_rhs!r} jensen={jensen_rhs!r} attained={attained}")
    return EstimatesReport(lhs, classical_rhs, jensen_rhs, classical_direction, classical_holds,
                           jensen_ordered, attained, jensen_holds, search)
