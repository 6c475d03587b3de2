"""Report records shared by the discrete, continuous and conditions modules."""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Union

Number = Union[int, float]

UPPER = 'upper'
LOWER = 'lower'


def within_tolerance(slack: float, lhs: float, tol_rel: float) -> bool:
    return slack >= -tol_rel * (1.0 + abs(lhs))


@dataclass
class BoundReport:
    """
    Left-hand side against the extremal bound functional.

    slack is bound - lhs for upper bounds and lhs - bound for lower bounds;
    holds is slack >= -tol_rel * (1 + |lhs|).
    """
    lhs: float
    bound: float
    extremal_s: Number
    slack: float
    holds: bool
    divergent: bool = False
    kind: str = UPPER
    theorem: str = ''

    @classmethod
    def build(cls, lhs: float, bound: float, extremal_s: Number, kind: str, tol_rel: float,
              divergent: bool = False, theorem: str = '') -> 'BoundReport':
        slack = bound - lhs if kind == UPPER else lhs - bound
        return cls(lhs=lhs, bound=bound, extremal_s=extremal_s, slack=slack,
                   holds=within_tolerance(slack, lhs, tol_rel), divergent=divergent,
                   kind=kind, theorem=theorem)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'theorem': self.theorem,
            'lhs': self.lhs,
            'bound': self.bound,
            'extremal_s': self.extremal_s,
            'slack': self.slack,
            'holds': self.holds,
            'divergent': self.divergent,
        }


@dataclass
class ChebyshevReport:
    """Two-sided classical comparison of sum(p f g) with sum(p f) sum(p g) / sum(p)."""
    lhs: float
    rhs: float
    direction: str  # '>=' for similarly ordered f, g and '<=' otherwise
    slack: float
    holds: bool
    theorem: str = 'classical'

    @classmethod
    def build(cls, lhs: float, rhs: float, similarly_ordered: bool, tol_rel: float,
              theorem: str = 'classical') -> 'ChebyshevReport':
        direction = '>=' if similarly_ordered else '<='
        slack = lhs - rhs if similarly_ordered else rhs - lhs
        return cls(lhs, rhs, direction, slack, within_tolerance(slack, lhs, tol_rel), theorem)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ConditionReport:
    """Ratio of the s-prefix g-mass to the s-prefix p-mass**(1/r), on a grid of s."""
    r: float
    direction: str
    grid: List[float]
    ratio: List[float]
    boundary_ratio: float
    passed: bool
    worst_s: float
    worst_margin: float
    edge_growth: bool = False

    def margins(self) -> List[float]:
        sign = 1.0 if self.direction == 'corollary1' else -1.0
        return [sign * (self.boundary_ratio - value) for value in self.ratio]

    def rows(self) -> List[Dict[str, float]]:
        return [
            {'s': s, 'ratio': value, 'boundary_ratio': self.boundary_ratio, 'margin': margin}
            for s, value, margin in zip(self.grid, self.ratio, self.margins())
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'r': self.r,
            'direction': self.direction,
            'boundary_ratio': self.boundary_ratio,
            'passed': self.passed,
            'worst_s': self.worst_s,
            'worst_margin': self.worst_margin,
            'edge_growth': self.edge_growth,
            'rows': self.rows(),
        }


@dataclass
class EstimatesReport:
    """
    Classical estimate (mean of M(f) times the g-mass) against the Jensen-type
    estimate (M of the mean of f times the g-mass).
    """
    lhs: float
    classical_rhs: float
    jensen_rhs: float
    classical_direction: str
    classical_holds: bool
    jensen_ordered: bool
    attained_at_endpoint: bool
    jensen_holds: Optional[bool]
    search: BoundReport = field(repr=False, default=None)

    def to_dict(self) -> Dict[str, Any]:
        record = asdict(self)
        record['search'] = self.search.to_dict() if self.search is not None else None
        return record
