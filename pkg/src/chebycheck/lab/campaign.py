"""
Seeded fuzz campaigns over every inequality target.

Trial t of target k draws from numpy.random.default_rng([seed, t, k]), where k
is the target's position in TARGETS, so any trial can be replayed alone and
results do not depend on worker count or scheduling.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from chebycheck.conditions import Direction, check_condition, corollary_bound
from chebycheck.config import Config
from chebycheck.continuous.bounds import (bound_nondecreasing, classical_chebyshev, lower_bound_cont,
                                          upper_bound_cont)
from chebycheck.continuous.estimates import derived_estimates
from chebycheck.continuous.sampled import Monotonicity
from chebycheck.curvature import Curvature, CurvedFunction
from chebycheck.discrete import lower_bound, upper_bound
from chebycheck.errors import ConfigError
from chebycheck.lab import generators as gen
from chebycheck.reports import UPPER
from chebycheck.utils.logger import Logger
from chebycheck.utils.parsing_processor import ParsingProcessor

logger = Logger(name=__name__, default_logger='campaign')

PROBE_TARGETS = ('lemma1-unsorted',)
TARGETS = (
    'lemma1-upper', 'lemma1-lower', 'theorem1-upper', 'theorem1-lower', 'remark',
    'classical', 'corollary1', 'corollary2', 'estimates',
) + PROBE_TARGETS

ROW_COLUMNS = ('target', 'trial', 'family', 'lhs', 'bound', 'slack', 'holds', 'divergent', 'skipped')


@dataclass
class CampaignConfig:
    seed: int
    trials: int
    m_range: Tuple[int, int]
    value_scale: float
    s_grid: int
    panels: int
    tol_rel: float
    tol_rel_continuous: float
    families: List[str]
    targets: List[str]
    workers: int = 1

    def __post_init__(self):
        self.m_range = tuple(self.m_range)
        self.families = list(self.families)
        self.targets = list(self.targets)

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]] = None) -> 'CampaignConfig':
        """Values in data override the campaign defaults from settings; unknown keys are rejected."""
        merged = dict(Config().campaign_defaults())
        unknown = set(data or {}) - {f.name for f in fields(cls)}
        if unknown:
            logger.raise_error(ConfigError, f"Unknown campaign setting(s): {', '.join(sorted(unknown))}.")
        merged.update(data or {})
        try:
            config = cls(**{f.name: merged[f.name] for f in fields(cls) if f.name in merged})
        except TypeError as e:
            logger.raise_error(ConfigError, f"Incomplete campaign config: {e}")
        config.validate()
        return config

    @classmethod
    def load(cls, path: str) -> 'CampaignConfig':
        return cls.from_dict(ParsingProcessor().load_mapping(path))

    def validate(self) -> None:
        """
        Raises:
            ConfigError: On the first invalid setting.
        """
        def fail(msg: str):
            logger.raise_error(ConfigError, msg)

        if not isinstance(self.trials, int) or self.trials < 1:
            fail(f"trials must be a positive integer, got {self.trials!r}.")
        if not isinstance(self.seed, int) or self.seed < 0:
            fail(f"seed must be a nonnegative integer, got {self.seed!r}.")
        if len(self.m_range) != 2 or not 1 <= self.m_range[0] <= self.m_range[1]:
            fail(f"m_range must be [min, max] with 1 <= min <= max, got {list(self.m_range)}.")
        if not self.tol_rel > 0 or not self.tol_rel_continuous > 0:
            fail("tol_rel and tol_rel_continuous must be positive.")
        if self.s_grid < 3 or self.panels < 1 or self.workers < 1 or not self.value_scale > 0:
            fail("s_grid must be at least 3; panels, workers and value_scale must be positive.")
        unknown = [target for target in self.targets if target not in TARGETS]
        if unknown or not self.targets:
            fail(f"Unknown or missing target(s) {unknown}; known targets: {', '.join(TARGETS)}.")
        if not self.families:
            fail("At least one M family is needed.")
        for descriptor in self.families:
            gen.family_curvature(descriptor)

    def to_dict(self) -> Dict[str, Any]:
        record = asdict(self)
        record['m_range'] = list(self.m_range)
        return record


@dataclass
class TrialResult:
    target: str
    trial: int
    family: str = ''
    lhs: Optional[float] = None
    bound: Optional[float] = None
    slack: Optional[float] = None
    holds: bool = True
    divergent: bool = False
    skipped: bool = False


@dataclass
class TargetSummary:
    checked: int = 0
    held: int = 0
    violated: int = 0
    divergent: int = 0
    skipped: int = 0
    worst_slack: Optional[float] = None

    def add(self, result: TrialResult) -> None:
        if result.skipped:
            self.skipped += 1
            return
        self.checked += 1
        if result.holds:
            self.held += 1
        else:
            self.violated += 1
        if result.divergent:
            self.divergent += 1
        if self.worst_slack is None or result.slack < self.worst_slack:
            self.worst_slack = result.slack


@dataclass
class CampaignReport:
    config: CampaignConfig
    targets: Dict[str, TargetSummary] = field(default_factory=dict)
    violations: List[Dict[str, Any]] = field(default_factory=list)
    rows: List[TrialResult] = field(default_factory=list)

    @property
    def all_held(self) -> bool:
        """True when no target outside the probes has a violation."""
        return all(summary.violated == 0 for target, summary in self.targets.items() if target not in PROBE_TARGETS)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'config': self.config.to_dict(),
            'targets': {target: asdict(summary) for target, summary in self.targets.items()},
            'violations': self.violations,
            'all_held': self.all_held,
        }

    def to_json(self) -> str:
        return ParsingProcessor.dump_json(self.to_dict())

    def to_csv(self) -> str:
        return ParsingProcessor.dump_csv((asdict(row) for row in self.rows), ROW_COLUMNS)


# ---------------------------------
# Targets
# ---------------------------------

def _outer(cfg: CampaignConfig, rng: np.random.Generator,
           curvature: Optional[Curvature]) -> Optional[CurvedFunction]:
    """Draws an M family from cfg.families compatible with curvature (any when None)."""
    if curvature is None:
        curvature = Curvature.CONVEX if rng.random() < 0.5 else Curvature.CONCAVE
    compatible = [d for d in cfg.families if gen.family_curvature(d) in (None, curvature)]
    if not compatible:
        return None
    descriptor = compatible[int(rng.integers(len(compatible)))]
    return gen.resolve_family(descriptor, rng, curvature, cfg.value_scale)


def _from_report(result: TrialResult, report) -> TrialResult:
    result.lhs, result.bound, result.slack = report.lhs, report.bound, report.slack
    result.holds, result.divergent = report.holds, report.divergent
    return result


def _discrete(curvature: Curvature, sorted_values: bool = True):
    def run(cfg: CampaignConfig, rng: np.random.Generator, result: TrialResult):
        M = _outer(cfg, rng, curvature)
        if M is None:
            result.skipped = True
            return result
        m = int(rng.integers(cfg.m_range[0], cfg.m_range[1] + 1))
        draw = gen.gen_sequence if sorted_values else gen.gen_unsorted_sequence
        seq = draw(rng, m, cfg.value_scale)
        bound = upper_bound if curvature is Curvature.CONVEX else lower_bound
        result.family = M.label
        return _from_report(result, bound(seq, M, cfg.tol_rel))
    return run


def _theorem(curvature: Curvature):
    def run(cfg: CampaignConfig, rng: np.random.Generator, result: TrialResult):
        M = _outer(cfg, rng, curvature)
        if M is None:
            result.skipped = True
            return result
        triple = gen.gen_triple(rng)
        bound = upper_bound_cont if curvature is Curvature.CONVEX else lower_bound_cont
        result.family = M.label
        return _from_report(result, bound(triple, M, cfg.s_grid, cfg.panels, tol_rel=cfg.tol_rel_continuous))
    return run


def _remark(cfg: CampaignConfig, rng: np.random.Generator, result: TrialResult):
    M = _outer(cfg, rng, None)
    if M is None:
        result.skipped = True
        return result
    triple = gen.gen_triple(rng, f_kind=Monotonicity.NONDECREASING)
    result.family = M.label
    return _from_report(result, bound_nondecreasing(triple, M, cfg.s_grid, cfg.panels, tol_rel=cfg.tol_rel_continuous))


def _classical(cfg: CampaignConfig, rng: np.random.Generator, result: TrialResult):
    triple = gen.gen_triple(rng, f_kind=gen.any_kind(rng), g_kind=gen.any_kind(rng))
    report = classical_chebyshev(triple.p, triple.f, triple.g, cfg.panels, cfg.tol_rel_continuous)
    result.lhs, result.bound, result.slack, result.holds = report.lhs, report.rhs, report.slack, report.holds
    return result


def _corollary(direction: Direction):
    def run(cfg: CampaignConfig, rng: np.random.Generator, result: TrialResult):
        r = gen.draw_r(rng, direction is Direction.COROLLARY1)
        triple = gen.gen_triple(rng)
        result.family = f"r={r:.6g}"
        condition = check_condition(triple.p, triple.g, r, direction, cfg.s_grid, cfg.panels, cfg.tol_rel_continuous)
        # edge growth leaves the condition unconfirmed between a and the first grid point
        if not condition.passed or condition.edge_growth:
            result.skipped = True
            return result
        report = corollary_bound(triple.p, triple.g, triple.f, r, direction, cfg.panels, condition,
                                 tol_rel=cfg.tol_rel_continuous)
        return _from_report(result, report)
    return run


def _estimates(cfg: CampaignConfig, rng: np.random.Generator, result: TrialResult):
    # nonnegative slopes and powers keep M nondecreasing, so M(f) inherits f's decrease
    M = _outer(cfg, rng, None)
    if M is None:
        result.skipped = True
        return result
    triple = gen.gen_triple(rng, g_kind=gen.any_kind(rng))
    report = derived_estimates(triple, M, cfg.panels, cfg.s_grid, cfg.tol_rel_continuous)
    result.family = M.label
    result.lhs, result.bound = report.lhs, report.classical_rhs
    result.slack = (report.classical_rhs - report.lhs if report.classical_direction == UPPER
                    else report.lhs - report.classical_rhs)
    result.holds = report.classical_holds and report.jensen_ordered and report.jensen_holds is not False
    result.divergent = report.search.divergent
    return result


RUNNERS: Dict[str, Callable[[CampaignConfig, np.random.Generator, TrialResult], TrialResult]] = {
    'lemma1-upper': _discrete(Curvature.CONVEX),
    'lemma1-lower': _discrete(Curvature.CONCAVE),
    'lemma1-unsorted': _discrete(Curvature.CONVEX, sorted_values=False),
    'theorem1-upper': _theorem(Curvature.CONVEX),
    'theorem1-lower': _theorem(Curvature.CONCAVE),
    'remark': _remark,
    'classical': _classical,
    'corollary1': _corollary(Direction.COROLLARY1),
    'corollary2': _corollary(Direction.COROLLARY2),
    'estimates': _estimates,
}


# ---------------------------------
# Running
# ---------------------------------

def trial_rng(seed: int, trial: int, target: str) -> np.random.Generator:
    return np.random.default_rng([seed, trial, TARGETS.index(target)])


def replay(cfg: CampaignConfig, target: str, trial: int) -> TrialResult:
    """Recomputes a single trial; the result matches the campaign's row bit for bit."""
    if target not in RUNNERS:
        logger.raise_error(ConfigError, f"Unknown target '{target}'.")
    return RUNNERS[target](cfg, trial_rng(cfg.seed, trial, target), TrialResult(target, trial))


def _run_trial(cfg: CampaignConfig, trial: int) -> List[TrialResult]:
    return [replay(cfg, target, trial) for target in cfg.targets]


def fuzz_campaign(cfg: CampaignConfig) -> CampaignReport:
    """
    Runs cfg.trials trials of every target in cfg.targets.

    Trials run in a ProcessPoolExecutor when cfg.workers > 1; rows are merged in
    (trial, target) order either way.
    """
    cfg.validate()
    report = CampaignReport(cfg, {target: TargetSummary() for target in cfg.targets})
    logger.info(f"Campaign seed={cfg.seed}: {cfg.trials} trials over {', '.join(cfg.targets)}")

    trials = range(cfg.trials)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            batches = list(pool.map(_run_trial, [cfg] * cfg.trials, trials))
    else:
        batches = [_run_trial(cfg, trial) for trial in trials]

    for batch in batches:
        for result in batch:
            report.rows.append(result)
            report.targets[result.target].add(result)
            if not result.skipped and not result.holds:
                logger.violation(result.target, result.trial, result.slack)
                report.violations.append({
                    'target': result.target, 'trial': result.trial, 'seed': cfg.seed,
                    'family': result.family, 'lhs': result.lhs, 'bound': result.bound, 'slack': result.slack,
                })

    for target, summary in report.targets.items():
        logger.info(f"{target}: checked={summary.checked} violated={summary.violated} skipped={summary.skipped}")
    return report
