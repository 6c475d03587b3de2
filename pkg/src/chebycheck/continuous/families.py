"""
Named function families for f, g and p, and the triples built from them.

A triple can be described as a builtin string, e.g.
'builtin:f=lin-dec,g=lin-inc,p=const', or as a YAML/JSON mapping:

    interval: [0, 1]
    horizon: null
    f: {family: step, values: [2, 1], breakpoints: [0.5]}
    g: {family: lin-inc}
    p: {family: const, value: 1}
"""
import math
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from chebycheck.continuous.sampled import Monotonicity, SampledFunction, WeightedTriple
from chebycheck.errors import ConfigError, DomainError
from chebycheck.utils.logger import Logger

logger = Logger(name=__name__)

BUILTIN_PREFIX = 'builtin:'
DEFAULT_INTERVAL = (0.0, 1.0)

Builder = Callable[[float, float, Dict[str, Any]], SampledFunction]


def _finite(right: float, family: str) -> None:
    if math.isinf(right):
        logger.raise_error(DomainError, f"Family '{family}' needs a finite interval.")


def const(left: float, right: float, params: Dict[str, Any]) -> SampledFunction:
    value = float(params.get('value', 1.0))
    return SampledFunction(lambda x: np.full_like(x, value, dtype=float), left, right,
                           Monotonicity.NONINCREASING, value >= 0.0, (), f"const:{value:g}")


def zero(left: float, right: float, params: Dict[str, Any]) -> SampledFunction:
    return SampledFunction(lambda x: np.zeros_like(x, dtype=float), left, right,
                           Monotonicity.NONINCREASING, True, (), 'zero')


def linear(left: float, right: float, params: Dict[str, Any]) -> SampledFunction:
    intercept = float(params.get('intercept', 0.0))
    slope = float(params.get('slope', 1.0))
    tag = Monotonicity.NONDECREASING if slope > 0.0 else Monotonicity.NONINCREASING
    nonnegative = intercept + slope * left >= 0.0 and (math.isinf(right) and slope >= 0.0
                                                       or intercept + slope * right >= 0.0)
    return SampledFunction(lambda x: intercept + slope * x, left, right, tag, nonnegative, (),
                           f"linear:{intercept:g}+{slope:g}x")


def lin_inc(left: float, right: float, params: Dict[str, Any]) -> SampledFunction:
    """x - left, scaled."""
    scale = float(params.get('scale', 1.0))
    return SampledFunction(lambda x: scale * (x - left), left, right, Monotonicity.NONDECREASING, True, (), 'lin-inc')


def lin_dec(left: float, right: float, params: Dict[str, Any]) -> SampledFunction:
    """right - x, scaled."""
    _finite(right, 'lin-dec')
    scale = float(params.get('scale', 1.0))
    return SampledFunction(lambda x: scale * (right - x), left, right, Monotonicity.NONINCREASING, True, (), 'lin-dec')


def exp_dec(left: float, right: float, params: Dict[str, Any]) -> SampledFunction:
    rate = float(params.get('rate', 1.0))
    scale = float(params.get('scale', 1.0))
    return SampledFunction(lambda x: scale * np.exp(-rate * (x - left)), left, right,
                           Monotonicity.NONINCREASING, True, (), f"exp-dec:{rate:g}")


def exp_inc(left: float, right: float, params: Dict[str, Any]) -> SampledFunction:
    rate = float(params.get('rate', 1.0))
    scale = float(params.get('scale', 1.0))
    return SampledFunction(lambda x: scale * -np.expm1(-rate * (x - left)), left, right,
                           Monotonicity.NONDECREASING, True, (), f"exp-inc:{rate:g}")


def step(left: float, right: float, params: Dict[str, Any]) -> SampledFunction:
    """
    Right-continuous step function: values[k] on [breakpoints[k-1], breakpoints[k]).
    """
    values = np.asarray(params.get('values', []), dtype=float)
    breakpoints = np.asarray(params.get('breakpoints', []), dtype=float)
    if len(values) == 0 or len(breakpoints) != len(values) - 1:
        logger.raise_error(ConfigError, "A step function needs one more value than interior breakpoints.")
    if np.any(np.diff(breakpoints) <= 0.0) or (len(breakpoints) and not left < breakpoints[0] <= breakpoints[-1] < right):
        logger.raise_error(DomainError, f"Step breakpoints {list(breakpoints)} must increase strictly inside ({left}, {right}).")

    steps = np.diff(values)
    if np.all(steps <= 0.0):
        tag = Monotonicity.NONINCREASING
    elif np.all(steps >= 0.0):
        tag = Monotonicity.NONDECREASING
    else:
        tag = Monotonicity.NONE

    def evaluate(x: np.ndarray) -> np.ndarray:
        return values[np.searchsorted(breakpoints, x, side='right')]

    return SampledFunction(evaluate, left, right, tag, bool(np.all(values >= 0.0)),
                           tuple(breakpoints), f"step:{len(values)}")


FAMILIES: Dict[str, Builder] = {
    'const': const,
    'zero': zero,
    'linear': linear,
    'lin-inc': lin_inc,
    'lin-dec': lin_dec,
    'exp-dec': exp_dec,
    'exp-inc': exp_inc,
    'step': step,
}


def make_function(family: str, interval: Tuple[float, float] = DEFAULT_INTERVAL,
                  params: Optional[Dict[str, Any]] = None,
                  monotonicity: Optional[Monotonicity] = None) -> SampledFunction:
    """
    Builds a family member on interval. monotonicity overrides the family's own tag,
    e.g. to use a constant as a nondecreasing f.

    Raises:
        ConfigError: If the family is unknown.
    """
    builder = FAMILIES.get(family)
    if builder is None:
        logger.raise_error(ConfigError, f"Unknown function family '{family}'. Known: {', '.join(sorted(FAMILIES))}.")
    fn = builder(float(interval[0]), float(interval[1]), dict(params or {}))
    if monotonicity is not None:
        fn = SampledFunction(fn.fn, fn.left, fn.right, Monotonicity(monotonicity),
                             fn.nonnegative, fn.breakpoints, fn.label)
    return fn


def _function_from_entry(entry: Any, interval: Tuple[float, float], role: str) -> SampledFunction:
    if isinstance(entry, str):
        return make_function(entry, interval)
    if not isinstance(entry, dict) or 'family' not in entry:
        logger.raise_error(ConfigError, f"Triple entry '{role}' needs a 'family' key.")
    params = {key: value for key, value in entry.items() if key not in ('family', 'monotonicity')}
    return make_function(entry['family'], interval, params, entry.get('monotonicity'))


def triple_from_config(data: Dict[str, Any]) -> WeightedTriple:
    """
    Builds a WeightedTriple from a parsed YAML/JSON mapping with keys
    interval, horizon, f, g and p. 'inf' is accepted as the right end.
    """
    try:
        interval = tuple(float(x) for x in data.get('interval', DEFAULT_INTERVAL))
        if len(interval) != 2:
            raise ValueError("interval needs two entries")
        horizon = data.get('horizon')
        horizon = None if horizon is None else float(horizon)
        f, g, p = (_function_from_entry(data[role], interval, role) for role in ('f', 'g', 'p'))
    except KeyError as e:
        logger.raise_error(ConfigError, f"Triple config is missing {e}.")
    except (TypeError, ValueError) as e:
        if isinstance(e, (ConfigError, DomainError)):
            raise
        logger.raise_error(ConfigError, f"Malformed triple config: {e}")
    return WeightedTriple(f, g, p, horizon, label=data.get('label', 'triple'))


def parse_builtin_triple(text: str) -> WeightedTriple:
    """
    Parses 'builtin:f=lin-dec,g=lin-inc,p=const' on [0, 1]. Entries may add
    'interval=lo:hi' and 'horizon=h'; missing roles default to const.
    """
    if not text.startswith(BUILTIN_PREFIX):
        logger.raise_error(ConfigError, f"Builtin triples start with '{BUILTIN_PREFIX}', got '{text}'.")
    data: Dict[str, Any] = {'f': 'const', 'g': 'const', 'p': 'const', 'label': text}
    for item in filter(None, (part.strip() for part in text[len(BUILTIN_PREFIX):].split(','))):
        key, sep, value = item.partition('=')
        if not sep:
            logger.raise_error(ConfigError, f"Malformed builtin entry '{item}'; expected key=value.")
        if key == 'interval':
            data['interval'] = value.split(':')
        elif key in ('f', 'g', 'p', 'horizon'):
            data[key] = value
        else:
            logger.raise_error(ConfigError, f"Unknown builtin key '{key}'.")
    return triple_from_config(data)
