"""
chebycheck command line.

    chebycheck bound --discrete --csv seq.csv --M power:2
    chebycheck verify --triple builtin:f=lin-dec,g=lin-inc,p=const --M power:2
    chebycheck check-condition --triple builtin:f=lin-dec,g=lin-inc,p=const --r 0.5 --direction c1
    chebycheck fuzz --config campaign.yaml --out report.json
    chebycheck reduce --a 3,2,1 --b 1,1,1 --p 1,1,1 --M power:2

Exit status: 0 when every checked inequality holds, 1 on a violation or a
failed condition, 2 on usage or configuration errors.
"""
import argparse
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from colorama import just_fix_windows_console
from termcolor import colored

from chebycheck.conditions import Direction, check_condition, corollary_bound
from chebycheck.config import Config
from chebycheck.continuous.bounds import bound_nondecreasing, classical_chebyshev, extremal_bound_cont
from chebycheck.continuous.estimates import derived_estimates
from chebycheck.continuous.sampled import Monotonicity, WeightedTriple
from chebycheck.curvature import CurvedFunction, check_curvature, parse_family
from chebycheck.discrete import WeightedSequence, classical_chebyshev_sum, extremal_bound, ordering, reduce_chain
from chebycheck.errors import ChebycheckError, InvariantError, UsageError
from chebycheck.lab.campaign import PROBE_TARGETS, CampaignConfig, fuzz_campaign
from chebycheck.utils.logger import Logger
from chebycheck.utils.parsing_processor import ParsingProcessor

logger = Logger(name=__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

REPORT_COLUMNS = ('instance_id', 'theorem', 'lhs', 'bound', 'extremal_s', 'slack', 'holds', 'divergent')


class Outcome:
    """Records produced by one command and whether everything they check holds."""

    def __init__(self, instance_id: str):
        self.instance_id = instance_id
        self.records: List[Dict[str, Any]] = []
        self.document: Optional[Dict[str, Any]] = None  # emitted as is in json format
        self.ok = True

    def add(self, record: Dict[str, Any], holds: Optional[bool] = None) -> None:
        self.records.append({'instance_id': self.instance_id, **record})
        if holds is False:
            self.ok = False


# ---------------------------------
# Formatting
# ---------------------------------

def _digits() -> int:
    return int(Config().numeric('significant_digits'))


def rounded(value: Any, digits: int) -> Any:
    """Rounds every float inside value to digits significant digits."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {key: rounded(item, digits) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [rounded(item, digits) for item in value]
    return value


def _text_value(value: Any, digits: int) -> str:
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def render_text(records: List[Dict[str, Any]], color: bool) -> str:
    digits = _digits()
    paint = colored if color else (lambda text, *args, **kwargs: text)
    lines = []
    for record in records:
        title = record.get('theorem') or record.get('kind') or 'report'
        lines.append(paint(f"[{title}] {record.get('instance_id', '')}", attrs=['bold']))
        for key, value in record.items():
            if key in ('instance_id', 'theorem', 'kind') or isinstance(value, (dict, list)):
                continue
            lines.append(f"  {key}: {_text_value(value, digits)}")
        if record.get('divergent'):
            lines.append(paint("  DIVERGENT: the extremum keeps moving toward the open end of the s-range", 'yellow'))
        for key in ('holds', 'passed'):
            if key in record:
                verdict = paint('HOLDS', 'green') if record[key] else paint('VIOLATED', 'red', attrs=['bold'])
                lines.append(f"  => {verdict}")
        for row in record.get('rows', []) or []:
            lines.append("    " + "  ".join(f"{k}={_text_value(v, digits)}" for k, v in row.items()))
    return "\n".join(lines) + "\n"


def emit(outcome: Outcome, fmt: str, out: Optional[str], color: bool) -> None:
    digits = _digits()
    if fmt == 'json':
        document = outcome.document if outcome.document is not None else outcome.records
        text = ParsingProcessor.dump_json(rounded(document, digits))
    elif fmt == 'csv':
        rows = [rounded(record, digits) for record in outcome.records]
        columns = REPORT_COLUMNS if all('lhs' in row for row in rows) else None
        text = ParsingProcessor.dump_csv(rows, columns)
    else:
        text = render_text(outcome.records, color and out is None)

    if out:
        ParsingProcessor().write_text(out, text)
    else:
        sys.stdout.write(text)


# ---------------------------------
# Inputs
# ---------------------------------

def _floats(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise UsageError(f"Expected a comma-separated list of numbers, got '{text}'.") from None


def load_sequence(args: argparse.Namespace) -> Tuple[WeightedSequence, str]:
    if args.csv:
        return ParsingProcessor().load_sequence_csv(args.csv), args.csv
    if args.a is None or args.b is None or args.p is None:
        raise UsageError("Give a sequence with --csv FILE or with --a, --b and --p.")
    return WeightedSequence(_floats(args.a), _floats(args.b), _floats(args.p)), 'inline'


def load_triple(args: argparse.Namespace) -> Tuple[WeightedTriple, str]:
    if not args.triple:
        raise UsageError("Give a triple with --triple (builtin:..., a CSV file or a YAML/JSON config).")
    return ParsingProcessor().load_triple(args.triple), args.triple


def outer_function(args: argparse.Namespace) -> CurvedFunction:
    M = parse_family(args.M)
    if args.check_curvature:
        report = check_curvature(M)
        if not report.passed:
            raise UsageError(f"{M.label} fails its {M.curvature.value} tag at {len(report.violations)} sampled pairs.")
    return M


def _s_points(args: argparse.Namespace) -> Optional[List[float]]:
    return _floats(args.points) if getattr(args, 'points', None) else None


def _continuous_bound(triple: WeightedTriple, M: CurvedFunction, args: argparse.Namespace):
    bound = bound_nondecreasing if triple.f.monotonicity is Monotonicity.NONDECREASING else extremal_bound_cont
    return bound(triple, M, args.grid, args.panels, _s_points(args), args.tol)


# ---------------------------------
# Commands
# ---------------------------------

def cmd_bound(args: argparse.Namespace) -> Outcome:
    M = outer_function(args)
    if args.discrete:
        seq, source = load_sequence(args)
        report = extremal_bound(seq, M, args.tol)
    else:
        triple, source = load_triple(args)
        report = _continuous_bound(triple, M, args)
    outcome = Outcome(source)
    outcome.add(report.to_dict(), report.holds)
    return outcome


def cmd_verify(args: argparse.Namespace) -> Outcome:
    """The bound plus every classical comparison whose hypotheses the instance meets."""
    M = outer_function(args)
    if args.discrete:
        seq, source = load_sequence(args)
        outcome = Outcome(source)
        report = extremal_bound(seq, M, args.tol)
        outcome.add(report.to_dict(), report.holds)
        if ordering(seq.b) is not None:
            classical = classical_chebyshev_sum(seq.a, seq.b, seq.p, args.tol)
            outcome.add(classical.to_dict(), classical.holds)
        return outcome

    triple, source = load_triple(args)
    outcome = Outcome(source)
    report = _continuous_bound(triple, M, args)
    outcome.add(report.to_dict(), report.holds)

    if triple.g.monotonicity is not Monotonicity.NONE and not triple.is_truncated:
        classical = classical_chebyshev(triple.p, triple.f, triple.g, args.panels, args.tol)
        outcome.add(classical.to_dict(), classical.holds)
        try:
            estimates = derived_estimates(triple, M, args.panels, args.grid, args.tol)
        except UsageError as e:
            logger.info(f"Skipping derived estimates: {e}")
        else:
            record = estimates.to_dict()
            record.pop('search')
            holds = estimates.classical_holds and estimates.jensen_ordered and estimates.jensen_holds is not False
            outcome.add({'theorem': 'estimates', **record, 'holds': holds}, holds)
    return outcome


def cmd_check_condition(args: argparse.Namespace) -> Outcome:
    triple, source = load_triple(args)
    direction = Direction.parse(args.direction)
    condition = check_condition(triple.p, triple.g, args.r, direction, args.grid, args.panels, args.tol,
                                triple.horizon)
    outcome = Outcome(source)
    outcome.add({'theorem': f"{direction.value}-condition", **condition.to_dict()}, condition.passed)
    if condition.passed and triple.f.monotonicity is Monotonicity.NONINCREASING:
        report = corollary_bound(triple.p, triple.g, triple.f, args.r, direction, args.panels, condition,
                                 tol_rel=args.tol, horizon=triple.horizon)
        outcome.add(report.to_dict(), report.holds)
    return outcome


def cmd_fuzz(args: argparse.Namespace) -> Outcome:
    data: Dict[str, Any] = ParsingProcessor().load_mapping(args.config) if args.config else {}
    for key in ('seed', 'trials', 'workers', 'panels'):
        if getattr(args, key) is not None:
            data[key] = getattr(args, key)
    if args.grid is not None:
        data['s_grid'] = args.grid
    if args.tol is not None:
        data['tol_rel'] = args.tol
    if args.targets:
        data['targets'] = [t.strip() for t in args.targets.split(',') if t.strip()]
    report = fuzz_campaign(CampaignConfig.from_dict(data))

    if args.rows:
        ParsingProcessor().write_text(args.rows, report.to_csv())
    outcome = Outcome(args.config or 'defaults')
    outcome.ok = report.all_held
    outcome.document = report.to_dict()
    for target, summary in outcome.document['targets'].items():
        if target in PROBE_TARGETS:
            # probes are expected to find violations; they carry no verdict
            outcome.add({'kind': target, **summary, 'probe': True})
        else:
            outcome.add({'kind': target, **summary, 'holds': summary['violated'] == 0})
    return outcome


def cmd_reduce(args: argparse.Namespace) -> Outcome:
    M = outer_function(args)
    seq, source = load_sequence(args)
    outcome = Outcome(source)
    try:
        chain = reduce_chain(seq, M, args.tol)
    except InvariantError as e:
        outcome.add({'kind': 'reduce', 'error': str(e), 'holds': False}, False)
        return outcome
    for step, stage in enumerate(chain.stages):
        outcome.add({
            'kind': f"step {step}",
            'case': chain.cases[step - 1] if step else None,
            'm': stage.m,
            'lhs': chain.lhs[step],
            'bound': chain.bounds[step],
            'retired_mass': chain.retired_mass[step - 1] if step else 0.0,
            'a': list(stage.a), 'b': list(stage.b), 'p': list(stage.p),
        })
    return outcome


COMMANDS = {
    'bound': cmd_bound,
    'verify': cmd_verify,
    'check-condition': cmd_check_condition,
    'fuzz': cmd_fuzz,
    'reduce': cmd_reduce,
}


# ---------------------------------
# Parser
# ---------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=('json', 'csv', 'text'), default=None,
                        help="Output format (default: output.format from settings; 'auto' gives text on a "
                             "terminal and json otherwise)")
    common.add_argument('--out', help="Write the report to this path instead of stdout")
    common.add_argument('--panels', type=int, help="Quadrature panels (default from settings or CHEBY_DEFAULT_PANELS)")
    common.add_argument('--grid', type=int, help="Number of s-grid points")
    common.add_argument('--tol', type=float, help="Relative tolerance")

    instance = argparse.ArgumentParser(add_help=False)
    instance.add_argument('--M', default='power:2', help="Outer function: power:<e> or plin:<slopes>@<breakpoints>")
    instance.add_argument('--check-curvature', action='store_true', help="Sample the curvature tag of M first")
    instance.add_argument('--discrete', action='store_true', help="Work on a weighted sequence")
    instance.add_argument('--csv', help="Sequence CSV with columns a,b,p")
    instance.add_argument('--a', help="Inline values a, comma separated")
    instance.add_argument('--b', help="Inline weights b, comma separated")
    instance.add_argument('--p', help="Inline weights p, comma separated")
    instance.add_argument('--triple', help="builtin:f=..,g=..,p=.., a CSV with x,f,g,p, or a YAML/JSON triple")
    instance.add_argument('--points', help="Explicit s points, comma separated (no grid search)")

    parser = argparse.ArgumentParser(prog='chebycheck', description="Checks Chebyshev-type sum and integral inequalities.")
    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('bound', parents=[common, instance], help="Evaluate one bound")
    sub.add_parser('verify', parents=[common, instance], help="Evaluate every applicable inequality")
    sub.add_parser('reduce', parents=[common, instance], help="Print the merge chain of a sequence")

    condition = sub.add_parser('check-condition', parents=[common], help="Check the power-mean condition")
    condition.add_argument('--triple', required=True)
    condition.add_argument('--r', type=float, required=True)
    condition.add_argument('--direction', choices=('c1', 'c2'), default='c1')

    fuzz = sub.add_parser('fuzz', parents=[common], help="Run a seeded fuzz campaign")
    fuzz.add_argument('--config', help="Campaign YAML/JSON file")
    fuzz.add_argument('--seed', type=int)
    fuzz.add_argument('--trials', type=int)
    fuzz.add_argument('--workers', type=int)
    fuzz.add_argument('--targets', help="Comma-separated target list")
    fuzz.add_argument('--rows', help="Write per-trial rows as CSV to this path")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    just_fix_windows_console()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    output = Config().settings.get('system', {}).get('output', {})
    if args.format is None:
        args.format = output.get('format', 'auto')
    if args.format not in ('json', 'csv', 'text'):
        args.format = 'text' if sys.stdout.isatty() else 'json'
    color = output.get('color', True)

    try:
        outcome = COMMANDS[args.command](args)
        emit(outcome, args.format, args.out, color)
    except (ChebycheckError, FileNotFoundError) as e:
        print(f"chebycheck: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if outcome.ok else EXIT_VIOLATION


if __name__ == '__main__':
    sys.exit(main())
