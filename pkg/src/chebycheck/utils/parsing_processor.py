import csv
import json
from io import StringIO
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Type, Union

import numpy as np
import yaml

from chebycheck.continuous.families import BUILTIN_PREFIX, parse_builtin_triple, triple_from_config
from chebycheck.continuous.sampled import Monotonicity, SampledFunction, WeightedTriple
from chebycheck.discrete import WeightedSequence
from chebycheck.errors import ConfigError
from chebycheck.utils.logger import Logger

SEQUENCE_COLUMNS = ('a', 'b', 'p')
TRIPLE_COLUMNS = ('x', 'f', 'g', 'p')


class ParsingProcessor:
    """
    Reads instance files (sequence CSV, triple CSV, YAML/JSON configs) and writes reports as JSON or CSV.
    Parse failures raise ConfigError after logging.
    """

    def __init__(self):
        self.logger = Logger(name=self.__class__.__name__)

    # ------------------------------------------------------------------------
    # Generic parsing
    # ------------------------------------------------------------------------

    def read_text(self, path: Union[str, Path]) -> str:
        try:
            return Path(path).read_text(encoding='utf-8')
        except OSError as e:
            self.logger.raise_error(ConfigError, f"Cannot read {path}: {e}")

    def parse_content(self, content_string: str, parser_func: Callable[[str], Any], expected_language: str,
                      exception_class: Type[Exception]) -> Any:
        """
        Parses content with parser_func, turning exception_class failures into ConfigError.

        Parameters:
            content_string (str): The text to parse.
            parser_func (Callable[[str], Any]): The parsing function (e.g., json.loads, yaml.safe_load).
            expected_language (str): Name of the format, used in error messages.
            exception_class (Type[Exception]): The exception class parser_func raises on bad input.
        """
        try:
            parsed = parser_func(content_string)
        except exception_class as e:
            self.logger.raise_error(ConfigError, f"Error parsing {expected_language.upper()} content: {e}")
        if parsed is None:
            self.logger.raise_error(ConfigError, f"Empty {expected_language.upper()} content.")
        return parsed

    def parse_yaml_content(self, yaml_string: str) -> Any:
        return self.parse_content(yaml_string, yaml.safe_load, 'yaml', yaml.YAMLError)

    def parse_json_content(self, json_string: str) -> Any:
        return self.parse_content(json_string, json.loads, 'json', json.JSONDecodeError)

    def parse_csv_content(self, csv_string: str) -> List[Dict[str, str]]:
        def parser_func(s):
            return [row for row in csv.DictReader(StringIO(s))]

        return self.parse_content(csv_string, parser_func, 'csv', csv.Error)

    def load_mapping(self, path: Union[str, Path]) -> Dict[str, Any]:
        """A YAML or JSON file (by extension) parsed into a dictionary."""
        text = self.read_text(path)
        data = self.parse_json_content(text) if str(path).endswith('.json') else self.parse_yaml_content(text)
        if not isinstance(data, dict):
            self.logger.raise_error(ConfigError, f"{path} must hold a mapping at the top level.")
        return data

    # ------------------------------------------------------------------------
    # Instances
    # ------------------------------------------------------------------------

    def _columns(self, rows: List[Dict[str, str]], columns: Sequence[str], source: str) -> Dict[str, np.ndarray]:
        if not rows:
            self.logger.raise_error(ConfigError, f"{source} holds no data rows.")
        missing = [name for name in columns if name not in rows[0]]
        if missing:
            self.logger.raise_error(ConfigError, f"{source} is missing the column(s) {', '.join(missing)}.")
        try:
            return {name: np.asarray([float(row[name]) for row in rows]) for name in columns}
        except (TypeError, ValueError) as e:
            self.logger.raise_error(ConfigError, f"{source} holds a non-numeric entry: {e}")

    def load_sequence_csv(self, path: Union[str, Path]) -> WeightedSequence:
        """A WeightedSequence from a CSV file with columns a, b, p (one row per element)."""
        data = self._columns(self.parse_csv_content(self.read_text(path)), SEQUENCE_COLUMNS, str(path))
        return WeightedSequence(tuple(data['a']), tuple(data['b']), tuple(data['p']))

    @staticmethod
    def _infer_tag(values: np.ndarray) -> Monotonicity:
        steps = np.diff(values)
        if np.all(steps <= 0.0):
            return Monotonicity.NONINCREASING
        if np.all(steps >= 0.0):
            return Monotonicity.NONDECREASING
        return Monotonicity.NONE

    def load_triple_csv(self, path: Union[str, Path]) -> WeightedTriple:
        """
        A WeightedTriple interpolated linearly from CSV columns x, f, g, p; the
        monotonicity tags of f and g are read off the samples.
        """
        data = self._columns(self.parse_csv_content(self.read_text(path)), TRIPLE_COLUMNS, str(path))
        x = data['x']
        f, g = (SampledFunction.from_samples(x, data[role], self._infer_tag(data[role]), True, label=role)
                for role in ('f', 'g'))
        p = SampledFunction.from_samples(x, data['p'], Monotonicity.NONE, True, label='p')
        return WeightedTriple(f, g, p, label=Path(path).stem)

    def load_triple(self, source: str) -> WeightedTriple:
        """A builtin descriptor ('builtin:f=...'), a CSV file, or a YAML/JSON triple config."""
        if source.startswith(BUILTIN_PREFIX):
            return parse_builtin_triple(source)
        if source.endswith('.csv'):
            return self.load_triple_csv(source)
        return triple_from_config(self.load_mapping(source))

    # ------------------------------------------------------------------------
    # Reports
    # ------------------------------------------------------------------------

    @staticmethod
    def dump_json(record: Any) -> str:
        """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
        return json.dumps(record, sort_keys=True, indent=2) + "\n"

    @staticmethod
    def dump_csv(rows: Iterable[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
        rows = list(rows)
        if columns is None:
            columns = list(rows[0].keys()) if rows else []
        buffer = StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(columns), extrasaction='ignore', lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue()

    def write_text(self, path: Union[str, Path], text: str) -> None:
        try:
            target = Path(path)
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding='utf-8')
        except OSError as e:
            self.logger.raise_error(ConfigError, f"Cannot write {path}: {e}")
