import json
import unittest

from chebycheck.continuous.sampled import Monotonicity
from chebycheck.errors import ConfigError, InvariantError
from chebycheck.utils.parsing_processor import ParsingProcessor
from tests.base_test_case import BaseTestCase


class TestParsingProcessor(BaseTestCase):

    def setUp(self):
        super().setUp()
        self.processor = ParsingProcessor()

    def write(self, name: str, text: str) -> str:
        path = self.temp_root_path / name
        path.write_text(text, encoding='utf-8')
        return str(path)

    # ---------------------------------
    # Sequences
    # ---------------------------------

    def test_sequence_csv(self):
        seq = self.processor.load_sequence_csv(self.write('seq.csv', 'a,b,p\n3,1,1\n2,1,1\n1,1,1\n'))
        self.assertEqual(seq.a, (3.0, 2.0, 1.0))
        self.assertEqual(seq.p, (1.0, 1.0, 1.0))

    def test_sequence_csv_errors(self):
        cases = {
            'missing.csv': 'a,b\n1,1\n',
            'empty.csv': 'a,b,p\n',
            'text.csv': 'a,b,p\n1,x,1\n',
        }
        for name, text in cases.items():
            with self.subTest(name=name), self.assertRaises(ConfigError):
                self.processor.load_sequence_csv(self.write(name, text))
        with self.assertRaises(ConfigError):
            self.processor.load_sequence_csv(str(self.temp_root_path / 'nowhere.csv'))

    def test_sequence_must_be_sorted(self):
        with self.assertRaises(InvariantError):
            self.processor.load_sequence_csv(self.write('up.csv', 'a,b,p\n1,1,1\n2,1,1\n'))

    # ---------------------------------
    # Triples
    # ---------------------------------

    def test_triple_csv(self):
        path = self.write('tri.csv', 'x,f,g,p\n0,1,0,1\n0.5,0.5,0.5,1\n1,0,1,1\n')
        triple = self.processor.load_triple(path)
        self.assertIs(triple.f.monotonicity, Monotonicity.NONINCREASING)
        self.assertIs(triple.g.monotonicity, Monotonicity.NONDECREASING)
        self.assertEqual(triple.label, 'tri')
        self.assertAlmostEqual(float(triple.f(0.25)), 0.75)

    def test_triple_yaml_and_json(self):
        yaml_path = self.write('tri.yaml', 'interval: [0, 2]\nf: {family: lin-dec}\ng: lin-inc\np: const\n')
        self.assertEqual(self.processor.load_triple(yaml_path).right, 2.0)
        json_path = self.write('tri.json', json.dumps({'f': 'exp-dec', 'g': 'const', 'p': 'const'}))
        self.assertEqual(self.processor.load_triple(json_path).f.label, 'exp-dec:1')
        self.assertEqual(self.processor.load_triple('builtin:f=lin-dec').f.label, 'lin-dec')

    def test_mapping_errors(self):
        for name, text in (('list.yaml', '- 1\n- 2\n'), ('bad.json', '{"f": '), ('bad.yaml', 'f: [1, 2\n'),
                           ('blank.yaml', '')):
            with self.subTest(name=name), self.assertRaises(ConfigError):
                self.processor.load_mapping(self.write(name, text))

    # ---------------------------------
    # Reports
    # ---------------------------------

    def test_dump_json_is_sorted(self):
        self.assertEqual(ParsingProcessor.dump_json({'b': 1, 'a': [1.5]}), '{\n  "a": [\n    1.5\n  ],\n  "b": 1\n}\n')

    def test_dump_csv(self):
        rows = [{'lhs': 1.0, 'bound': 2.0, 'extra': 'x'}]
        self.assertEqual(ParsingProcessor.dump_csv(rows, ('lhs', 'bound')), 'lhs,bound\n1.0,2.0\n')
        self.assertEqual(ParsingProcessor.dump_csv(rows).splitlines()[0], 'lhs,bound,extra')

    def test_write_text_creates_folders(self):
        target = self.temp_root_path / 'reports' / 'out.json'
        self.processor.write_text(target, '{}\n')
        self.assertEqual(target.read_text(encoding='utf-8'), '{}\n')


if __name__ == '__main__':
    unittest.main()
