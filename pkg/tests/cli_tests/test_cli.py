import json
import unittest
from io import StringIO
from typing import List, Tuple
from unittest.mock import patch

from chebycheck.cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, REPORT_COLUMNS, main, rounded
from tests.base_test_case import BaseTestCase

GOLDEN = 'builtin:f=lin-dec,g=lin-inc,p=const'


class TestCli(BaseTestCase):

    def run_cli(self, *argv: str) -> Tuple[int, str, str]:
        with patch('sys.stdout', new_callable=StringIO) as out, patch('sys.stderr', new_callable=StringIO) as err:
            code = main(list(argv))
        return code, out.getvalue(), err.getvalue()

    def sequence_csv(self, rows: List[str]) -> str:
        path = self.temp_root_path / 'seq.csv'
        path.write_text('a,b,p\n' + '\n'.join(rows) + '\n', encoding='utf-8')
        return str(path)

    # ---------------------------------
    # bound
    # ---------------------------------

    def test_bound_discrete_csv(self):
        code, out, _ = self.run_cli('bound', '--discrete', '--csv', self.sequence_csv(['2,1,1', '1,1,1']),
                                    '--M', 'power:2', '--format', 'json')
        self.assertEqual(code, EXIT_OK)
        record = json.loads(out)[0]
        self.assertEqual((record['lhs'], record['bound']), (5.0, 9.0))
        self.assertTrue(record['holds'])

    def test_bound_inline_with_curvature_check(self):
        code, out, _ = self.run_cli('bound', '--discrete', '--a', '2,1', '--b', '1,1', '--p', '1,1',
                                    '--M', 'power:0.5', '--check-curvature', '--format', 'json')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)[0]['theorem'], 'lemma1-lower')

    def test_csv_header(self):
        code, out, _ = self.run_cli('bound', '--discrete', '--a', '2,1', '--b', '1,1', '--p', '1,1', '--format', 'csv')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.splitlines()[0], ','.join(REPORT_COLUMNS))

    def test_explicit_points(self):
        code, out, _ = self.run_cli('bound', '--triple', 'builtin:f=lin-dec,g=const', '--points', '0.5,0.25,1',
                                    '--panels', '4096', '--format', 'json')
        self.assertEqual(code, EXIT_OK)
        record = json.loads(out)[0]
        self.assertEqual(record['extremal_s'], 0.25)
        self.assertAlmostEqual(record['bound'], 1.0, places=10)

    # ---------------------------------
    # verify
    # ---------------------------------

    def test_verify_golden(self):
        code, out, _ = self.run_cli('verify', '--triple', GOLDEN, '--panels', '65536', '--grid', '1024',
                                    '--format', 'json')
        self.assertEqual(code, EXIT_OK)
        records = json.loads(out)
        self.assertEqual([record['theorem'] for record in records], ['theorem1-upper', 'classical', 'estimates'])
        self.assertAlmostEqual(records[0]['lhs'], 1.0 / 12.0, places=9)
        self.assertAlmostEqual(records[0]['bound'], 0.125, places=9)
        self.assertTrue(all(record['holds'] for record in records))

    def test_verify_text_flags_divergence(self):
        code, out, _ = self.run_cli('verify', '--triple', 'builtin:f=lin-dec,g=const', '--grid', '64',
                                    '--panels', '4096', '--format', 'text')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('DIVERGENT', out)
        self.assertIn('HOLDS', out)
        self.assertNotIn('VIOLATED', out)

    def test_verify_discrete_adds_classical_sum(self):
        code, out, _ = self.run_cli('verify', '--discrete', '--a', '3,2,1', '--b', '1,2,3', '--p', '1,1,1',
                                    '--format', 'json')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual([record['theorem'] for record in json.loads(out)], ['lemma1-upper', 'classical-sum'])

    def test_format_from_settings(self):
        self.write_setting('system', 'output:\n  format: csv\n')
        code, out, _ = self.run_cli('bound', '--discrete', '--a', '2,1', '--b', '1,1', '--p', '1,1')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.splitlines()[0], ','.join(REPORT_COLUMNS))

    def test_auto_format_off_a_terminal_is_json(self):
        code, out, _ = self.run_cli('bound', '--discrete', '--a', '2,1', '--b', '1,1', '--p', '1,1')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)[0]['bound'], 9.0)

    def test_twelve_significant_digits(self):
        self.assertEqual(rounded({'x': 1.0 / 3.0, 'flag': True, 'rows': [2.0 / 3.0]}, 12),
                         {'x': 0.333333333333, 'flag': True, 'rows': [0.666666666667]})

    # ---------------------------------
    # check-condition
    # ---------------------------------

    def test_condition_passes_with_bound(self):
        code, out, _ = self.run_cli('check-condition', '--triple', GOLDEN, '--r', '0.5', '--direction', 'c1',
                                    '--grid', '64', '--panels', '4096', '--format', 'json')
        self.assertEqual(code, EXIT_OK)
        records = json.loads(out)
        self.assertEqual([record['theorem'] for record in records], ['corollary1-condition', 'corollary1'])
        self.assertTrue(records[0]['passed'])
        self.assertEqual(len(records[0]['rows']), 64)

    def test_condition_fails(self):
        code, out, _ = self.run_cli('check-condition', '--triple', 'builtin:f=lin-dec,g=lin-dec', '--r', '0.5',
                                    '--grid', '32', '--panels', '1024', '--format', 'json')
        self.assertEqual(code, EXIT_VIOLATION)
        records = json.loads(out)
        self.assertEqual(len(records), 1)
        self.assertFalse(records[0]['passed'])

    def test_condition_r_out_of_range(self):
        code, _, err = self.run_cli('check-condition', '--triple', GOLDEN, '--r', '0.5', '--direction', 'c2')
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn('r >= 1', err)

    # ---------------------------------
    # reduce
    # ---------------------------------

    def test_reduce_chain(self):
        code, out, _ = self.run_cli('reduce', '--a', '3,2,1', '--b', '1,1,1', '--p', '1,1,1', '--format', 'json')
        self.assertEqual(code, EXIT_OK)
        records = json.loads(out)
        self.assertEqual([record['lhs'] for record in records], [14.0, 18.0, 36.0])
        self.assertEqual([record['case'] for record in records], [None, 2, 2])
        self.assertEqual(records[-1]['m'], 1)

    # ---------------------------------
    # fuzz
    # ---------------------------------

    def test_fuzz_is_reproducible(self):
        first, second = self.temp_root_path / 'first.json', self.temp_root_path / 'second.json'
        for path in (first, second):
            code, _, _ = self.run_cli('fuzz', '--trials', '3', '--targets', 'lemma1-upper,lemma1-lower,classical',
                                      '--panels', '512', '--grid', '16', '--out', str(path), '--format', 'json')
            self.assertEqual(code, EXIT_OK)
        self.assertEqual(first.read_bytes(), second.read_bytes())
        document = json.loads(first.read_text(encoding='utf-8'))
        self.assertTrue(document['all_held'])
        self.assertEqual(document['targets']['classical']['checked'], 3)

    def test_fuzz_default_targets(self):
        out_path = self.temp_root_path / 'default.json'
        code, _, err = self.run_cli('fuzz', '--trials', '20', '--out', str(out_path), '--format', 'json')
        self.assertEqual(code, EXIT_OK, err)
        document = json.loads(out_path.read_text(encoding='utf-8'))
        self.assertTrue(document['all_held'])
        self.assertIn('remark', document['targets'])
        self.assertEqual(len(document['targets']), 9)

    def test_fuzz_rows(self):
        rows = self.temp_root_path / 'rows.csv'
        code, _, _ = self.run_cli('fuzz', '--trials', '2', '--targets', 'lemma1-upper', '--rows', str(rows),
                                  '--format', 'json')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(rows.read_text(encoding='utf-8').splitlines()), 3)

    def test_fuzz_probe_does_not_fail_the_run(self):
        code, _, _ = self.run_cli('fuzz', '--trials', '100', '--targets', 'lemma1-unsorted', '--format', 'json')
        self.assertEqual(code, EXIT_OK)

    def test_fuzz_probe_has_no_verdict(self):
        code, out, _ = self.run_cli('fuzz', '--trials', '100', '--targets', 'lemma1-upper,lemma1-unsorted',
                                    '--format', 'text')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('probe: yes', out)
        self.assertEqual(out.count('HOLDS'), 1)
        self.assertNotIn('VIOLATED', out)

    def test_fuzz_bad_config(self):
        config = self.temp_root_path / 'campaign.yaml'
        config.write_text('trials: 0\n', encoding='utf-8')
        code, _, err = self.run_cli('fuzz', '--config', str(config))
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn('trials', err)

    # ---------------------------------
    # usage errors
    # ---------------------------------

    def test_unknown_flag(self):
        code, _, _ = self.run_cli('bound', '--bogus')
        self.assertEqual(code, EXIT_USAGE)

    def test_missing_sequence(self):
        code, _, err = self.run_cli('bound', '--discrete', '--a', '1,2')
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn('--csv', err)

    def test_unsorted_sequence(self):
        code, _, _ = self.run_cli('bound', '--discrete', '--a', '1,2', '--b', '1,1', '--p', '1,1')
        self.assertEqual(code, EXIT_USAGE)

    def test_missing_file(self):
        code, _, _ = self.run_cli('bound', '--discrete', '--csv', str(self.temp_root_path / 'missing.csv'))
        self.assertEqual(code, EXIT_USAGE)

    def test_bad_family(self):
        code, _, _ = self.run_cli('bound', '--triple', GOLDEN, '--M', 'cubic:3')
        self.assertEqual(code, EXIT_USAGE)

    def test_help(self):
        code, out, _ = self.run_cli('--help')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('check-condition', out)


if __name__ == '__main__':
    unittest.main()
