import json
import os
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from trispec import prefs
from trispec.core import DomainError
from trispec.settings import DEFAULTS


class TestPrefs(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        env = {'TRISPEC_HOME': self.tmp.name}
        self.env = mock.patch.dict(os.environ, env)
        self.env.start()
        os.environ.pop('TRISPEC_SEED', None)

    def tearDown(self):
        self.env.stop()
        self.tmp.cleanup()

    def test_config_path_follows_env(self):
        self.assertEqual(prefs.config_path(), Path(self.tmp.name) / 'prefs.json')

    def test_defaults_without_file(self):
        self.assertEqual(prefs.load_prefs(), prefs.DEFAULT_PREFS)

    def test_save_and_load_prefs_roundtrip(self):
        prefs.save_prefs({'seed': '42', 'jobs': 3, 'format': 'csv', 'include_zeros': 'yes',
                          'verbose': 2, 'unknown': 'dropped'})
        loaded = prefs.load_prefs()
        self.assertEqual(loaded['seed'], 42)
        self.assertEqual(loaded['jobs'], 3)
        self.assertEqual(loaded['format'], 'csv')
        self.assertIs(loaded['include_zeros'], True)
        self.assertEqual(loaded['verbose'], 2)
        with open(prefs.config_path(), encoding='utf-8') as fh:
            self.assertNotIn('unknown', json.load(fh))

    def test_corrupt_file_falls_back_to_defaults(self):
        prefs.config_path().parent.mkdir(parents=True, exist_ok=True)
        prefs.config_path().write_text('{not json', encoding='utf-8')
        self.assertEqual(prefs.load_prefs(), prefs.DEFAULT_PREFS)

    def test_set_and_reset(self):
        self.assertEqual(prefs.set_pref('seed', '99')['seed'], 99)
        self.assertEqual(prefs.load_prefs()['seed'], 99)
        prefs.reset_prefs()
        self.assertEqual(prefs.load_prefs()['seed'], DEFAULTS['default_seed'])

    def test_invalid_values(self):
        with self.assertRaises(DomainError):
            prefs.coerce_value('nope', 1)
        with self.assertRaises(DomainError):
            prefs.coerce_value('jobs', 'many')
        with self.assertRaises(DomainError):
            prefs.coerce_value('format', 'xml')
        with self.assertRaises(DomainError):
            prefs.coerce_value('include_zeros', 'maybe')

    def test_seed_resolution_order(self):
        self.assertEqual(prefs.resolve_seed(), DEFAULTS['default_seed'])
        prefs.set_pref('seed', 5)
        self.assertEqual(prefs.resolve_seed(), 5)
        with mock.patch.dict(os.environ, {'TRISPEC_SEED': '17'}):
            self.assertEqual(prefs.resolve_seed(), 17)
            self.assertEqual(prefs.resolve_seed(3), 3)
        with mock.patch.dict(os.environ, {'TRISPEC_SEED': 'abc'}):
            with self.assertRaises(DomainError):
                prefs.resolve_seed()


if __name__ == '__main__':
    unittest.main()
