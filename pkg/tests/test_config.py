import os
import tempfile
import unittest

import numpy as np

from coevo.exceptions import ConfigError
from coevo.utils.config import ExperimentConf, coerce, find_key_line, locate_config

TOML = """\
[coevo]
beta = [0.02, 0.0]
c = [0.0, -1.0]
c_n = -20
gamma = 0.03
k_bar = 10
alpha = 0.6
mode = "PT"
grid_start = 0.01
grid_stop = 0.02
grid_count = 3
exact = true
"""

INI = """\
[coevo]
beta = 0.02, 0.0
c =
    0.0
    -1.0
c_n = -20
gamma = 0.03
k_bar = 10
runs = 5
exact = yes
"""


class CoerceTestCase(unittest.TestCase):
    
    def test_floats(self):
        
        self.assertEqual(coerce('beta', [0.02, 0]), [0.02, 0.0])
        self.assertEqual(coerce('beta', '0.02, 0'), [0.02, 0.0])
        self.assertEqual(coerce('grid', '0.1 0.2  0.3'), [0.1, 0.2, 0.3])
        self.assertEqual(coerce('beta', 0.5), [0.5])
    
    def test_scalars(self):
        
        self.assertEqual(coerce('runs', '12'), 12)
        self.assertEqual(coerce('runs', 12.0), 12)
        self.assertEqual(coerce('gamma', '0.03'), 0.03)
        self.assertIs(coerce('exact', 'off'), False)
        self.assertEqual(coerce('mode', 'EUT'), 'EUT')
    
    def test_invalid(self):
        
        for key, value in (('runs', 1.5), ('runs', 'many'), ('gamma', True), ('exact', 'maybe'), ('mode', 3)):
            with self.subTest(key=key, value=value):
                with self.assertRaises(ValueError):
                    coerce(key, value)


class ExperimentConfTestCase(unittest.TestCase):
    
    def setUp(self):
        
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
    
    def write(self, name, text):
        
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as f:
            f.write(text)
        
        return path
    
    def test_toml(self):
        
        conf = ExperimentConf(self.write('coevo.toml', TOML))
        
        self.assertEqual(conf.get('beta'), [0.02, 0.0])
        self.assertEqual(conf.get('c_n'), -20.0)
        self.assertIs(conf.get('exact'), True)
        np.testing.assert_allclose(conf.grid(), [0.01, 0.015, 0.02])
        
        params = conf.model_params()
        self.assertEqual(params.alpha, 0.6)
        self.assertEqual(params.gamma, 0.03)
    
    def test_ini(self):
        
        conf = ExperimentConf(self.write('coevo.ini', INI))
        
        self.assertEqual(conf.get('beta'), [0.02, 0.0])
        self.assertEqual(conf.get('c'), [0.0, -1.0])
        self.assertEqual(conf.get('runs'), 5)
        self.assertIs(conf.get('exact'), True)
        self.assertEqual(conf.model_params().behavior_count, 2)
    
    def test_missing_table(self):
        
        conf = ExperimentConf(self.write('coevo.toml', '[other]\nbeta = 1\n'))
        
        self.assertEqual(conf.values, {})
    
    def test_overrides(self):
        
        conf = ExperimentConf(self.write('coevo.toml', TOML), overrides={'alpha': '0.9'})
        conf.apply_assignments(['gamma=0.05', ' grid = 0.1, 0.2 '])
        
        self.assertEqual(conf.get('alpha'), 0.9)
        self.assertEqual(conf.get('gamma'), 0.05)
        self.assertEqual(conf.grid(), [0.1, 0.2])
        
        with self.assertRaises(ConfigError):
            conf.apply_assignments(['gamma'])
        
        with self.assertRaises(ConfigError):
            conf.apply_assignments(['colour=blue'])
        
        with self.assertRaises(ConfigError):
            conf.set('runs', 'many')
    
    def test_unknown_key_line(self):
        
        path = self.write('coevo.toml', TOML + 'colour = "blue"\n')
        
        with self.assertRaises(ConfigError) as cm:
            ExperimentConf(path)
        
        self.assertEqual(cm.exception.line, 13)
        self.assertEqual(str(cm.exception), f'{path}:13: Unknown key "colour".')
    
    def test_invalid_value_line(self):
        
        path = self.write('coevo.ini', INI.replace('runs = 5', 'runs = five'))
        
        with self.assertRaises(ConfigError) as cm:
            ExperimentConf(path)
        
        self.assertEqual(cm.exception.line, 9)
    
    def test_syntax_errors(self):
        
        with self.assertRaises(ConfigError) as cm:
            ExperimentConf(self.write('coevo.toml', '[coevo]\nbeta = [0.02,\n'))
        
        self.assertEqual(cm.exception.path, os.path.join(self.tmp.name, 'coevo.toml'))
        
        with self.assertRaises(ConfigError) as cm:
            ExperimentConf(self.write('coevo.cfg', 'beta = 0.02\n'))
        
        self.assertEqual(cm.exception.line, 1)
    
    def test_unreadable(self):
        
        with self.assertRaises(ConfigError):
            ExperimentConf(os.path.join(self.tmp.name, 'absent.toml'))
        
        with self.assertRaises(ConfigError):
            ExperimentConf(self.write('coevo.yaml', 'coevo: {}\n'))
    
    def test_required(self):
        
        conf = ExperimentConf()
        
        with self.assertRaises(ConfigError):
            conf.require('beta')
        
        with self.assertRaises(ConfigError):
            conf.model_params()
        
        with self.assertRaises(ConfigError):
            conf.grid()
    
    def test_invalid_model(self):
        
        conf = ExperimentConf(self.write('coevo.toml', TOML.replace('gamma = 0.03', 'gamma = 0')))
        
        with self.assertRaises(ConfigError):
            conf.model_params()
    
    def test_find_key_line(self):
        
        path = self.write('coevo.toml', TOML)
        
        self.assertEqual(find_key_line(path, 'gamma'), 5)
        self.assertIsNone(find_key_line(path, 'runs'))
    
    def test_locate_config(self):
        
        nested = os.path.join(self.tmp.name, 'experiments', 'one')
        os.makedirs(nested)
        
        self.assertIsNone(locate_config(nested))
        
        path = self.write('coevo.ini', INI)
        self.assertEqual(locate_config(nested), path)
