import configparser
import os
import re

try:
    import tomllib
except ImportError:
    tomllib = None

import numpy as np

from coevo.exceptions import ConfigError, DomainError, PreconditionError
from coevo.model import make_params

from .files import find_file

MAX_CONFIG_FILE_SEARCH_DEPTH = 8
CONFIG_FILE_NAMES = ('coevo.toml', 'coevo.cfg', 'coevo.ini')
CONFIG_TABLE = 'coevo'

FLOATS = 'floats'

# Every key an experiment file may set, with the type it is coerced to
SCHEMA = {
    # model
    'beta': FLOATS,
    'c': FLOATS,
    'c_n': float,
    'gamma': float,
    'k_bar': float,
    'd_bar': float,
    'alpha': float,
    'sigma': float,
    'lambda': float,
    'm': float,
    'omega': float,
    'u_max': float,
    # runs
    'mode': str,
    'dt': float,
    'horizon': float,
    'stride': int,
    'i0': float,
    'x0': FLOATS,
    'nodes': int,
    'contact_degree': int,
    'info_degree': int,
    'topology': str,
    'runs': int,
    'workers': int,
    'initial_infected': float,
    'axis': str,
    'grid': FLOATS,
    'grid_start': float,
    'grid_stop': float,
    'grid_count': int,
    'alpha_low': float,
    'alpha_high': float,
    'i_max': float,
    'x_min': float,
    'penalty_weight': float,
    'barrier_scale': float,
    'momentum': float,
    'learning_rate': float,
    'max_iters': int,
    'starts': int,
    'responses': str,
    'choices': str,
    'stake': float,
    'bins': int,
    'exact': bool,
    'seed': int,
}

TRUE_STRINGS = ('true', 'yes', 'on', '1')
FALSE_STRINGS = ('false', 'no', 'off', '0')

TOML_LINE_RE = re.compile(r'line (\d+)')


def get_toml_config(file_path, table):
    
    with open(file_path, 'rb') as f:
        config = tomllib.load(f)
    
    for t in table.split('.'):  # support nested tables
        try:
            config = config[t]
        except KeyError:
            return {}
    
    return config


def get_ini_config(file_path, section):
    
    config = configparser.ConfigParser()
    config.read(file_path)
    
    try:
        config = config[section]
    except KeyError:
        return {}
    
    config_dict = dict(config)
    
    # Auto-convert boolean and list values
    for k, v in config_dict.items():
        if v.lower() in ('true', 'false'):
            config_dict[k] = config.getboolean(k)
        elif '\n' in v:
            v = [i.strip() for i in v.splitlines()]
            config_dict[k] = list(filter(None, v))
    
    return config_dict


def _coerce_scalar(value, kind):
    
    if kind is str:
        if not isinstance(value, str):
            raise ValueError('expected a string')
        
        return value
    
    if kind is bool:
        if isinstance(value, bool):
            return value
        
        text = str(value).strip().lower()
        if text in TRUE_STRINGS:
            return True
        elif text in FALSE_STRINGS:
            return False
        
        raise ValueError('expected a boolean')
    
    if isinstance(value, bool):
        raise ValueError(f'expected {kind.__name__}, got a boolean')
    
    if kind is int:
        if isinstance(value, float):
            if not value.is_integer():
                raise ValueError('expected an integer')
            
            return int(value)
        
        return int(str(value).strip())
    
    return float(str(value).strip()) if isinstance(value, str) else float(value)


def coerce(key, value):
    """
    Convert ``value`` to the type declared for ``key`` in ``SCHEMA``. List
    values may be given as lists or as comma- or whitespace-separated
    strings. Raise ``ValueError`` if the value does not fit.
    """
    
    kind = SCHEMA[key]
    
    if kind == FLOATS:
        if isinstance(value, str):
            value = [v for v in re.split(r'[\s,]+', value.strip()) if v]
        elif not isinstance(value, (list, tuple)):
            value = [value]
        
        return [_coerce_scalar(v, float) for v in value]
    
    return _coerce_scalar(value, kind)


def find_key_line(file_path, key):
    """
    Return the 1-based number of the first line in ``file_path`` that
    assigns ``key``, or ``None``.
    """
    
    pattern = re.compile(rf'^\s*{re.escape(key)}\s*[=:]')
    
    try:
        with open(file_path) as f:
            for number, line in enumerate(f, start=1):
                if pattern.match(line):
                    return number
    except OSError:
        pass
    
    return None


def locate_config(from_path=None):
    """
    Search upwards from ``from_path`` (default: the working directory) for a
    default experiment file. Return its path, or ``None`` if there is none.
    """
    
    try:
        return find_file(CONFIG_FILE_NAMES, from_path or os.getcwd(), MAX_CONFIG_FILE_SEARCH_DEPTH)
    except FileNotFoundError:
        return None


class ExperimentConf:
    """
    The settings of one experiment: the ``[coevo]`` table of a ``.toml``
    file or section of a ``.ini``/``.cfg`` file, with command line overrides
    applied on top.
    
    Every value is coerced to the type declared in ``SCHEMA`` on load.
    Unknown keys, values of the wrong type and unreadable files raise
    ``ConfigError`` naming the file and line.
    """
    
    def __init__(self, path=None, overrides=None):
        
        self.path = path
        self.values = {}
        
        if path:
            self._load(path)
        
        for key, value in (overrides or {}).items():
            self.set(key, value)
    
    def _read(self, path):
        
        if not os.path.isfile(path):
            raise ConfigError('File not found.', path=path)
        
        ext = os.path.splitext(path)[-1]
        
        if ext == '.toml':
            if not tomllib:
                raise ConfigError('Reading TOML files requires Python 3.11 or later.', path=path)
            
            try:
                return get_toml_config(path, CONFIG_TABLE)
            except tomllib.TOMLDecodeError as e:
                match = TOML_LINE_RE.search(str(e))
                raise ConfigError(str(e), path=path, line=int(match.group(1)) if match else None)
        elif ext in ('.ini', '.cfg'):
            try:
                return get_ini_config(path, CONFIG_TABLE)
            except configparser.MissingSectionHeaderError as e:
                raise ConfigError('Missing section header.', path=path, line=e.lineno)
            except configparser.ParsingError as e:
                line = e.errors[0][0] if e.errors else None
                raise ConfigError('Unable to parse file.', path=path, line=line)
            except configparser.Error as e:
                raise ConfigError(e.message, path=path, line=getattr(e, 'lineno', None))
        
        raise ConfigError(f'Unsupported configuration format "{ext}"; use .toml, .ini or .cfg.', path=path)
    
    def _load(self, path):
        
        for key, value in self._read(path).items():
            line = find_key_line(path, key)
            
            if key not in SCHEMA:
                raise ConfigError(f'Unknown key "{key}".', path=path, line=line)
            
            try:
                self.values[key] = coerce(key, value)
            except (TypeError, ValueError) as e:
                raise ConfigError(f'Invalid value for "{key}": {e}.', path=path, line=line)
    
    def set(self, key, value):
        """
        Override ``key`` with ``value``, coerced as on load.
        """
        
        if key not in SCHEMA:
            raise ConfigError(f'Unknown key "{key}".')
        
        try:
            self.values[key] = coerce(key, value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f'Invalid value for "{key}": {e}.')
    
    def apply_assignments(self, assignments):
        """
        Apply ``KEY=VALUE`` strings, as given to ``--set``.
        """
        
        for assignment in assignments or ():
            key, sep, value = assignment.partition('=')
            if not sep or not key.strip():
                raise ConfigError(f'Expected KEY=VALUE, got "{assignment}".')
            
            self.set(key.strip(), value.strip())
    
    def __contains__(self, key):
        
        return key in self.values
    
    def get(self, key, default=None):
        
        return self.values.get(key, default)
    
    def require(self, key):
        
        try:
            return self.values[key]
        except KeyError:
            raise ConfigError(f'Missing required key "{key}".', path=self.path)
    
    def model_params(self):
        """
        Build the :class:`~coevo.model.ModelParams` described by the model
        keys. Invalid parameter values are configuration errors.
        """
        
        kwargs = {'d_bar': self.get('d_bar'), 'u_max': self.get('u_max')}
        for key, name in (('alpha', 'alpha'), ('sigma', 'sigma'), ('lambda', 'lam'), ('m', 'm'), ('omega', 'omega')):
            if key in self:
                kwargs[name] = self.get(key)
        
        try:
            return make_params(
                beta=self.require('beta'),
                c=self.require('c'),
                c_n=self.require('c_n'),
                gamma=self.require('gamma'),
                k_bar=self.require('k_bar'),
                **kwargs
            )
        except (PreconditionError, DomainError) as e:
            raise ConfigError(str(e), path=self.path)
    
    def grid(self):
        """
        Return the sweep grid: ``grid`` if given, otherwise ``grid_count``
        evenly spaced values from ``grid_start`` to ``grid_stop``.
        """
        
        if 'grid' in self:
            return list(self.get('grid'))
        
        start = self.require('grid_start')
        stop = self.require('grid_stop')
        count = self.require('grid_count')
        
        return list(np.linspace(start, stop, count))
