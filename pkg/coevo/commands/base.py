import argparse
import os
import sys

from coevo.exceptions import CoevoError, ConfigError, PreconditionError
from coevo.model import MODES
from coevo.utils.config import ExperimentConf, locate_config
from coevo.utils.files import ensure_dir, write_json, write_table
from coevo.utils.output import OutputWrapper, clean_description, configure_logging

FORMATS = ('csv', 'json')

CONFIG_ERROR_EXIT = 2
RUNTIME_ERROR_EXIT = 1

#
# The class-based command interface follows Django's management command
# infrastructure, found in ``django.core.management.base``, greatly
# simplified and without any of the Django machinery.
#


class BaseCommand:
    """
    A base class for configuring and executing ``coevo`` subcommands.
    
    Every command accepts the common experiment options (``--config``,
    ``--seed``, ``--out``, ``--format``, ``--set``) and output options
    (``--stdout``, ``--stderr``, ``--no-color``, ``-v``). Subclasses add
    their own arguments in :meth:`add_arguments` and do their work in
    :meth:`handle`.
    """
    
    help = ''
    
    def __init__(self, prog, argv=None, default_stdout=None, default_stderr=None):
        
        self.prog = prog
        
        parser = self.create_parser(prog, default_stdout or sys.stdout, default_stderr or sys.stderr)
        
        # An explicit empty list stops parse_args() from falling back to sys.argv
        options = parser.parse_args(argv or [])
        
        kwargs = vars(options)
        
        stdout = kwargs['stdout']
        stderr = kwargs['stderr']
        
        # Streams redirected to the same file share one handle. In-memory
        # streams have no name and are left alone.
        name = getattr(stdout, 'name', None)
        if name and name == getattr(stderr, 'name', None) and stdout is not stderr:
            stderr.close()
            kwargs['stderr'] = stderr = stdout
        
        no_color = kwargs['no_color']
        self.stdout = OutputWrapper(stdout, no_color=no_color)
        self.stderr = OutputWrapper(stderr, no_color=no_color, default_style='error')
        self.styler = self.stdout.styler
        
        self.verbosity = kwargs['verbosity']
        self.kwargs = kwargs
    
    @classmethod
    def get_description(cls, prog, name, styler):
        """
        Return a description of this command, suitable for display in a
        listing of available commands.
        """
        
        summary = clean_description(cls.help).split('\n')[0] or 'No description provided.'
        
        return f'{styler.heading(name)}: {summary}\n    See "{prog} {name} --help" for usage details'
    
    def create_parser(self, prog, default_stdout, default_stderr):
        """
        Create and return the ``ArgumentParser`` which will be used to parse
        the arguments to this command.
        """
        
        parser = argparse.ArgumentParser(
            prog=prog,
            description=self.help or None,
            formatter_class=argparse.RawTextHelpFormatter
        )
        
        # Line buffering keeps redirected output in order
        parser.add_argument(
            '--stdout',
            nargs='?',
            type=argparse.FileType('w', bufsize=1),
            default=default_stdout
        )
        
        parser.add_argument(
            '--stderr',
            nargs='?',
            type=argparse.FileType('w', bufsize=1),
            default=default_stderr
        )
        
        parser.add_argument(
            '--no-color',
            action='store_true',
            help="Don't colourise the command output.",
        )
        
        parser.add_argument(
            '-v', '--verbosity',
            default=1,
            type=int,
            choices=[0, 1, 2, 3],
            help='Verbosity level; 0=minimal output, 1=normal output, 2=verbose output, 3=very verbose output'
        )
        
        parser.add_argument(
            '--config',
            metavar='PATH',
            help=(
                'The experiment file (.toml, .ini or .cfg) with a [coevo] table.\n'
                'Defaults to the nearest coevo.toml/coevo.cfg/coevo.ini at or above\n'
                'the working directory.'
            )
        )
        
        parser.add_argument(
            '--seed',
            type=int,
            help='The random seed, overriding the "seed" key.'
        )
        
        parser.add_argument(
            '--out',
            metavar='DIR',
            default='.',
            help='The directory to write results to. Defaults to the working directory.'
        )
        
        parser.add_argument(
            '--format',
            choices=FORMATS,
            default='csv',
            help='The format of tabular results.'
        )
        
        parser.add_argument(
            '--set',
            action='append',
            default=[],
            metavar='KEY=VALUE',
            help='Override a configuration key. Can be given multiple times.'
        )
        
        self.add_arguments(parser)
        
        return parser
    
    def add_arguments(self, parser):
        """
        Custom commands should override this method to add any custom command
        line arguments they require.
        """
        
        # Do nothing - just a hook for subclasses to add custom arguments
        pass
    
    def load_conf(self):
        """
        Load the experiment configuration and apply command line overrides,
        flags last.
        """
        
        path = self.kwargs['config'] or locate_config()
        conf = ExperimentConf(path)
        conf.apply_assignments(self.kwargs['set'])
        
        if self.kwargs['seed'] is not None:
            conf.set('seed', self.kwargs['seed'])
        
        return conf
    
    def get_mode(self, conf):
        
        mode = conf.get('mode', 'PT')
        if mode not in MODES:
            raise ConfigError(f'Unknown mode "{mode}", expected one of: {", ".join(MODES)}.', path=conf.path)
        
        return mode
    
    def validate(self, conf, check, *args):
        """
        Call ``check(*args)``, reporting a ``PreconditionError`` as a
        ``ConfigError`` against ``conf``. Used to reject configured values a
        command cannot run with before any work starts.
        """
        
        try:
            return check(*args)
        except PreconditionError as e:
            raise ConfigError(str(e), path=conf.path)
    
    def resolve_path(self, conf, key):
        """
        Return the file path stored under ``key``, relative paths being taken
        relative to the configuration file.
        """
        
        path = conf.require(key)
        if conf.path and not os.path.isabs(path):
            path = os.path.join(os.path.dirname(os.path.abspath(conf.path)), path)
        
        return path
    
    @property
    def out_dir(self):
        
        return ensure_dir(self.kwargs['out'])
    
    def write_table(self, frame, stem):
        
        path = write_table(frame, self.out_dir, stem, self.kwargs['format'])
        self.report_file(path)
        
        return path
    
    def write_json(self, data, name):
        
        path = write_json(data, os.path.join(self.out_dir, name))
        self.report_file(path)
        
        return path
    
    def report_file(self, path):
        
        if self.verbosity:
            self.stdout.write(f'Wrote {path}', 'success')
    
    def info(self, message, style=None):
        
        if self.verbosity:
            self.stdout.write(message, style)
    
    def execute(self):
        """
        Execute this command. Intercept any raised ``CoevoError`` and print it
        sensibly to ``stderr``, exiting with status 2 for configuration errors
        and 1 for anything else. Allow all other exceptions to raise as per
        usual.
        """
        
        configure_logging(self.stderr, self.verbosity)
        
        try:
            conf = self.load_conf()
            self.handle(conf)
        except ConfigError as e:
            self.stderr.write(str(e))
            sys.exit(CONFIG_ERROR_EXIT)
        except CoevoError as e:
            self.stderr.write(str(e))
            sys.exit(RUNTIME_ERROR_EXIT)
    
    def handle(self, conf):
        """
        The actual logic of the command. Subclasses must implement this method.
        """
        
        raise NotImplementedError('Subclasses must provide a handle() method.')
