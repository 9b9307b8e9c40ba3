import logging
import os
import sys
from inspect import cleandoc
from io import TextIOBase

#
# Styling is adapted from Django's ``django.core.management.color`` and
# ``django.utils.termcolors``.
#

COLOR_NAMES = ('black', 'red', 'green', 'yellow', 'blue', 'magenta', 'cyan', 'white')
FOREGROUND = {COLOR_NAMES[x]: f'3{x}' for x in range(8)}
BACKGROUND = {COLOR_NAMES[x]: f'4{x}' for x in range(8)}

OPTIONS = {'bold': '1', 'underscore': '4', 'blink': '5', 'reverse': '7', 'conceal': '8'}
RESET = '\x1b[0m'

LOG_LEVEL_ENV_VAR = 'COEVO_LOG_LEVEL'
LOG_FORMAT = '%(name)s: %(message)s'

# Map logging levels to Styler palette roles
LEVEL_STYLES = {
    logging.CRITICAL: 'error',
    logging.ERROR: 'error',
    logging.WARNING: 'warning',
    logging.INFO: 'normal',
    logging.DEBUG: 'debug',
}

# Map command verbosity to the level of the package logger
VERBOSITY_LEVELS = {
    0: logging.WARNING,
    1: logging.WARNING,
    2: logging.INFO,
    3: logging.DEBUG,
}


def clean_description(description, collapse_paragraphs=True):
    """
    Tidy a docstring-style ``description`` for display in help output.
    Single newlines are joined into spaces. Double newlines are kept as
    paragraph breaks, collapsed to single newlines if ``collapse_paragraphs``
    is ``True``.
    """
    
    if not description:
        return ''
    
    description = cleandoc(description)
    description = description.replace('\n\n', '\\N').replace('\n', ' ')
    
    if collapse_paragraphs:
        return description.replace('\\N', '\n')
    
    return description.replace('\\N', '\n\n')


class Styler:
    """
    Generates text wrapped in ANSI graphics codes for a palette of named
    roles. Each entry in :attr:`~Styler.PALETTE` becomes a method of the same
    name, e.g. ``styler.success('done')``. With ``no_color=True`` every method
    returns the text unmodified.
    
    The ``case`` role highlights steady-state case labels in command summaries.
    """
    
    PALETTE = {
        'normal': {},
        'success': {'fg': 'green', 'options': ('bold', )},
        'error': {'fg': 'red', 'options': ('bold', )},
        'warning': {'fg': 'yellow', 'options': ('bold', )},
        'info': {'options': ('bold', )},
        'debug': {'fg': 'magenta', 'options': ('bold', )},
        'heading': {'fg': 'cyan', 'options': ('bold', )},
        'label': {'options': ('bold', )},
        'case': {'fg': 'blue', 'options': ('bold', )},
    }
    
    def __init__(self, no_color=False):
        
        self.no_color = no_color
        
        for role, fmt in self.PALETTE.items():
            setattr(self, role, self.preconfigure(**fmt))
    
    def preconfigure(self, **kwargs):
        """
        Return a function that applies the given style attributes to any text
        passed to it.
        """
        
        return lambda text: self.apply(text, **kwargs)
    
    def apply(self, text, fg=None, bg=None, options=(), reset=True):
        """
        Return ``text`` enclosed in ANSI graphics codes.
        
        :param text: The text to style.
        :param fg: The foreground colour, one of ``COLOR_NAMES``.
        :param bg: The background colour, one of ``COLOR_NAMES``.
        :param options: Display options, keys of ``OPTIONS``.
        :param reset: ``True`` to terminate ``text`` with the RESET code.
        :return: The styled text.
        """
        
        if self.no_color:
            return text
        
        codes = []
        if fg:
            codes.append(FOREGROUND[fg])
        
        if bg:
            codes.append(BACKGROUND[bg])
        
        codes.extend(OPTIONS[o] for o in options)
        
        if reset:
            text = f'{text}{RESET}'
        
        if codes:
            text = f'\x1b[{";".join(codes)}m{text}'
        
        return text
    
    def reset(self):
        
        return '' if self.no_color else RESET


class OutputWrapper(TextIOBase):
    """
    Wrapper around ``stdout``/``stderr`` that styles each written message
    with a palette role.
    """
    
    def __init__(self, out, default_style=None, no_color=False):
        
        self._out = out
        
        no_color = no_color or not self.supports_color()
        self.styler = Styler(no_color)
        self.default_style = default_style
    
    def __getattr__(self, name):
        
        return getattr(self._out, name)
    
    def supports_color(self):
        
        plat = sys.platform
        supported_platform = plat != 'Pocket PC' and (plat != 'win32' or 'ANSICON' in os.environ)
        is_a_tty = hasattr(self._out, 'isatty') and self._out.isatty()
        
        return supported_platform and is_a_tty
    
    def write(self, msg, style=None, ending='\n'):
        
        if ending:
            msg += ending
        
        style = style or self.default_style
        if style:
            msg = getattr(self.styler, style)(msg)
        
        self._out.write(msg)


class StyledLogHandler(logging.Handler):
    """
    A ``logging`` handler that writes formatted records through an
    :class:`OutputWrapper`, styling each according to its level.
    """
    
    def __init__(self, output, level=logging.NOTSET):
        
        super().__init__(level)
        self.output = output
        self.setFormatter(logging.Formatter(LOG_FORMAT))
    
    def emit(self, record):
        
        try:
            msg = self.format(record)
            style = LEVEL_STYLES.get(record.levelno, 'normal')
            self.output.write(msg, style=style)
        except Exception:
            self.handleError(record)


def get_log_level(verbosity):
    """
    Return the level for the ``coevo`` logger. The ``COEVO_LOG_LEVEL``
    environment variable, if set to a valid level name, takes precedence over
    ``verbosity``.
    
    :param verbosity: The command verbosity, 0-3.
    :return: A ``logging`` level number.
    """
    
    env_level = os.environ.get(LOG_LEVEL_ENV_VAR, '').strip().upper()
    if env_level:
        level = logging.getLevelName(env_level)
        if isinstance(level, int):
            return level
    
    return VERBOSITY_LEVELS.get(verbosity, logging.DEBUG)


def configure_logging(output, verbosity=1):
    """
    Route the ``coevo`` package logger to ``output``, replacing any handler
    installed by a previous call.
    
    :param output: An :class:`OutputWrapper`, usually around ``stderr``.
    :param verbosity: The command verbosity, 0-3.
    :return: The configured logger.
    """
    
    logger = logging.getLogger('coevo')
    for handler in list(logger.handlers):
        if isinstance(handler, StyledLogHandler):
            logger.removeHandler(handler)
    
    logger.addHandler(StyledLogHandler(output))
    logger.setLevel(get_log_level(verbosity))
    logger.propagate = False
    
    return logger
