import argparse
import sys

from coevo import __version__ as version
from coevo.commands import COMMANDS
from coevo.utils.output import OutputWrapper

USAGE_ERROR_EXIT = 2


def parse_args(prog, argv=None):
    
    parser = argparse.ArgumentParser(
        prog=prog,
        formatter_class=argparse.RawTextHelpFormatter,
        description='Simulate, analyse and steer the co-evolution of an epidemic and human behaviour.',
        epilog=(
            'Any additional arguments are passed through to the executed command.'
            '\n\n'
            'Run without arguments to list the available commands.'
        )
    )
    
    parser.add_argument(
        'command',
        nargs='?',
        metavar='command',
        help='The name of the command'
    )
    
    parser.add_argument(
        '--version',
        action='version',
        version=f'coevo {version}',
        help='Display the version number and exit'
    )
    
    parser.add_argument('extra', nargs=argparse.REMAINDER, help=argparse.SUPPRESS)
    
    return parser.parse_args(argv)


def main(argv=None):
    
    prog = 'coevo'
    arguments = parse_args(prog, argv)
    stdout = OutputWrapper(sys.stdout)
    stderr = OutputWrapper(sys.stderr, default_style='error')
    
    name = arguments.command
    if not name:
        stdout.write('Available commands:', 'label')
        for command_name, command_class in COMMANDS.items():
            stdout.write(command_class.get_description(prog, command_name, stdout.styler))
        
        return
    
    try:
        command_class = COMMANDS[name]
    except KeyError:
        stderr.write(f'Unknown command "{name}".')
        sys.exit(USAGE_ERROR_EXIT)
    
    command = command_class(f'{prog} {name}', argv=arguments.extra)
    command.execute()


if __name__ == '__main__':
    main()
