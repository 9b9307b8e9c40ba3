from coevo.exceptions import CommandError  # noqa - for convenience

from .base import BaseCommand  # noqa
from .estimate import CorrelateCommand, EstimateAlphaCommand
from .optimize import OptimizeCommand
from .simulate import SimulateAgentsCommand, SimulateMeanfieldCommand
from .steady import CompareRationalityCommand, SteadyStateCommand, SweepCommand

COMMANDS = {
    'simulate-meanfield': SimulateMeanfieldCommand,
    'simulate-agents': SimulateAgentsCommand,
    'steady-state': SteadyStateCommand,
    'sweep': SweepCommand,
    'compare-rationality': CompareRationalityCommand,
    'optimize': OptimizeCommand,
    'estimate-alpha': EstimateAlphaCommand,
    'correlate': CorrelateCommand,
}
