import os

import numpy as np

from coevo.agents import DEFAULT_INITIAL_INFECTED, REGULAR, TOPOLOGIES, build_regular, check_network, run_ensemble
from coevo.exceptions import ConfigError, DomainError
from coevo.meanfield import integrate
from coevo.model import SystemState

from .base import BaseCommand

DEFAULT_HORIZON = 1000.0
DEFAULT_STRIDE = 100
DEFAULT_NODES = 500
DEFAULT_RUNS = 50


def initial_shares(conf, behavior_count):
    """
    Return the configured initial behaviour shares, or equal shares.
    """
    
    if 'x0' not in conf:
        return np.full(behavior_count, 1 / behavior_count)
    
    shares = np.array(conf.get('x0'), dtype=float)
    if shares.size != behavior_count:
        raise ConfigError(
            f'"x0" has {shares.size} entries but the model has {behavior_count} behaviours.', path=conf.path
        )
    
    return shares


class SimulateMeanfieldCommand(BaseCommand):
    
    help = 'Integrate the mean-field co-evolution equations and write the trajectory.'
    
    def handle(self, conf):
        
        params = conf.model_params()
        mode = self.get_mode(conf)
        
        try:
            state = SystemState(conf.get('i0', DEFAULT_INITIAL_INFECTED), initial_shares(conf, params.behavior_count))
        except DomainError as e:
            raise ConfigError(f'Invalid initial state: {e}', path=conf.path)
        
        trajectory = integrate(
            state, params, mode,
            dt=conf.get('dt', 0.01),
            horizon=conf.get('horizon', DEFAULT_HORIZON),
            stride=conf.get('stride', DEFAULT_STRIDE)
        )
        
        final = trajectory.final
        shares = ', '.join(f'{x:.6f}' for x in final.shares)
        self.info(f'{mode} at t = {trajectory.times[-1]:g}: i = {final.infected:.6f}, x = ({shares})')
        
        self.write_table(trajectory.to_frame(), 'meanfield')


class SimulateAgentsCommand(BaseCommand):
    
    help = 'Run an ensemble of agent-based simulations on contact and information networks.'
    
    def add_arguments(self, parser):
        
        parser.add_argument(
            '--dump-networks',
            action='store_true',
            help='Also write the contact and information networks as edge lists (regular topology only).'
        )
    
    def handle(self, conf):
        
        params = conf.model_params()
        mode = self.get_mode(conf)
        
        topology = conf.get('topology', REGULAR)
        if topology not in TOPOLOGIES:
            raise ConfigError(f'Unknown topology "{topology}", expected one of: {", ".join(TOPOLOGIES)}.',
                              path=conf.path)
        
        nodes = conf.get('nodes', DEFAULT_NODES)
        contact_degree = conf.get('contact_degree', int(round(params.k_bar)))
        info_degree = conf.get('info_degree', int(round(params.epidemic.info_degree)))
        seed = conf.get('seed', 0)
        
        for degree in (contact_degree, info_degree):
            self.validate(conf, check_network, nodes, degree, topology)
        
        result = run_ensemble(
            params,
            nodes=nodes,
            contact_degree=contact_degree,
            info_degree=info_degree,
            horizon=conf.get('horizon', DEFAULT_HORIZON),
            runs=conf.get('runs', DEFAULT_RUNS),
            seed=seed,
            mode=mode,
            topology=topology,
            initial_shares=initial_shares(conf, params.behavior_count),
            initial_infected=conf.get('initial_infected', DEFAULT_INITIAL_INFECTED),
            workers=conf.get('workers')
        )
        
        terminals = result.terminals()
        self.info(
            f'{len(result.runs)} runs (seed {seed}): final i = {terminals["i"].mean():.4f} '
            f'+/- {terminals["i"].std(ddof=0):.4f}'
        )
        
        self.write_table(result.to_frame(), 'agents')
        self.write_table(terminals, 'agents_terminal')
        
        if self.kwargs['dump_networks']:
            if topology != REGULAR:
                self.stdout.write('Random networks differ per run and are not written.', 'warning')
                return
            
            for name, degree in (('contact', contact_degree), ('info', info_degree)):
                path = os.path.join(self.out_dir, f'{name}.edges')
                build_regular(nodes, degree).write_edge_list(path)
                self.report_file(path)
