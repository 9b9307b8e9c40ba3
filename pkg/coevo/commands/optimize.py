import pandas as pd

from coevo.exceptions import ConfigError, PreconditionError
from coevo.inducement import FEASIBLE, ConstraintTarget, OptimizerConfig, optimize
from coevo.steady import check_pair

from .base import BaseCommand

# Configuration keys passed straight through to OptimizerConfig
OPTIMIZER_KEYS = ('penalty_weight', 'barrier_scale', 'momentum', 'learning_rate', 'max_iters', 'starts', 'workers')


class OptimizeCommand(BaseCommand):
    
    help = (
        'Find the behaviour guidance (changes to rationality and perceived payoffs)\n'
        'that moves the prospect-theory steady state to i <= i_max, x_1 >= x_min.'
    )
    
    def get_optimizer_config(self, conf):
        
        kwargs = {key: conf.get(key) for key in OPTIMIZER_KEYS if key in conf}
        
        try:
            return OptimizerConfig(**kwargs)
        except PreconditionError as e:
            raise ConfigError(str(e), path=conf.path)
    
    def handle(self, conf):
        
        params = conf.model_params()
        self.validate(conf, check_pair, params)
        
        target = self.validate(conf, ConstraintTarget, conf.require('i_max'), conf.require('x_min'))
        
        result = optimize(target, params, config=self.get_optimizer_config(conf))
        satisfied = result.satisfies(target)
        
        self.info(' -> '.join(result.case_trace), 'case')
        self.info(
            f'i* = {result.after.i_star:.6f}, x1* = {result.after.x1_star:.6f} '
            f'({result.variant} objective)',
            'success' if satisfied else 'warning'
        )
        
        report = result.as_dict()
        report['target'] = {'i_max': target.i_max, 'x_min': target.x_min}
        report['feasible'] = result.variant == FEASIBLE
        report['satisfied'] = satisfied
        
        self.write_json(report, 'optimize.json')
        
        losses = pd.DataFrame({'iter': range(len(result.history)), 'loss': result.history})
        self.write_table(losses, 'loss')
