from collections import Counter

from coevo.exceptions import DomainError
from coevo.meanfield import is_two_behavior
from coevo.steady import (
    SEARCH_DT,
    SEARCH_HORIZON,
    check_comparison,
    check_sweep,
    classify,
    compare_rationality,
    max_spread,
    numeric_steady_state,
    radical_regime_test,
    sweep,
    sweep_frame,
)

from .base import BaseCommand


def _closed_form(params):
    
    c1, c2 = params.payoffs[:2]
    
    return is_two_behavior(params) and c1 > c2


class SteadyStateCommand(BaseCommand):
    
    help = (
        'Classify the steady state of the mean-field system.\n'
        'Two-behaviour models with a safe conservative behaviour are solved in\n'
        'closed form; any other model is searched numerically.'
    )
    
    def handle(self, conf):
        
        params = conf.model_params()
        mode = self.get_mode(conf)
        
        report = {'mode': mode, 'behaviors': params.behavior_count}
        
        if _closed_form(params):
            state = classify(params, mode)
            report['method'] = 'closed-form'
            report['steady_state'] = state.as_dict()
            report['radical_regime'] = radical_regime_test(params).as_dict()
            
            try:
                report['max_spread'] = max_spread(params)
            except DomainError:
                report['max_spread'] = None
            
            self.info(f'{mode}: {state.case_label}', 'case')
            if state.exists:
                self.info(f'i* = {state.i_star:.6f}, x1* = {state.x1_star:.6f}')
        else:
            search = numeric_steady_state(
                params, mode,
                starts=conf.get('starts', 16),
                dt=conf.get('dt', SEARCH_DT),
                horizon=conf.get('horizon', SEARCH_HORIZON)
            )
            report['method'] = 'numeric'
            report['search'] = search.as_dict()
            
            self.info(f'{mode}: {len(search)} steady state(s) found numerically', 'case')
            if search.unconverged:
                self.stdout.write(f'{len(search.unconverged)} start(s) did not settle.', 'warning')
        
        self.write_json(report, 'steady.json')


class SweepCommand(BaseCommand):
    
    help = 'Classify the two-behaviour steady state across a grid of beta_1 or alpha values.'
    
    def handle(self, conf):
        
        params = conf.model_params()
        mode = self.get_mode(conf)
        axis = conf.get('axis', 'beta')
        
        grid = self.validate(conf, check_sweep, params, axis, conf.grid())
        rows = sweep(params, axis, grid, mode, workers=conf.get('workers'))
        
        counts = Counter(row.state.case_label for row in rows)
        summary = ', '.join(f'{label}: {count}' for label, count in sorted(counts.items()))
        self.info(f'{len(rows)} points along {axis} ({summary})')
        
        self.write_table(sweep_frame(rows), 'sweep')


class CompareRationalityCommand(BaseCommand):
    
    help = 'Compare the prospect-theory steady states at two rationality coefficients.'
    
    def handle(self, conf):
        
        params = conf.model_params()
        
        alpha_low, alpha_high = conf.require('alpha_low'), conf.require('alpha_high')
        self.validate(conf, check_comparison, params, alpha_low, alpha_high)
        
        comparison = compare_rationality(params, alpha_low, alpha_high)
        
        if comparison.regime:
            style = 'success' if comparison.consistent else 'warning'
            self.info(f'{comparison.regime} regime, ordering consistent: {comparison.consistent}', style)
        else:
            self.info(comparison.subcase)
        
        report = comparison.as_dict()
        report['radical_regime'] = radical_regime_test(params).as_dict()
        
        self.write_json(report, 'compare.json')
