import logging
import math

import pandas as pd

from coevo.estimation import (
    DEFAULT_BINS,
    correlate,
    estimate_alpha,
    group_by_appetite,
    groups_frame,
    read_choices,
    read_responses,
    risk_appetite,
)
from coevo.exceptions import CommandError
from coevo.model import DEFAULT_SIGMA

from .base import BaseCommand

logger = logging.getLogger(__name__)

SUBJECT_COLUMNS = ['subject_id', 'alpha_hat', 'in_range', 'r2', 'appetite']


class SubjectsMixin:
    """
    Shared loading of per-subject rationality estimates and risk appetites.
    """
    
    def load_subjects(self, conf, require_choices=False):
        """
        Estimate every subject in the ``responses`` file. Risk appetite comes
        from the ``choices`` file if one is configured and is NaN otherwise.
        
        :return: A ``pandas.DataFrame`` with one row per subject.
        """
        
        responses = read_responses(self.resolve_path(conf, 'responses'))
        
        if require_choices or 'choices' in conf:
            choices = read_choices(self.resolve_path(conf, 'choices'))
        else:
            choices = {}
        
        extra = sorted(set(choices) - set(responses))
        if extra:
            logger.warning('Ignoring choices of %d subject(s) without responses: %s', len(extra), ', '.join(extra))
        
        sigma = conf.get('sigma', DEFAULT_SIGMA)
        
        rows = []
        for subject_id, subject_responses in responses.items():
            estimate = estimate_alpha(subject_responses, sigma)
            
            if subject_id in choices:
                appetite = risk_appetite(choices[subject_id])
            elif choices:
                raise CommandError(f'Subject "{subject_id}" has responses but no scenario choices.')
            else:
                appetite = math.nan
            
            rows.append({
                'subject_id': subject_id,
                'alpha_hat': estimate.alpha_hat,
                'in_range': estimate.in_range,
                'r2': estimate.r2,
                'appetite': appetite,
            })
        
        return pd.DataFrame(rows, columns=SUBJECT_COLUMNS)


class EstimateAlphaCommand(SubjectsMixin, BaseCommand):
    
    help = (
        'Estimate each subject\'s rationality coefficient from insurance responses\n'
        'and, given scenario choices, their risk appetite and appetite groups.'
    )
    
    def handle(self, conf):
        
        subjects = self.load_subjects(conf)
        
        outside = int((~subjects['in_range']).sum())
        self.info(f'Estimated {len(subjects)} subject(s), mean alpha = {subjects["alpha_hat"].mean():.4f}')
        if outside:
            self.stdout.write(f'{outside} estimate(s) fall outside (0, 1].', 'warning')
        
        self.write_table(subjects, 'alpha')
        
        if subjects['appetite'].notna().all() and len(subjects):
            groups = group_by_appetite(subjects['appetite'], subjects['alpha_hat'], conf.get('bins', DEFAULT_BINS))
            self.write_table(groups_frame(groups), 'groups')


class CorrelateCommand(SubjectsMixin, BaseCommand):
    
    help = 'Correlate rationality estimates with risk appetite, per subject or per appetite group.'
    
    def add_arguments(self, parser):
        
        parser.add_argument(
            '--groups',
            action='store_true',
            help='Correlate the means of the non-empty risk-appetite groups instead of individual subjects.'
        )
    
    def handle(self, conf):
        
        subjects = self.load_subjects(conf, require_choices=True)
        exact = conf.get('exact', False)
        
        if self.kwargs['groups']:
            groups = group_by_appetite(subjects['appetite'], subjects['alpha_hat'], conf.get('bins', DEFAULT_BINS))
            groups = [g for g in groups if g.count]
            xs = [g.mean_appetite for g in groups]
            ys = [g.mean_alpha for g in groups]
        else:
            xs = subjects['appetite']
            ys = subjects['alpha_hat']
        
        result = correlate(xs, ys, exact=exact)
        
        self.info(
            f'n = {result.n}: Pearson r = {result.pearson_r:.4f} (p = {result.pearson_p:.4g}), '
            f'Spearman rho = {result.spearman_rho:.4f} (p = {result.spearman_p:.4g})'
        )
        
        report = result.as_dict()
        report['level'] = 'groups' if self.kwargs['groups'] else 'subjects'
        
        self.write_json(report, 'correlation.json')
