import os
import unittest

from coevo.model import make_params

slow = unittest.skipUnless(os.environ.get('COEVO_SLOW_TESTS'), 'set COEVO_SLOW_TESTS to run full-size checks')


def base_params(**overrides):
    """
    The reference two-behaviour model: an interior steady state under
    both decision modes.
    """
    
    kwargs = {
        'beta': [0.02, 0.0],
        'c': [0.0, -1.0],
        'c_n': -20.0,
        'gamma': 0.03,
        'k_bar': 10,
    }
    kwargs.update(overrides)
    
    return make_params(**kwargs)


def mild_params(**overrides):
    """
    A mild, fast-spreading disease, in which lower rationality makes the
    population riskier.
    """
    
    kwargs = {
        'beta': [0.1, 0.0],
        'c': [0.0, -1.0],
        'c_n': -1.1,
        'gamma': 0.12,
        'k_bar': 10,
        'u_max': 1.0,
    }
    kwargs.update(overrides)
    
    return make_params(**kwargs)


def guidance_params(**overrides):
    """
    Parameters for the guidance optimiser. The positive risky payoff keeps
    the value function differentiable at the unguided point.
    ``U_max`` is pinned to keep the unguided steady state fixed.
    """
    
    kwargs = {
        'beta': [0.02, 0.0],
        'c': [0.5, -1.0],
        'c_n': -10.0,
        'gamma': 0.03,
        'k_bar': 10,
        'alpha': 0.8,
        'u_max': 1 + 10 ** 0.65,
    }
    kwargs.update(overrides)
    
    return make_params(**kwargs)
