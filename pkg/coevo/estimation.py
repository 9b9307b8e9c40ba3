"""
Estimation of the rationality coefficient from insurance-style responses,
risk appetite from scenario choices, and their correlation.

A subject who accepts to pay at most ``r`` to insure a stake ``L`` against
a loss with probability ``p`` reveals ``u(r) = u(L) w(p, alpha)``. With
the power value function this gives the linear relation
``ln(-ln(r / L)) = alpha ln(-ln p) - ln sigma``, which is fitted by least
squares.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd
from scipy import stats

from coevo.exceptions import (
    ConfigError,
    DomainError,
    InsufficientDataError,
    PreconditionError,
    UndefinedCorrelationError,
)
from coevo.model import DEFAULT_LAMBDA, DEFAULT_SIGMA, value, weight

DEFAULT_STAKE = 100.0
DEFAULT_BINS = 6

# Permutation p-values are exact up to this many observations
EXACT_LIMIT = 10

DEFAULT_PROBABILITIES = (0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5)
DEFAULT_SCENARIOS = tuple(np.linspace(0.01, 0.14, 8))


@dataclass(frozen=True)
class InsuranceResponse:
    
    loss_probability: float
    accepted_price: float
    stake: float = DEFAULT_STAKE
    
    def __post_init__(self):
        
        if not 0 < self.loss_probability < 1:
            raise DomainError(f'Loss probability must lie in (0, 1), got {self.loss_probability}.')
        
        if not 0 < self.accepted_price < self.stake:
            raise DomainError(f'Accepted price must lie in (0, {self.stake}), got {self.accepted_price}.')


@dataclass(frozen=True)
class SubjectRecord:
    """
    The insurance responses and scenario choices (``True`` for risky) of
    one subject.
    """
    
    subject_id: str
    responses: tuple = ()
    choices: tuple = ()
    
    @property
    def appetite(self):
        
        return risk_appetite(self.choices)
    
    def estimate(self, sigma=DEFAULT_SIGMA):
        
        return estimate_alpha(self.responses, sigma)


@dataclass(frozen=True)
class AlphaEstimate:
    """
    The rationality coefficient fitted with the intercept fixed at
    ``-ln sigma``, and the free two-parameter fit as a diagnostic.
    ``alpha_hat`` is not clamped; ``in_range`` says whether it lies in
    ``(0, 1]``.
    """
    
    alpha_hat: float
    sigma: float
    count: int
    slope: float
    intercept: float
    r2: float
    
    @property
    def in_range(self):
        
        return 0 < self.alpha_hat <= 1


def estimate_alpha(responses, sigma=DEFAULT_SIGMA):
    """
    Fit the rationality coefficient to insurance responses.
    
    :param responses: :class:`InsuranceResponse` records, at least two of
        them with distinct loss probabilities.
    :param sigma: The value-function curvature, fixed in the fit.
    :return: An :class:`AlphaEstimate`.
    """
    
    if not 0 < sigma <= 1:
        raise PreconditionError(f'Value curvature sigma must lie in (0, 1], got {sigma}.')
    
    responses = list(responses)
    p = np.array([r.loss_probability for r in responses], dtype=float)
    if np.unique(p).size < 2:
        raise InsufficientDataError(
            f'Need responses at two or more distinct loss probabilities, got {np.unique(p).size}.'
        )
    
    ratio = np.array([r.accepted_price / r.stake for r in responses], dtype=float)
    x = np.log(-np.log(p))
    y = np.log(-np.log(ratio))
    
    alpha_hat = float(x @ (y + math.log(sigma)) / (x @ x))
    fit = stats.linregress(x, y)
    
    return AlphaEstimate(
        alpha_hat=alpha_hat,
        sigma=sigma,
        count=len(responses),
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r2=float(fit.rvalue ** 2)
    )


def risk_appetite(choices):
    """
    Return the fraction of scenarios in which the risky behaviour was chosen.
    """
    
    choices = [bool(c) for c in choices]
    if not choices:
        raise InsufficientDataError('Risk appetite needs at least one scenario choice.')
    
    return sum(choices) / len(choices)


@dataclass(frozen=True)
class Correlation:
    
    pearson_r: float
    pearson_p: float
    spearman_rho: float
    spearman_p: float
    n: int
    exact: bool = False
    
    def as_dict(self):
        
        return {
            'pearson_r': self.pearson_r,
            'pearson_p': self.pearson_p,
            'spearman_rho': self.spearman_rho,
            'spearman_p': self.spearman_p,
            'n': self.n,
            'exact': self.exact,
        }


def _pearson(x, y):
    
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt((xc @ xc) * (yc @ yc))
    if denom == 0:
        raise UndefinedCorrelationError('Correlation is undefined for a series with zero variance.')
    
    return min(max(float(xc @ yc) / denom, -1.0), 1.0)


def _t_pvalue(r, n):
    
    if abs(r) == 1:
        return 0.0
    
    t = r * math.sqrt((n - 2) / (1 - r ** 2))
    
    return float(2 * stats.t.sf(abs(t), n - 2))


def _exact_pvalue(x_ranks, y_ranks):
    
    yc = y_ranks - y_ranks.mean()
    
    def statistic(x, axis=-1):
        
        xc = x - x.mean(axis=axis, keepdims=True)
        return (xc @ yc) / np.sqrt((xc ** 2).sum(axis=axis) * (yc @ yc))
    
    result = stats.permutation_test(
        (x_ranks, ), statistic,
        permutation_type='pairings',
        vectorized=True,
        n_resamples=math.factorial(x_ranks.size),
        alternative='two-sided'
    )
    
    return float(result.pvalue)


def correlate(xs, ys, exact=False):
    """
    Return the Pearson and Spearman correlations of two series with their
    two-sided p-values from the t-distribution with ``n - 2`` degrees of
    freedom. Spearman's coefficient is Pearson's on average ranks.
    
    :param exact: For up to ten observations, compute the Spearman p-value
        by enumerating every permutation instead.
    :return: A :class:`Correlation`.
    """
    
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    
    if x.shape != y.shape or x.ndim != 1:
        raise PreconditionError(f'Series must be one-dimensional and of equal length, got {x.shape} and {y.shape}.')
    
    n = x.size
    if n < 3:
        raise InsufficientDataError(f'Correlation needs at least 3 observations, got {n}.')
    
    r = _pearson(x, y)
    
    x_ranks = stats.rankdata(x)
    y_ranks = stats.rankdata(y)
    rho = _pearson(x_ranks, y_ranks)
    
    use_exact = exact and n <= EXACT_LIMIT
    spearman_p = _exact_pvalue(x_ranks, y_ranks) if use_exact else _t_pvalue(rho, n)
    
    return Correlation(r, _t_pvalue(r, n), rho, spearman_p, n, use_exact)


@dataclass(frozen=True)
class AppetiteGroup:
    """
    Subjects whose risk appetite falls in ``[low, high)`` (the last group
    also takes ``high = 1``). Means are NaN for an empty group.
    """
    
    index: int
    low: float
    high: float
    count: int
    mean_appetite: float
    mean_alpha: float


def group_by_appetite(appetites, alphas, bin_count=DEFAULT_BINS):
    """
    Group subjects into ``bin_count`` equal-width risk-appetite bins on
    ``[0, 1]`` and average each group's appetite and rationality estimate.
    
    :return: A list of :class:`AppetiteGroup`, one per bin, in order.
    """
    
    if bin_count < 2:
        raise PreconditionError(f'At least two groups are needed, got {bin_count}.')
    
    appetites = np.asarray(appetites, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    if appetites.shape != alphas.shape:
        raise PreconditionError('Every subject needs both a risk appetite and a rationality estimate.')
    
    edges = np.linspace(0, 1, bin_count + 1)
    index = np.clip(np.digitize(appetites, edges) - 1, 0, bin_count - 1)
    
    groups = []
    for k in range(bin_count):
        members = index == k
        count = int(members.sum())
        groups.append(AppetiteGroup(
            index=k,
            low=float(edges[k]),
            high=float(edges[k + 1]),
            count=count,
            mean_appetite=float(appetites[members].mean()) if count else math.nan,
            mean_alpha=float(alphas[members].mean()) if count else math.nan
        ))
    
    return groups


def group_subjects(subjects, bin_count=DEFAULT_BINS, sigma=DEFAULT_SIGMA):
    """
    :func:`group_by_appetite` over :class:`SubjectRecord` objects, each
    needing both insurance responses and scenario choices. Rationality is
    estimated with curvature ``sigma``.
    """
    
    subjects = list(subjects)
    appetites = [s.appetite for s in subjects]
    alphas = [s.estimate(sigma).alpha_hat for s in subjects]
    
    return group_by_appetite(appetites, alphas, bin_count)


def groups_frame(groups):
    
    return pd.DataFrame([asdict(g) for g in groups])


def synthetic_responses(alpha, sigma=DEFAULT_SIGMA, stake=DEFAULT_STAKE, probabilities=DEFAULT_PROBABILITIES,
                        noise=0.0, rng=None):
    """
    Generate the insurance responses of a subject with rationality
    ``alpha``: ``r = L exp(-(-ln p) ** alpha / sigma)``, optionally multiplied
    by log-normal noise ``exp(noise * z)``.
    """
    
    if noise and rng is None:
        raise PreconditionError('Noisy responses need a random generator.')
    
    responses = []
    for p in probabilities:
        price = stake * math.exp(-(-math.log(p)) ** alpha / sigma)
        if noise:
            price = min(price * math.exp(noise * rng.standard_normal()), stake * (1 - 1e-12))
        
        responses.append(InsuranceResponse(float(p), price, stake))
    
    return responses


def synthetic_cohort(alphas, rng=None, probabilities=DEFAULT_PROBABILITIES, scenarios=DEFAULT_SCENARIOS,
                     c1=0.0, c2=-1.0, c_n=-20.0, sigma=DEFAULT_SIGMA, lam=DEFAULT_LAMBDA, noise=0.0,
                     stake=DEFAULT_STAKE):
    """
    Generate one subject per entry of ``alphas``. Insurance responses come
    from :func:`synthetic_responses`; in each scenario with infection
    probability ``p`` the subject takes the risky behaviour iff
    ``u(c1) + u(c_n) w(p, alpha) >= u(c2)``.
    
    :return: A list of :class:`SubjectRecord`.
    """
    
    u1, u2, u_n = value(np.array([c1, c2, c_n]), sigma, lam)
    
    cohort = []
    for k, alpha in enumerate(alphas, start=1):
        risk = weight(np.asarray(scenarios, dtype=float), alpha)
        choices = tuple(bool(v) for v in u1 + u_n * risk >= u2)
        responses = tuple(synthetic_responses(alpha, sigma, stake, probabilities, noise, rng))
        cohort.append(SubjectRecord(f's{k:03d}', responses, choices))
    
    return cohort


def _read_table(path, columns, numeric):
    
    try:
        frame = pd.read_csv(path, dtype={'subject_id': str}, skipinitialspace=True)
    except (OSError, ValueError, pd.errors.ParserError) as e:
        raise ConfigError(f'Unable to read data file: {e}', path=path)
    
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise ConfigError(f'Missing column(s): {", ".join(missing)}.', path=path, line=1)
    
    for column in numeric:
        if column not in frame.columns:
            continue
        
        converted = pd.to_numeric(frame[column], errors='coerce')
        bad = converted.isna()
        if column not in columns:
            bad &= frame[column].notna()
        
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raise ConfigError(f'Column "{column}" is not numeric.', path=path, line=row + 2)
        
        frame[column] = converted
    
    return frame


def read_responses(path):
    """
    Read insurance responses from a CSV file with columns
    ``subject_id, p, r`` and an optional ``stake``.
    
    :return: A dict mapping subject ids to lists of
        :class:`InsuranceResponse`, in file order.
    """
    
    frame = _read_table(path, ['subject_id', 'p', 'r'], ['p', 'r', 'stake'])
    has_stake = 'stake' in frame.columns
    
    records = {}
    for row, item in enumerate(frame.itertuples(index=False), start=2):
        stake = item.stake if has_stake and not pd.isna(item.stake) else DEFAULT_STAKE
        try:
            response = InsuranceResponse(float(item.p), float(item.r), float(stake))
        except DomainError as e:
            raise ConfigError(str(e), path=path, line=row)
        
        records.setdefault(str(item.subject_id), []).append(response)
    
    return records


def read_choices(path):
    """
    Read scenario choices from a CSV file with columns
    ``subject_id, scenario_id, risky`` (``risky`` is 0 or 1).
    
    :return: A dict mapping subject ids to lists of booleans, in file order.
    """
    
    frame = _read_table(path, ['subject_id', 'scenario_id', 'risky'], ['risky'])
    
    records = {}
    for row, item in enumerate(frame.itertuples(index=False), start=2):
        if item.risky not in (0, 1):
            raise ConfigError(f'Column "risky" must be 0 or 1, got {item.risky}.', path=path, line=row)
        
        records.setdefault(str(item.subject_id), []).append(bool(item.risky))
    
    return records
