"""
Steady states of the two-behaviour co-evolution system in closed form,
their stability, the effect of rationality on them, and numerical steady
states for any number of behaviours.

The two-behaviour system has a risky behaviour 1 with infection rate
``beta_1 > 0`` and a conservative behaviour 2 with ``beta_2 = 0``. Writing
``kb = k_bar * beta_1``, its steady states fall in one of three cases:

* ``Case1``: ``kb < gamma``; the epidemic dies out at ``(0, 1)``.
* ``Case2``: ``kb > gamma`` and the discriminant is negative; everyone
  stays risky and the epidemic reaches its maximum spread ``(i_bar, 1)``.
* ``Case3``: ``kb > gamma`` and the discriminant is non-negative; an
  interior state on the steady curve ``x_1 = gamma / ((1 - i) kb)``.

With ``kb == gamma`` there is no steady state.
"""

import logging
import math
from dataclasses import dataclass, field
from multiprocessing import Pool

import numpy as np
import pandas as pd
from scipy import optimize
from scipy.stats import qmc

from coevo.exceptions import DomainError, IntegrationError, PreconditionError, SteadyStateError
from coevo.meanfield import check_two_behavior, integrate, is_two_behavior, rhs_2, rhs_unchecked
from coevo.model import EUT, PT, SystemState, check_mode, perceived_risk, weight, weight_dp

logger = logging.getLogger(__name__)

CASE1 = 'Case1'
CASE2 = 'Case2'
CASE3 = 'Case3'
NO_STEADY_STATE = 'NoSteadyState'
CASES = (CASE1, CASE2, CASE3, NO_STEADY_STATE)

# Relative tolerance under which kb and gamma count as equal
BOUNDARY_RTOL = 1e-12

# Lower end of the bisection bracket for the interior root
ROOT_FLOOR = 1e-15

FIXED_POINT_TOL = 1e-8
MONOTONE_GRID = 257

CLUSTER_RADIUS = 1e-4
SEARCH_DT = 0.1
SEARCH_HORIZON = 5000.0
SEARCH_TOL = 1e-9

AXES = ('beta', 'alpha')

SWEEP_COLUMNS = ['param_value', 'case', 'i_star', 'x1_star', 'phi', 'P', 'Q']


@dataclass(frozen=True, eq=False)
class StabilityCertificate:
    """
    Trace ``P``, determinant ``Q`` and eigenvalues of the Jacobian of the
    two-behaviour system at a fixed point. The point is asymptotically
    stable iff ``P < 0`` and ``Q > 0``.
    """
    
    trace: float
    determinant: float
    eigenvalues: np.ndarray
    
    @property
    def stable(self):
        
        return self.trace < 0 and self.determinant > 0
    
    def as_dict(self):
        
        return {
            'P': self.trace,
            'Q': self.determinant,
            'eigenvalues_real': [float(v) for v in np.real(self.eigenvalues)],
            'stable': self.stable,
        }


@dataclass(frozen=True, eq=False)
class SteadyState:
    """
    A classified steady state of the two-behaviour system. ``discriminant``
    holds the case-deciding quantity for the mode it was computed under, NaN
    where it is undefined. ``i_star``, ``x1_star`` and ``stability`` are NaN
    and ``None`` for ``NoSteadyState``.
    """
    
    case_label: str
    i_star: float
    x1_star: float
    discriminant: float
    stability: StabilityCertificate = None
    mode: str = PT
    
    @property
    def exists(self):
        
        return self.case_label != NO_STEADY_STATE
    
    def as_dict(self):
        
        return {
            'case': self.case_label,
            'i_star': self.i_star,
            'x1_star': self.x1_star,
            'phi': self.discriminant,
            'mode': self.mode,
            'stability': self.stability.as_dict() if self.stability else None,
        }


def bisect(func, low, high, tol=1e-12, max_iter=200):
    """
    Locate the root of the decreasing or increasing function ``func`` on
    ``[low, high]``. The bracket is halved until ``|func| < tol`` at the
    midpoint or until it can no longer be split in floating point; the
    endpoint with the smaller residual is returned in the latter case.
    
    :param func: A scalar function that changes sign on ``[low, high]``.
    :param low: The lower end of the bracket.
    :param high: The upper end of the bracket.
    :param tol: The residual at which to stop early.
    :param max_iter: The maximum number of halvings.
    :return: The root.
    """
    
    f_low = func(low)
    f_high = func(high)
    
    if f_low == 0:
        return low
    
    if f_high == 0:
        return high
    
    if np.sign(f_low) == np.sign(f_high):
        raise PreconditionError(f'No sign change on [{low}, {high}]: f = {f_low:.6g}, {f_high:.6g}.')
    
    for _ in range(max_iter):
        mid = 0.5 * (low + high)
        if mid <= low or mid >= high:
            break
        
        f_mid = func(mid)
        if f_mid == 0:
            return mid
        
        if np.sign(f_mid) == np.sign(f_low):
            low, f_low = mid, f_mid
        else:
            high, f_high = mid, f_mid
        
        if abs(f_mid) < tol and high - low < tol:
            break
    
    return low if abs(f_low) <= abs(f_high) else high


def check_pair(params):
    """
    Raise ``PreconditionError`` unless ``params`` describe two behaviours,
    the conservative one safe (``beta_2 = 0``) and the risky one better paid
    (``c_1 > c_2``).
    """
    
    check_two_behavior(params)
    
    c1, c2 = params.payoffs
    if not c1 > c2:
        raise PreconditionError(f'The risky payoff c_1 = {c1} must exceed the conservative payoff c_2 = {c2}.')


def _spread_rate(params):
    
    return params.k_bar * params.betas[0]


def _on_boundary(params):
    
    return math.isclose(_spread_rate(params), params.gamma, rel_tol=BOUNDARY_RTOL)


def _payoff_gap(params):
    """
    Return ``u(c_1) - u(c_2)``, the intrinsic advantage of the risky
    behaviour.
    """
    
    u1, u2 = params.intrinsic_values
    
    return u1 - u2


def _steady_share(infected, params):
    
    if infected >= 1:
        raise DomainError(f'The steady curve is undefined at i = {infected}.')
    
    return params.gamma / ((1 - infected) * _spread_rate(params))


def max_spread(params):
    """
    Return the maximum extent of the epidemic ``i_bar = 1 - gamma / kb``,
    reached when every susceptible individual takes the risky behaviour.
    
    :raises DomainError: if ``kb <= gamma`` (no endemic maximum).
    """
    
    check_two_behavior(params)
    
    kb = _spread_rate(params)
    if kb <= params.gamma or _on_boundary(params):
        raise DomainError(f'No endemic maximum: k_bar * beta_1 = {kb:.6g} does not exceed gamma = {params.gamma}.')
    
    return 1 - params.gamma / kb


def discriminant_eut(params):
    """
    Return ``Phi_1 = -k0 (u(c_1) - u(c_2)) + (gamma - kb)(k0 u(c_n) - 1)``.
    """
    
    k0 = params.k0
    
    return -k0 * _payoff_gap(params) + (params.gamma - _spread_rate(params)) * (k0 * params.loss_value - 1)


def discriminant_pt(params):
    """
    Return ``Phi_2 = -k0 (u(c_1) - u(c_2)) - (gamma - kb) - k0 u(c_n) w(kb - gamma, alpha)``.
    
    :raises DomainError: if ``kb - gamma`` lies outside ``[0, 1]``.
    """
    
    k0 = params.k0
    margin = _spread_rate(params) - params.gamma
    if not 0 <= margin <= 1:
        raise DomainError(f'The weighting argument k_bar * beta_1 - gamma = {margin:.6g} lies outside [0, 1].')
    
    return -k0 * _payoff_gap(params) + margin - k0 * params.loss_value * weight(margin, params.alpha)


def _share_drive(infected, params, mode):
    """
    Return ``G(i)``, with ``dx_1/dt = x_1 (1 - x_1) G(i)``.
    """
    
    kb = _spread_rate(params)
    risk = perceived_risk(min(kb * infected, 1.0), params.alpha, mode)
    
    return -kb * infected + params.k0 * (_payoff_gap(params) + params.loss_value * risk)


def _share_drive_slope(infected, params, mode):
    
    kb = _spread_rate(params)
    slope = 1.0 if mode == EUT else weight_dp(min(kb * infected, 1.0), params.alpha)
    
    return -kb + params.k0 * params.loss_value * kb * slope


def _interior_root(params):
    
    kb = _spread_rate(params)
    high = max_spread(params)
    
    def drive(x):
        
        return _share_drive(x, params, PT)
    
    # The drive is decreasing in i; check before trusting the bracket
    grid = np.linspace(0, high, MONOTONE_GRID)
    risk = weight(np.minimum(kb * grid, 1.0), params.alpha)
    values = -kb * grid + params.k0 * (_payoff_gap(params) + params.loss_value * risk)
    if np.any(np.diff(values) > 0):
        raise PreconditionError('The steady-state equation is not monotone in i; no unique interior root.')
    
    return bisect(drive, ROOT_FLOOR, high)


def jacobian(infected, x1, params, mode=PT):
    """
    Return the analytic Jacobian of ``(di/dt, dx_1/dt)`` with respect to
    ``(i, x_1)`` as a 2x2 array.
    """
    
    check_mode(mode)
    check_two_behavior(params)
    
    kb = _spread_rate(params)
    logistic = x1 * (1 - x1)
    
    a = kb * x1 * (1 - 2 * infected) - params.gamma
    b = kb * infected * (1 - infected)
    c = 0.0 if logistic == 0 else logistic * _share_drive_slope(infected, params, mode)
    d = (1 - 2 * x1) * _share_drive(infected, params, mode)
    
    return np.array([[a, b], [c, d]])


def stability_certificate(infected, x1, params, mode=PT):
    """
    Certify the fixed point ``(infected, x1)`` of the two-behaviour system
    from the trace and determinant of its Jacobian.
    
    :raises PreconditionError: if the point is not a fixed point.
    :return: A :class:`StabilityCertificate`.
    """
    
    residual = max(abs(v) for v in rhs_2(infected, x1, params, mode))
    if residual >= FIXED_POINT_TOL:
        raise PreconditionError(f'({infected:.6g}, {x1:.6g}) is not a fixed point: residual {residual:.3g}.')
    
    jac = jacobian(infected, x1, params, mode)
    (a, b), (c, d) = jac
    
    return StabilityCertificate(
        trace=float(a + d),
        determinant=float(a * d - b * c),
        eigenvalues=np.linalg.eigvals(jac)
    )


def _build(case_label, infected, x1, discriminant, params, mode):
    
    return SteadyState(
        case_label=case_label,
        i_star=float(infected),
        x1_star=float(x1),
        discriminant=float(discriminant),
        stability=stability_certificate(infected, x1, params, mode),
        mode=mode
    )


def _no_steady_state(discriminant, mode):
    
    return SteadyState(NO_STEADY_STATE, math.nan, math.nan, discriminant, None, mode)


def classify_eut(params):
    """
    Return the steady state of the two-behaviour system under expected
    utility theory.
    
    :param params: Two-behaviour :class:`~coevo.model.ModelParams` with
        ``beta_2 = 0`` and ``c_1 > c_2``.
    :return: A :class:`SteadyState`.
    """
    
    check_pair(params)
    
    phi = discriminant_eut(params)
    kb = _spread_rate(params)
    
    if _on_boundary(params):
        return _no_steady_state(phi, EUT)
    
    if kb < params.gamma:
        return _build(CASE1, 0.0, 1.0, phi, params, EUT)
    
    if phi < 0:
        return _build(CASE2, max_spread(params), 1.0, phi, params, EUT)
    
    k0 = params.k0
    infected = -k0 * _payoff_gap(params) / ((k0 * params.loss_value - 1) * kb)
    
    # Phi_1 = 0 puts the root exactly on i_bar, where x_1 = 1
    x1 = min(_steady_share(infected, params), 1.0)
    
    return _build(CASE3, infected, x1, phi, params, EUT)


def classify_pt(params):
    """
    Return the steady state of the two-behaviour system under prospect
    theory. With ``alpha = 1`` the weighting function is the identity and
    the result equals :func:`classify_eut`.
    """
    
    check_pair(params)
    
    if params.alpha == 1:
        state = classify_eut(params)
        return SteadyState(state.case_label, state.i_star, state.x1_star, state.discriminant, state.stability, PT)
    
    kb = _spread_rate(params)
    
    if _on_boundary(params):
        return _no_steady_state(math.nan, PT)
    
    if kb < params.gamma:
        return _build(CASE1, 0.0, 1.0, math.nan, params, PT)
    
    phi = discriminant_pt(params)
    if phi < 0:
        return _build(CASE2, max_spread(params), 1.0, phi, params, PT)
    
    infected = _interior_root(params)
    x1 = min(_steady_share(infected, params), 1.0)
    
    return _build(CASE3, infected, x1, phi, params, PT)


def classify(params, mode=PT):
    """
    Return the steady state of the two-behaviour system under ``mode``.
    """
    
    if check_mode(mode) == EUT:
        return classify_eut(params)
    
    return classify_pt(params)


@dataclass(frozen=True, eq=False)
class RationalityComparison:
    """
    Steady states at a low and a high rationality coefficient.
    
    For two interior states, ``regime`` is ``'overweighting'`` when the
    infection probability at the high-rationality state is at most ``1/e``
    (lower rationality then means fewer infections and fewer risky
    individuals), ``'underweighting'`` otherwise. ``consistent`` records
    whether the computed states obey the predicted ordering. For other case
    pairs ``regime`` is ``None`` and ``subcase`` describes the pair.
    """
    
    alpha_low: float
    alpha_high: float
    low: SteadyState
    high: SteadyState
    threshold: float
    regime: str = None
    subcase: str = None
    consistent: bool = True
    
    def as_dict(self):
        
        return {
            'alpha_low': self.alpha_low,
            'alpha_high': self.alpha_high,
            'low': self.low.as_dict(),
            'high': self.high.as_dict(),
            'threshold': self.threshold,
            'regime': self.regime,
            'subcase': self.subcase,
            'consistent': self.consistent,
        }


def _describe_subcase(low, high, params, threshold):
    
    if low.case_label == high.case_label:
        if low.case_label == CASE1:
            return 'both extinct: the epidemic dies out regardless of rationality'
        
        return 'both at maximum spread: rationality does not change the steady state'
    
    i_bar = max_spread(params)
    side = 'overweighting' if i_bar <= threshold else 'underweighting'
    more_risky = high if high.x1_star > low.x1_star else low
    which = 'high' if more_risky is high else 'low'
    
    return (
        f'{low.case_label} at low rationality, {high.case_label} at high rationality; '
        f'maximum spread is in the {side} range and the {which}-rationality population is riskier'
    )


def check_comparison(params, alpha_low, alpha_high):
    """
    Raise ``PreconditionError`` unless :func:`compare_rationality` accepts
    these arguments.
    """
    
    check_pair(params)
    
    if not 0 < alpha_low <= alpha_high <= 1:
        raise PreconditionError(f'Need 0 < alpha_low <= alpha_high <= 1, got {alpha_low} and {alpha_high}.')


def compare_rationality(params, alpha_low, alpha_high):
    """
    Compare the prospect-theory steady states at two rationality
    coefficients ``alpha_low <= alpha_high``.
    
    :raises SteadyStateError: if either rationality gives no steady state.
    :return: A :class:`RationalityComparison`.
    """
    
    check_comparison(params, alpha_low, alpha_high)
    
    low = classify_pt(params.with_decision(rationality=alpha_low))
    high = classify_pt(params.with_decision(rationality=alpha_high))
    
    if not (low.exists and high.exists):
        raise SteadyStateError('No steady state exists: k_bar * beta_1 equals gamma.')
    
    threshold = 1 / (_spread_rate(params) * math.e)
    
    if low.case_label != CASE3 or high.case_label != CASE3:
        subcase = _describe_subcase(low, high, params, threshold)
        return RationalityComparison(alpha_low, alpha_high, low, high, threshold, subcase=subcase)
    
    tol = 1e-10
    if high.i_star <= threshold:
        regime = 'overweighting'
        consistent = high.i_star >= low.i_star - tol and high.x1_star >= low.x1_star - tol
    else:
        regime = 'underweighting'
        consistent = high.i_star <= low.i_star + tol and high.x1_star <= low.x1_star + tol
    
    if not consistent:
        logger.warning(
            'Steady states at alpha = %g and %g do not follow the %s ordering', alpha_low, alpha_high, regime
        )
    
    return RationalityComparison(alpha_low, alpha_high, low, high, threshold, regime=regime, consistent=consistent)


@dataclass(frozen=True)
class RadicalRegimeReport:
    """
    The two conditions under which lower rationality can make a population
    riskier: a spread margin ``kb - gamma`` above ``1/e``, and a loss ratio
    ``u(c_n) / (u(c_2) - u(c_1))`` below ``e + 1 / (k0 (u(c_2) - u(c_1)))``.
    """
    
    spread_margin: float
    spread_threshold: float
    loss_ratio: float
    loss_threshold: float
    
    @property
    def spread_condition(self):
        
        if math.isclose(self.spread_margin, self.spread_threshold, rel_tol=BOUNDARY_RTOL):
            return False
        
        return self.spread_margin > self.spread_threshold
    
    @property
    def loss_condition(self):
        
        return self.loss_ratio < self.loss_threshold
    
    @property
    def possible(self):
        
        return self.spread_condition and self.loss_condition
    
    def as_dict(self):
        
        return {
            'possible': self.possible,
            'spread_margin': self.spread_margin,
            'spread_threshold': self.spread_threshold,
            'spread_condition': self.spread_condition,
            'loss_ratio': self.loss_ratio,
            'loss_threshold': self.loss_threshold,
            'loss_condition': self.loss_condition,
        }


def radical_regime_test(params):
    """
    Evaluate whether irrationality can push the population towards the
    risky behaviour, which requires a mild disease that still spreads well.
    
    :return: A :class:`RadicalRegimeReport`.
    """
    
    check_pair(params)
    
    gap = -_payoff_gap(params)
    
    return RadicalRegimeReport(
        spread_margin=_spread_rate(params) - params.gamma,
        spread_threshold=1 / math.e,
        loss_ratio=params.loss_value / gap,
        loss_threshold=math.e + 1 / (params.k0 * gap)
    )


@dataclass(frozen=True, eq=False)
class NumericSteadyState:
    """
    A cluster of terminal points from the multi-start search, represented by
    its first member. ``stability`` is set for the two-behaviour system.
    """
    
    state: SystemState
    residual: float
    members: int
    stability: StabilityCertificate = None
    
    def as_dict(self):
        
        return {
            'i_star': self.state.infected,
            'shares': [float(x) for x in self.state.shares],
            'residual': self.residual,
            'members': self.members,
            'stability': self.stability.as_dict() if self.stability else None,
        }


@dataclass(frozen=True, eq=False)
class SteadySearch:
    """
    Result of :func:`numeric_steady_state`: the clustered candidates and the
    indices of starts that did not settle within the horizon.
    """
    
    candidates: list
    unconverged: list = field(default_factory=list)
    
    def __len__(self):
        
        return len(self.candidates)
    
    def __iter__(self):
        
        return iter(self.candidates)
    
    def as_dict(self):
        
        return {
            'candidates': [c.as_dict() for c in self.candidates],
            'unconverged': list(self.unconverged),
        }


def _start_points(count, behavior_count):
    
    # Unscrambled Halton is deterministic; its first point is the origin
    sampler = qmc.Halton(d=behavior_count + 1, scramble=False)
    points = sampler.random(count + 1)[1:]
    
    infected = points[:, 0]
    shares = -np.log(points[:, 1:])
    shares = shares / shares.sum(axis=1, keepdims=True)
    
    return [SystemState(i, x) for i, x in zip(infected, shares)]


def _polish(y, params, mode, radius):
    
    size = y.size
    
    def reduced(z):
        
        full = np.append(z, 1 - z[1:].sum())
        return rhs_unchecked(full, params, mode)[:size - 1]
    
    try:
        solution = optimize.root(reduced, y[:-1], method='hybr')
    except (ArithmeticError, DomainError):
        return y
    
    if not solution.success or not np.all(np.isfinite(solution.x)):
        return y
    
    polished = np.append(solution.x, 1 - solution.x[1:].sum())
    if np.any(polished < 0) or polished[0] > 1 or np.max(np.abs(polished - y)) > radius:
        return y
    
    return polished


def _all_identical(params):
    
    return np.all(params.betas == params.betas[0]) and np.all(params.payoffs == params.payoffs[0])


def numeric_steady_state(params, mode=PT, starts=16, dt=SEARCH_DT, horizon=SEARCH_HORIZON, radius=CLUSTER_RADIUS):
    """
    Find steady states numerically by integrating from ``starts``
    quasi-random interior states until the derivative vanishes, polishing
    each terminal point with a root finder and clustering the results.
    
    When all behaviours are identical every share vector is an equilibrium,
    so terminal points are clustered on ``i`` alone.
    
    :param params: The :class:`~coevo.model.ModelParams`, any ``M >= 2``.
    :param mode: ``EUT`` or ``PT``.
    :param starts: The number of initial states.
    :param dt: The integrator step size.
    :param horizon: The longest integration time per start.
    :param radius: The max-norm clustering radius.
    :return: A :class:`SteadySearch`.
    """
    
    check_mode(mode)
    
    if starts < 1:
        raise PreconditionError(f'At least one start is needed, got {starts}.')
    
    by_infection_only = _all_identical(params)
    clusters = []
    unconverged = []
    
    for index, start in enumerate(_start_points(starts, params.behavior_count)):
        try:
            trajectory = integrate(start, params, mode, dt=dt, horizon=horizon, stride=max(int(horizon / dt), 1),
                                   until_steady=True, steady_tol=SEARCH_TOL)
        except IntegrationError as e:
            logger.warning('Start %d failed to integrate: %s', index, e)
            unconverged.append(index)
            continue
        
        if not trajectory.converged:
            unconverged.append(index)
            continue
        
        y = _polish(trajectory.states[-1], params, mode, radius)
        
        for cluster in clusters:
            if by_infection_only:
                distance = abs(cluster[0][0] - y[0])
            else:
                distance = np.max(np.abs(cluster[0] - y))
            
            if distance <= radius:
                cluster.append(y)
                break
        else:
            clusters.append([y])
    
    if unconverged:
        logger.warning('%d of %d starts did not settle within T = %g', len(unconverged), starts, horizon)
    
    candidates = []
    for cluster in clusters:
        y = cluster[0]
        shares = np.clip(y[1:], 0, None)
        state = SystemState(min(max(y[0], 0.0), 1.0), shares / shares.sum())
        residual = float(np.max(np.abs(rhs_unchecked(state.as_array(), params, mode))))
        
        stability = None
        if is_two_behavior(params) and residual < FIXED_POINT_TOL:
            stability = stability_certificate(state.infected, state.shares[0], params, mode)
        
        candidates.append(NumericSteadyState(state, residual, len(cluster), stability))
    
    return SteadySearch(candidates, unconverged)


@dataclass(frozen=True, eq=False)
class SweepRow:
    
    param_value: float
    state: SteadyState
    
    def as_dict(self):
        
        certificate = self.state.stability
        
        return {
            'param_value': self.param_value,
            'case': self.state.case_label,
            'i_star': self.state.i_star,
            'x1_star': self.state.x1_star,
            'phi': self.state.discriminant,
            'P': certificate.trace if certificate else math.nan,
            'Q': certificate.determinant if certificate else math.nan,
        }


def _vary(params, axis, value):
    
    if axis == 'beta':
        return params.with_infection_rate(0, value)
    
    return params.with_decision(rationality=value)


def _sweep_point(args):
    
    params, axis, value, mode = args
    
    return SweepRow(float(value), classify(_vary(params, axis, value), mode))


def check_sweep(params, axis, grid):
    """
    Raise ``PreconditionError`` unless every point of ``grid`` along
    ``axis`` gives a valid two-behaviour model and the grid is strictly
    increasing.
    """
    
    if axis not in AXES:
        raise PreconditionError(f'Unknown sweep axis "{axis}", expected one of: {", ".join(AXES)}.')
    
    grid = [float(v) for v in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise PreconditionError('Sweep grid must be strictly increasing.')
    
    for value in grid:
        check_pair(_vary(params, axis, value))
    
    return grid


def sweep(params, axis, grid, mode=PT, workers=None):
    """
    Classify the steady state at each value of ``grid`` along ``axis``
    (``'beta'`` for the risky infection rate, ``'alpha'`` for rationality).
    ``U_max`` is held at its value in ``params`` across the sweep.
    
    :param workers: Fan the grid out over this many processes; rows are
        returned in grid order either way.
    :return: A list of :class:`SweepRow`.
    """
    
    check_mode(mode)
    grid = check_sweep(params, axis, grid)
    
    jobs = [(params, axis, value, mode) for value in grid]
    
    if workers and workers > 1 and len(jobs) > 1:
        with Pool(workers) as pool:
            return pool.map(_sweep_point, jobs)
    
    return [_sweep_point(job) for job in jobs]


def sweep_frame(rows):
    """
    Return sweep rows as a ``pandas.DataFrame`` with columns
    ``param_value, case, i_star, x1_star, phi, P, Q``.
    """
    
    return pd.DataFrame([row.as_dict() for row in rows], columns=SWEEP_COLUMNS)
