"""
Mean-field right-hand sides of the epidemic-behaviour co-evolution system
and a fixed-step fourth-order Runge-Kutta integrator.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from coevo.exceptions import DomainError, IntegrationError, PreconditionError
from coevo.model import PT, SystemState, check_mode, infection_probability, payoffs, perceived_risk

logger = logging.getLogger(__name__)

DEFAULT_DT = 0.01

# Pre-renormalisation simplex drift above this signals a bug, not roundoff
DRIFT_LIMIT = 1e-6
DRIFT_WARNING = 1e-9

STEADY_TOL = 1e-10
STEADY_PATIENCE = 100
PROGRESS_EVERY = 10000


def is_two_behavior(params):
    """
    Return ``True`` if ``params`` describe the two-behaviour system with a
    conservative behaviour carrying no infection risk (``beta_2 = 0``).
    """
    
    return params.behavior_count == 2 and params.betas[1] == 0


def check_two_behavior(params):
    
    if params.behavior_count != 2:
        raise PreconditionError(f'The two-behaviour system needs M = 2, got M = {params.behavior_count}.')
    
    if params.betas[1] != 0:
        raise PreconditionError(f'The two-behaviour system needs beta_2 = 0, got {params.betas[1]}.')


def _clamp(value):
    
    return min(max(value, 0.0), 1.0)


def rhs_unchecked(y, params, mode):
    """
    Return the M-behaviour derivative at the array ``(i, x_1, ..., x_M)``
    without validating it as a :class:`~coevo.model.SystemState`. Used by
    the integrator stages and root polishing, whose intermediate points may
    leave the simplex by roundoff.
    """
    
    i = y[0]
    x = y[1:]
    k_bar = params.k_bar
    betas = params.betas
    
    beta_mean = betas @ x
    di = i * (1 - i) * beta_mean * k_bar - params.gamma * i
    
    # Integrator stages may step marginally outside [0, 1]
    u = payoffs(_clamp(i), params, mode)
    
    # sum_j x_i x_j (beta_j - beta_i) collapses to x_i (beta_mean - beta_i)
    contagion = x * k_bar * i * (beta_mean - betas)
    imitation = params.k0 * x * (u * x.sum() - x @ u)
    
    return np.concatenate(([di], contagion + imitation))


def _rhs_2_raw(i, x1, params, mode):
    
    kb = params.k_bar * params.betas[0]
    di = i * (1 - i) * kb * x1 - params.gamma * i
    
    p = infection_probability(params.betas[0], _clamp(i), params.k_bar)
    risk = perceived_risk(p, params.alpha, mode)
    values = params.intrinsic_values
    gain = values[0] + params.loss_value * risk - values[1]
    
    logistic = x1 * (1 - x1)
    dx1 = -kb * logistic * i + params.k0 * logistic * gain
    
    return di, dx1


def _two_behavior_derivative(y, params, mode):
    
    di, dx1 = _rhs_2_raw(y[0], y[1], params, mode)
    
    return np.array([di, dx1, -dx1])


def rhs_m(state, params, mode=PT):
    """
    Return the time derivative ``(di/dt, dx_1/dt, ..., dx_M/dt)`` of the
    M-behaviour co-evolution system at ``state``.
    
    :param state: A :class:`~coevo.model.SystemState`, or an array
        ``(i, x_1, ..., x_M)`` that is validated as one.
    :param params: The :class:`~coevo.model.ModelParams`.
    :param mode: ``EUT`` or ``PT``.
    :return: The derivative, as an array of length ``M + 1``.
    """
    
    check_mode(mode)
    
    if not isinstance(state, SystemState):
        state = SystemState.from_array(state)
    
    if state.shares.size != params.behavior_count:
        raise DomainError(
            f'State has {state.shares.size} behaviour shares but the model has '
            f'{params.behavior_count} behaviours.'
        )
    
    return rhs_unchecked(state.as_array(), params, mode)


def rhs_2(infected, x1, params, mode=PT):
    """
    Return ``(di/dt, dx_1/dt)`` of the specialised two-behaviour system in
    which behaviour 2 (conservative) carries no infection risk.
    """
    
    check_mode(mode)
    check_two_behavior(params)
    
    if not 0 <= infected <= 1:
        raise DomainError(f'Infected fraction {infected} lies outside [0, 1].')
    
    if not 0 <= x1 <= 1:
        raise DomainError(f'Behaviour share x1 = {x1} lies outside [0, 1].')
    
    return _rhs_2_raw(float(infected), float(x1), params, mode)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Sampled solution of the mean-field system. Row ``k`` of ``states`` holds
    ``(i, x_1, ..., x_M)`` at ``times[k]``.
    """
    
    times: np.ndarray
    states: np.ndarray
    dt: float
    steps: int
    max_drift: float
    converged: bool
    
    def __len__(self):
        
        return len(self.times)
    
    @property
    def infected(self):
        
        return self.states[:, 0]
    
    @property
    def shares(self):
        
        return self.states[:, 1:]
    
    @property
    def final(self):
        
        return SystemState.from_array(self.states[-1])
    
    def to_frame(self):
        """
        Return the trajectory as a ``pandas.DataFrame`` with columns
        ``t, i, x1, ..., xM``.
        """
        
        columns = ['i'] + [f'x{j}' for j in range(1, self.states.shape[1])]
        frame = pd.DataFrame(self.states, columns=columns)
        frame.insert(0, 't', self.times)
        
        return frame


def integrate(state, params, mode=PT, dt=DEFAULT_DT, horizon=1000.0, stride=1, until_steady=False,
              steady_tol=STEADY_TOL, patience=STEADY_PATIENCE):
    """
    Integrate the co-evolution system from ``state`` with the classical
    fixed-step fourth-order Runge-Kutta scheme.
    
    After every step the behaviour shares are renormalised onto the simplex
    and ``i`` is clamped to ``[0, 1]``. The largest pre-renormalisation drift
    is recorded on the returned trajectory.
    
    With ``until_steady=True``, integration stops early once the max-norm of
    the derivative stays below ``steady_tol`` for ``patience`` consecutive
    steps.
    
    :param state: The initial :class:`~coevo.model.SystemState`.
    :param params: The :class:`~coevo.model.ModelParams`.
    :param mode: ``EUT`` or ``PT``.
    :param dt: The step size.
    :param horizon: The final time ``T``.
    :param stride: Keep every ``stride``-th step in the output (the final
        state is always kept).
    :return: A :class:`Trajectory`.
    """
    
    check_mode(mode)
    
    if not dt > 0:
        raise PreconditionError(f'Step size dt must be positive, got {dt}.')
    
    if not horizon >= dt:
        raise PreconditionError(f'Horizon T = {horizon} must be at least dt = {dt}.')
    
    if stride < 1:
        raise PreconditionError(f'Stride must be at least 1, got {stride}.')
    
    if not isinstance(state, SystemState):
        state = SystemState.from_array(state)
    
    if state.shares.size != params.behavior_count:
        raise DomainError(
            f'State has {state.shares.size} behaviour shares but the model has '
            f'{params.behavior_count} behaviours.'
        )
    
    if is_two_behavior(params):
        derivative = _two_behavior_derivative
    else:
        derivative = rhs_unchecked
    
    total_steps = int(math.floor(horizon / dt + 1e-9))
    y = state.as_array()
    
    times = [0.0]
    rows = [y.copy()]
    max_drift = 0.0
    calm = 0
    converged = False
    step = 0
    
    for step in range(1, total_steps + 1):
        k1 = derivative(y, params, mode)
        if not np.all(np.isfinite(k1)):
            raise IntegrationError(f'Non-finite derivative at step {step}.', step=step)
        
        if until_steady:
            calm = calm + 1 if np.max(np.abs(k1)) < steady_tol else 0
        
        k2 = derivative(y + 0.5 * dt * k1, params, mode)
        k3 = derivative(y + 0.5 * dt * k2, params, mode)
        k4 = derivative(y + dt * k3, params, mode)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        
        if not np.all(np.isfinite(y)):
            raise IntegrationError(f'Non-finite state at step {step}.', step=step)
        
        drift = abs(y[1:].sum() - 1)
        if drift > DRIFT_LIMIT:
            raise IntegrationError(f'Simplex drift {drift:.3g} at step {step} exceeds {DRIFT_LIMIT}.', step=step)
        
        max_drift = max(max_drift, drift)
        
        y[0] = _clamp(y[0])
        shares = np.clip(y[1:], 0, None)
        y[1:] = shares / shares.sum()
        
        if until_steady and calm >= patience:
            converged = True
        
        if converged or step % stride == 0 or step == total_steps:
            times.append(step * dt)
            rows.append(y.copy())
        
        if converged:
            logger.debug('Reached a steady state at t = %g after %d steps', step * dt, step)
            break
        
        if step % PROGRESS_EVERY == 0:
            logger.debug('Integrated %d of %d steps, i = %.6g', step, total_steps, y[0])
    
    if max_drift > DRIFT_WARNING:
        logger.warning('Largest simplex drift per step was %.3g', max_drift)
    
    return Trajectory(
        times=np.array(times),
        states=np.array(rows),
        dt=dt,
        steps=step,
        max_drift=max_drift,
        converged=converged
    )
