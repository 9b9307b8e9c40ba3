"""
Behaviour guidance: choose an intervention on rationality and perceived
payoffs that steers the prospect-theory steady state into a target region
``i <= i_max``, ``x_1 >= x_min``, or as close to it as possible.

The steady state is treated as an implicit function of the intervention
through the interior steady-state equation, and the penalised objective is
minimised by momentum gradient descent with a logarithmic barrier keeping
the intervention inside its domain.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from multiprocessing import Pool

import numpy as np
from scipy.stats import qmc

from coevo.exceptions import (
    ConstraintViolationError,
    DescentError,
    DomainError,
    PreconditionError,
    SteadyStateError,
)
from coevo.meanfield import check_two_behavior
from coevo.model import weight, weight_dalpha, weight_dp
from coevo.steady import CASE1, CASE2, CASE3, NO_STEADY_STATE, ROOT_FLOOR, bisect, classify_pt

logger = logging.getLogger(__name__)

FEASIBLE = 'Feasible'
INFEASIBLE = 'Infeasible'
VARIANTS = (FEASIBLE, INFEASIBLE)

# Starting nudge off the boundary alpha = 1 and off the kink of u at 0
INTERIOR_NUDGE = 1e-6

# Upper end of the extended root bracket; x_1 diverges at i = 1
ROOT_CEILING = 1 - 1e-9

CURVE_TOL = 1e-8
PROGRESS_EVERY = 1000


def penalty(x):
    """
    Return the exterior penalty ``max(0, x) ** 2``.
    """
    
    return max(x, 0.0) ** 2


def _penalty_slope(x):
    
    return 2 * max(x, 0.0)


@dataclass(frozen=True)
class InterventionVector:
    """
    Changes to the rationality coefficient, infection loss, risky payoff and
    conservative payoff.
    """
    
    d_alpha: float = 0.0
    d_cn: float = 0.0
    d_c1: float = 0.0
    d_c2: float = 0.0
    
    @classmethod
    def from_array(cls, values):
        
        return cls(*(float(v) for v in values))
    
    def as_array(self):
        
        return np.array([self.d_alpha, self.d_cn, self.d_c1, self.d_c2])
    
    @property
    def norm(self):
        
        return float(np.linalg.norm(self.as_array()))
    
    def is_interior(self, params):
        """
        Return ``True`` if ``0 < alpha + d_alpha < 1`` and
        ``c_n + d_cn < 0``.
        """
        
        alpha = params.alpha + self.d_alpha
        
        return 0 < alpha < 1 and params.decision.infection_loss + self.d_cn < 0
    
    def apply(self, params):
        """
        Return ``params`` with the intervention applied. ``U_max``, and so
        ``k0``, keeps its unguided value.
        """
        
        c1, c2 = params.payoffs
        adjusted = params.with_payoffs([c1 + self.d_c1, c2 + self.d_c2])
        
        return adjusted.with_decision(
            rationality=params.alpha + self.d_alpha,
            infection_loss=params.decision.infection_loss + self.d_cn
        )
    
    def as_dict(self):
        
        return {'d_alpha': self.d_alpha, 'd_cn': self.d_cn, 'd_c1': self.d_c1, 'd_c2': self.d_c2}


@dataclass(frozen=True)
class ConstraintTarget:
    
    i_max: float
    x_min: float
    
    def __post_init__(self):
        
        if not 0 <= self.i_max <= 1:
            raise PreconditionError(f'Target i_max must lie in [0, 1], got {self.i_max}.')
        
        if not 0 <= self.x_min <= 1:
            raise PreconditionError(f'Target x_min must lie in [0, 1], got {self.x_min}.')


@dataclass(frozen=True)
class OptimizerConfig:
    """
    Hyperparameters of the guidance optimiser.
    
    :func:`momentum_descent` does not always run ``max_iters`` steps: it
    stops as soon as the loss range over the last ``window`` iterations is
    within ``atol + rtol * |loss|``, and ``max_iters`` only caps the run.
    Set ``window`` to ``max_iters`` or more for a fixed-length descent.
    
    After a descent that leaves a constraint violated by more than
    ``constraint_tolerance``, the penalty weight is multiplied by
    ``penalty_growth``, the learning rate divided by it, and the descent
    resumed, for at most ``max_rounds`` rounds in total.
    """
    
    penalty_weight: float = 100.0
    barrier_scale: float = 1000.0
    momentum: float = 0.9
    learning_rate: float = 1e-3
    max_iters: int = 20000
    window: int = 1000
    rtol: float = 1e-7
    atol: float = 1e-12
    max_halvings: int = 60
    max_rounds: int = 4
    penalty_growth: float = 10.0
    constraint_tolerance: float = 1e-5
    starts: int = 1
    workers: int = None
    
    def __post_init__(self):
        
        for name in ('penalty_weight', 'barrier_scale', 'learning_rate', 'penalty_growth'):
            if not getattr(self, name) > 0:
                raise PreconditionError(f'Optimizer {name} must be positive, got {getattr(self, name)}.')
        
        if not 0 <= self.momentum < 1:
            raise PreconditionError(f'Optimizer momentum must lie in [0, 1), got {self.momentum}.')
        
        for name in ('max_iters', 'window', 'max_rounds', 'starts'):
            if getattr(self, name) < 1:
                raise PreconditionError(f'Optimizer {name} must be at least 1, got {getattr(self, name)}.')
        
        if self.max_halvings < 0:
            raise PreconditionError(f'Optimizer max_halvings must be non-negative, got {self.max_halvings}.')


def _squared_norm(delta):
    
    return float(delta @ delta), 2 * delta


@dataclass(frozen=True)
class GuidanceCost:
    """
    The loss terms of the guidance objective. Each callable returns a
    ``(value, derivative)`` pair.
    
    ``pandemic_loss(i)`` and ``behavior_loss(x1)`` replace the default
    penalty (feasible targets) or squared distance (infeasible targets) to
    the target. ``intervention_loss(delta)`` defaults to the squared 2-norm
    and must be smallest at zero and grow away from it in every component.
    """
    
    intervention_loss: object = _squared_norm
    pandemic_loss: object = None
    behavior_loss: object = None
    check_points: int = field(default=32, repr=False)
    
    def __post_init__(self):
        
        rng = np.random.default_rng(0)
        base, _ = self.intervention_loss(np.zeros(4))
        
        for delta in rng.uniform(-1, 1, size=(self.check_points, 4)):
            value, slope = self.intervention_loss(delta)
            if value < base:
                raise PreconditionError('The intervention loss must be smallest at zero intervention.')
            
            if np.any(np.asarray(slope) * delta < 0):
                raise PreconditionError('The intervention loss must grow away from zero in every component.')


@dataclass(frozen=True)
class Loss:
    """
    Breakdown of the guidance objective at one intervention, with the
    steady state ``(infected, x1)`` it induces. ``constraint`` is the value
    whose sign separates interior steady states (``<= 0``) from maximum
    spread. ``total`` is infinite outside the barrier's domain, with the
    reason in ``diagnostic``.
    """
    
    total: float
    pandemic: float = math.nan
    behavior: float = math.nan
    intervention: float = math.nan
    barrier: float = math.nan
    constraint_penalty: float = math.nan
    infected: float = math.nan
    x1: float = math.nan
    constraint: float = math.nan
    diagnostic: str = None
    
    @property
    def guidance(self):
        """
        The objective without the barrier and its constraint penalty.
        """
        
        return self.pandemic + self.behavior + self.intervention
    
    def as_dict(self):
        
        return {
            'total': self.total,
            'pandemic': self.pandemic,
            'behavior': self.behavior,
            'intervention': self.intervention,
            'barrier': self.barrier,
            'constraint_penalty': self.constraint_penalty,
            'i': self.infected,
            'x1': self.x1,
            'constraint': self.constraint,
        }


def steady_curve(infected, params):
    """
    Return the risky share ``gamma / ((1 - i) k_bar beta_1)`` at which the
    infected fraction ``i`` is stationary.
    """
    
    check_two_behavior(params)
    
    kb = params.k_bar * params.betas[0]
    if not kb > 0:
        raise PreconditionError('The steady curve needs k_bar * beta_1 > 0.')
    
    if not 0 <= infected < 1:
        raise DomainError(f'The steady curve is undefined at i = {infected}.')
    
    return params.gamma / ((1 - infected) * kb)


def feasibility(target, params):
    """
    Return ``True`` if some steady state on the steady curve meets the
    target, i.e. ``x_min <= min(1, steady_curve(i_max))``. Without an endemic
    steady state the epidemic dies out at ``(0, 1)``, which meets any target.
    """
    
    check_two_behavior(params)
    
    kb = params.k_bar * params.betas[0]
    if kb <= params.gamma:
        return True
    
    best = 1.0 if target.i_max >= 1 else min(1.0, steady_curve(target.i_max, params))
    
    return target.x_min <= best + 1e-12


class GuidanceProblem:
    """
    The guidance objective for one target and parameter set, as a function
    of the intervention ``delta = [d_alpha, d_cn, d_c1, d_c2]``.
    
    Evaluations are cached on the intervention, so a loss followed by a
    gradient at the same point solves the steady state once.
    """
    
    def __init__(self, target, params, cost=None, config=None, variant=FEASIBLE):
        
        check_two_behavior(params)
        
        if variant not in VARIANTS:
            raise PreconditionError(f'Unknown objective variant "{variant}", expected one of: {", ".join(VARIANTS)}.')
        
        self.target = target
        self.params = params
        self.cost = cost or GuidanceCost()
        self.config = config or OptimizerConfig()
        self.variant = variant
        
        self.kb = params.k_bar * params.betas[0]
        self.gamma = params.gamma
        self.k0 = params.k0
        self.u = params.decision.value_fn
        
        self.margin = self.kb - self.gamma
        if not 0 < self.margin <= 1:
            raise PreconditionError(f'Guidance needs 0 < k_bar * beta_1 - gamma <= 1, got {self.margin:.6g}.')
        
        self.base = np.array([params.alpha, params.decision.infection_loss, *params.payoffs])
        self._cache = {}
    
    def with_penalty_weight(self, penalty_weight, learning_rate):
        
        config = replace(self.config, penalty_weight=penalty_weight, learning_rate=learning_rate)
        
        return GuidanceProblem(self.target, self.params, self.cost, config, self.variant)
    
    def is_interior(self, delta):
        
        alpha, c_n = self.base[:2] + np.asarray(delta)[:2]
        
        return 0 < alpha < 1 and c_n < 0
    
    def _target_terms(self, infected, x1):
        
        mu = self.config.penalty_weight
        target = self.target
        
        if self.cost.pandemic_loss:
            pandemic = self.cost.pandemic_loss(infected)
        elif self.variant == FEASIBLE:
            pandemic = (
                mu * (penalty(infected - target.i_max) + penalty(-infected)),
                mu * (_penalty_slope(infected - target.i_max) - _penalty_slope(-infected))
            )
        else:
            pandemic = ((infected - target.i_max) ** 2, 2 * (infected - target.i_max))
        
        if self.cost.behavior_loss:
            behavior = self.cost.behavior_loss(x1)
        elif self.variant == FEASIBLE:
            behavior = (
                mu * (penalty(target.x_min - x1) + penalty(x1 - 1)),
                mu * (_penalty_slope(x1 - 1) - _penalty_slope(target.x_min - x1))
            )
        else:
            behavior = ((x1 - target.x_min) ** 2, 2 * (x1 - target.x_min))
        
        return pandemic, behavior
    
    def _compute(self, delta):
        
        alpha, c_n, c1, c2 = self.base + delta
        kb, k0, u = self.kb, self.k0, self.u
        
        if not (0 < alpha < 1 and c_n < 0):
            return Loss(math.inf, diagnostic=f'alpha = {alpha:.6g}, c_n = {c_n:.6g} is outside 0 < alpha < 1, c_n < 0'), None
        
        u_n = u(c_n)
        gap = u(c1) - u(c2)
        
        def drive(x):
            
            return k0 * u_n * weight(kb * x, alpha) - kb * x + k0 * gap
        
        if not drive(ROOT_FLOOR) > 0 or not drive(ROOT_CEILING) < 0:
            raise ConstraintViolationError(
                f'No interior steady state for alpha = {alpha:.6g}, c_n = {c_n:.6g}, c_1 = {c1:.6g}, c_2 = {c2:.6g}.'
            )
        
        infected = bisect(drive, ROOT_FLOOR, ROOT_CEILING)
        x1 = self.gamma / ((1 - infected) * kb)
        
        (pandemic, d_pandemic), (behavior, d_behavior) = self._target_terms(infected, x1)
        intervention, d_intervention = self.cost.intervention_loss(np.asarray(delta, dtype=float))
        
        scale = 1 / self.config.barrier_scale
        barrier = -scale * (math.log(1 - alpha) + math.log(alpha) + math.log(-c_n))
        d_barrier = np.array([scale * (1 / (1 - alpha) - 1 / alpha), -scale / c_n, 0.0, 0.0])
        
        du_n, du1, du2 = u.derivative(c_n), u.derivative(c1), u.derivative(c2)
        
        w_margin = weight(self.margin, alpha)
        constraint = k0 * gap - self.margin + k0 * u_n * w_margin
        d_constraint = np.array([k0 * u_n * weight_dalpha(self.margin, alpha), k0 * du_n * w_margin, k0 * du1, -k0 * du2])
        
        mu = self.config.penalty_weight
        constraint_penalty = mu * penalty(constraint)
        
        # Implicit differentiation of the steady-state equation
        p = kb * infected
        d_drive_di = kb * (k0 * u_n * weight_dp(p, alpha) - 1)
        d_drive = np.array([k0 * u_n * weight_dalpha(p, alpha), k0 * du_n * weight(p, alpha), k0 * du1, -k0 * du2])
        d_infected = -d_drive / d_drive_di
        dx1_di = self.gamma / ((1 - infected) ** 2 * kb)
        
        grad = (
            (d_pandemic + d_behavior * dx1_di) * d_infected
            + np.asarray(d_intervention, dtype=float)
            + d_barrier
            + mu * _penalty_slope(constraint) * d_constraint
        )
        
        loss = Loss(
            total=pandemic + behavior + intervention + barrier + constraint_penalty,
            pandemic=pandemic,
            behavior=behavior,
            intervention=intervention,
            barrier=barrier,
            constraint_penalty=constraint_penalty,
            infected=infected,
            x1=x1,
            constraint=constraint
        )
        
        return loss, grad
    
    def breakdown(self, delta):
        """
        Return the :class:`Loss` at ``delta``.
        
        :raises ConstraintViolationError: if the adjusted parameters have no
            interior steady state.
        """
        
        return self._evaluate(delta)[0]
    
    def _evaluate(self, delta):
        
        key = tuple(float(d) for d in delta)
        if key not in self._cache:
            if len(self._cache) > 4:
                self._cache.clear()
            
            self._cache[key] = self._compute(np.array(key))
        
        return self._cache[key]
    
    def evaluate(self, delta):
        """
        Return the objective and its gradient at ``delta``.
        """
        
        loss, grad = self._evaluate(delta)
        
        return loss.total, grad
    
    def violation(self, delta):
        """
        Return the largest amount by which the steady state at ``delta``
        breaks a target constraint (feasible variant only) or leaves the
        interior steady-state region.
        """
        
        loss = self.breakdown(delta)
        worst = max(loss.constraint, 0.0)
        
        if self.variant == FEASIBLE:
            worst = max(
                worst,
                loss.infected - self.target.i_max,
                -loss.infected,
                self.target.x_min - loss.x1,
                loss.x1 - 1
            )
        
        return max(worst, 0.0)


def objective(delta, target, params, cost=None, config=None, variant=FEASIBLE):
    """
    Return the :class:`Loss` of the guidance objective at ``delta``.
    """
    
    return GuidanceProblem(target, params, cost, config, variant).breakdown(np.asarray(delta, dtype=float))


def gradient(delta, target, params, cost=None, config=None, variant=FEASIBLE):
    """
    Return the gradient of the guidance objective at ``delta``.
    """
    
    problem = GuidanceProblem(target, params, cost, config, variant)
    _, grad = problem.evaluate(np.asarray(delta, dtype=float))
    
    if grad is None:
        raise DomainError(problem.breakdown(delta).diagnostic)
    
    return grad


@dataclass(frozen=True, eq=False)
class DescentResult:
    
    delta: np.ndarray
    history: np.ndarray
    iterations: int
    converged: bool
    halvings: int = 0
    
    @property
    def final_loss(self):
        
        return float(self.history[-1])


def _settled(history, config):
    
    if len(history) <= config.window:
        return False
    
    recent = history[-config.window:]
    spread = max(recent) - min(recent)
    
    return spread <= config.atol + config.rtol * abs(history[-1])


def momentum_descent(problem, delta0, config=None):
    """
    Minimise ``problem`` by momentum gradient descent: ``v <- eta v - eps g``
    then ``delta <- delta + v``. A step that leaves the interior, or reaches
    an intervention the problem cannot evaluate, is halved until it is
    acceptable.
    
    The descent ends after ``config.max_iters`` steps, or earlier once the
    loss has settled over the last ``config.window`` steps (see
    :class:`OptimizerConfig`); ``converged`` on the result tells which.
    
    :param problem: Any object with ``evaluate(delta) -> (loss, gradient)``
        and ``is_interior(delta) -> bool``.
    :param delta0: The starting point, which must be interior.
    :param config: An :class:`OptimizerConfig`; defaults to the problem's
        own ``config`` attribute, if any.
    :raises DescentError: if a step cannot be pulled back inside.
    :return: A :class:`DescentResult`.
    """
    
    config = config or getattr(problem, 'config', None) or OptimizerConfig()
    
    delta = np.array(delta0, dtype=float)
    if not problem.is_interior(delta):
        raise PreconditionError(f'The starting point {delta} is not interior.')
    
    loss, grad = problem.evaluate(delta)
    history = [loss]
    velocity = np.zeros_like(delta)
    halvings = 0
    converged = False
    iteration = 0
    
    for iteration in range(1, config.max_iters + 1):
        if not np.all(np.isfinite(grad)):
            raise DescentError(f'Non-finite gradient at iteration {iteration}: {grad}.')
        
        velocity = config.momentum * velocity - config.learning_rate * grad
        move = velocity
        
        for _ in range(config.max_halvings + 1):
            candidate = delta + move
            if problem.is_interior(candidate):
                try:
                    loss, grad = problem.evaluate(candidate)
                except ConstraintViolationError:
                    pass
                else:
                    break
            
            move = move / 2
            halvings += 1
        else:
            raise DescentError(
                f'Step at iteration {iteration} left the feasible interior after {config.max_halvings} halvings.'
            )
        
        velocity = move
        delta = candidate
        history.append(loss)
        
        if iteration % PROGRESS_EVERY == 0:
            logger.debug('Iteration %d: loss %.10g', iteration, loss)
        
        if _settled(history, config):
            converged = True
            break
    
    return DescentResult(delta, np.array(history), iteration, converged, halvings)


@dataclass(frozen=True, eq=False)
class GuidanceResult:
    """
    The chosen intervention, the steady states before and after it, the
    objective variant used and the loss trace of the winning descent.
    """
    
    delta: InterventionVector
    before: object
    after: object
    variant: str
    history: np.ndarray
    loss: Loss = None
    rounds: int = 0
    penalty_weight: float = math.nan
    
    @property
    def case_trace(self):
        
        return [self.before.case_label, self.after.case_label]
    
    def satisfies(self, target, tol=1e-6):
        
        return self.after.i_star <= target.i_max + tol and self.after.x1_star >= target.x_min - tol
    
    def as_dict(self):
        
        return {
            'delta': self.delta.as_dict(),
            'before': self.before.as_dict(),
            'after': self.after.as_dict(),
            'cases': self.case_trace,
            'variant': self.variant,
            'loss': self.loss.as_dict() if self.loss else None,
            'rounds': self.rounds,
            'penalty_weight': self.penalty_weight,
            'iterations': max(len(self.history) - 1, 0),
        }


def _default_start(params):
    
    start = np.zeros(4)
    if params.alpha == 1:
        start[0] = -INTERIOR_NUDGE
    
    # u has an unbounded slope at zero payoff when sigma < 1
    c1, c2 = params.payoffs
    if c1 == 0:
        start[2] = INTERIOR_NUDGE
    
    if c2 == 0:
        start[3] = -INTERIOR_NUDGE
    
    return start


def _spread_starts(params, count):
    
    start = _default_start(params)
    if count <= 1:
        return [start]
    
    points = qmc.Halton(d=4, scramble=False).random(count)[1:]
    span = max(1.0, *(abs(c) for c in params.payoffs))
    
    starts = [start]
    for h in points:
        d_alpha = start[0] - 0.5 * params.alpha * h[0]
        d_cn = 0.1 * abs(params.decision.infection_loss) * (2 * h[1] - 1)
        d_c1 = 0.1 * span * (2 * h[2] - 1)
        d_c2 = 0.1 * span * (2 * h[3] - 1)
        starts.append(np.array([d_alpha, d_cn, d_c1, d_c2]))
    
    return starts


def _continue(problem, start):
    """
    Descend from ``start``, tightening the penalty while the result still
    breaks a constraint.
    """
    
    config = problem.config
    result = momentum_descent(problem, start)
    history = [result.history]
    rounds = 1
    
    while rounds < config.max_rounds and problem.violation(result.delta) > config.constraint_tolerance:
        growth = config.penalty_growth
        problem = problem.with_penalty_weight(
            problem.config.penalty_weight * growth, problem.config.learning_rate / growth
        )
        logger.info('Raising the penalty weight to %g', problem.config.penalty_weight)
        
        result = momentum_descent(problem, result.delta)
        history.append(result.history[1:])
        rounds += 1
    
    violation = problem.violation(result.delta)
    if violation > config.constraint_tolerance:
        logger.warning('Constraints still violated by %.3g after %d penalty rounds', violation, rounds)
    
    return problem, result, np.concatenate(history), rounds


def _descend(args):
    
    problem, start = args
    
    try:
        return _continue(problem, start)
    except (ConstraintViolationError, PreconditionError) as e:
        logger.warning('Skipping start %s: %s', np.array2string(np.asarray(start), precision=4), e)
        return None


def optimize(target, params, cost=None, config=None):
    """
    Find the behaviour guidance for ``target``.
    
    The unguided steady state decides the search: extinction needs no
    guidance; an interior steady state is moved by descent; at maximum
    spread the descended intervention is kept only if it beats doing
    nothing. The objective uses the feasible (penalty) form when the target
    is reachable on the steady curve and the distance form otherwise.
    
    :param target: The :class:`ConstraintTarget`.
    :param params: Two-behaviour :class:`~coevo.model.ModelParams`.
    :param cost: A :class:`GuidanceCost`.
    :param config: An :class:`OptimizerConfig`.
    :raises SteadyStateError: if the unguided parameters have no steady
        state.
    :return: A :class:`GuidanceResult`.
    """
    
    config = config or OptimizerConfig()
    before = classify_pt(params)
    
    if before.case_label == NO_STEADY_STATE:
        raise SteadyStateError('No steady state exists: k_bar * beta_1 equals gamma.')
    
    variant = FEASIBLE if feasibility(target, params) else INFEASIBLE
    
    if before.case_label == CASE1:
        logger.info('The epidemic dies out without guidance')
        return GuidanceResult(InterventionVector(), before, before, variant, np.zeros(0))
    
    problem = GuidanceProblem(target, params, cost, config, variant)
    jobs = [(problem, start) for start in _spread_starts(params, config.starts)]
    
    if config.workers and config.workers > 1 and len(jobs) > 1:
        with Pool(config.workers) as pool:
            outcomes = pool.map(_descend, jobs)
    else:
        outcomes = [_descend(job) for job in jobs]
    
    outcomes = [o for o in outcomes if o is not None]
    if not outcomes:
        raise ConstraintViolationError('No start admitted an interior steady state.')
    
    # Lowest final loss wins; ties go to the smaller intervention
    final, result, history, rounds = min(
        outcomes, key=lambda o: (round(o[1].final_loss, 12), float(np.linalg.norm(o[1].delta)))
    )
    
    delta = InterventionVector.from_array(result.delta)
    loss = final.breakdown(result.delta)
    after = classify_pt(delta.apply(params))
    
    if before.case_label == CASE2:
        pandemic, behavior = final._target_terms(before.i_star, before.x1_star)
        idle = pandemic[0] + behavior[0] + final.cost.intervention_loss(np.zeros(4))[0]
        if idle <= loss.guidance:
            logger.info('Guidance does not improve on the unguided maximum spread')
            return GuidanceResult(
                InterventionVector(), before, before, variant, history, loss, rounds, final.config.penalty_weight
            )
    
    if after.case_label == CASE3:
        gap = abs(after.x1_star - steady_curve(after.i_star, params))
        if gap > CURVE_TOL:
            logger.warning('Guided steady state is %.3g off the steady curve', gap)
    else:
        logger.warning('Guided steady state is %s, not an interior steady state', after.case_label)
    
    return GuidanceResult(delta, before, after, variant, history, loss, rounds, final.config.penalty_weight)
