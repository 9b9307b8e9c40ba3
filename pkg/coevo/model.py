"""
Model parameters and decision kernels: value functions, the probability
weighting function, perceived payoffs under expected utility theory (EUT)
and prospect theory (PT), and pairwise imitation probabilities.

All functions are pure and safe to call concurrently.
"""

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from coevo.exceptions import DomainError, OutOfScaleError, PreconditionError

EUT = 'EUT'
PT = 'PT'
MODES = (EUT, PT)

DEFAULT_SIGMA = 0.65
DEFAULT_LAMBDA = 1.0

# Tolerance on the behaviour-share simplex and on k_bar * beta * i <= 1
SIMPLEX_TOL = 1e-12
PROBABILITY_TOL = 1e-12


def check_mode(mode):
    
    if mode not in MODES:
        raise PreconditionError(f'Unknown decision mode "{mode}", expected one of: {", ".join(MODES)}.')
    
    return mode


def _check_curvature(sigma, lam):
    
    if not 0 < sigma <= 1:
        raise PreconditionError(f'Value curvature sigma must lie in (0, 1], got {sigma}.')
    
    if not lam >= 0:
        raise PreconditionError(f'Loss sensitivity lambda must be non-negative, got {lam}.')


def value(x, sigma=DEFAULT_SIGMA, lam=DEFAULT_LAMBDA, mode=EUT):
    """
    Return the perceived value of the actual payoff ``x``: ``x ** sigma`` for
    gains and ``-lam * (-x) ** sigma`` for losses. EUT and PT share this form
    when configured identically, so ``mode`` only needs to be valid.
    
    Accepts a scalar or an array of payoffs.
    
    :param x: The actual payoff(s).
    :param sigma: The curvature of the value function, in ``(0, 1]``.
    :param lam: The loss sensitivity, ``>= 0``.
    :param mode: ``EUT`` or ``PT``.
    :return: The perceived payoff(s).
    """
    
    check_mode(mode)
    _check_curvature(sigma, lam)
    
    if np.ndim(x) == 0:
        x = float(x)
        if not math.isfinite(x):
            raise DomainError(f'Payoff must be finite, got {x}.')
        
        if x >= 0:
            return x ** sigma
        
        return -lam * (-x) ** sigma
    
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError('Payoffs must be finite.')
    
    magnitude = np.abs(x) ** sigma
    
    return np.where(x >= 0, magnitude, -lam * magnitude)


def value_derivative(x, sigma=DEFAULT_SIGMA, lam=DEFAULT_LAMBDA):
    """
    Return the derivative of :func:`value` at the scalar payoff ``x``. The
    derivative is infinite at ``x = 0`` when ``sigma < 1``.
    """
    
    _check_curvature(sigma, lam)
    
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f'Payoff must be finite, got {x}.')
    
    if x == 0:
        return 1.0 if sigma == 1 else math.inf
    
    if x > 0:
        return sigma * x ** (sigma - 1)
    
    return lam * sigma * (-x) ** (sigma - 1)


@dataclass(frozen=True)
class PowerValue:
    """
    The default value function, ``u(x) = x ** sigma`` for gains and
    ``-lam * (-x) ** sigma`` for losses.
    
    Any object with the same ``__call__(x)`` and ``derivative(x)`` interface,
    monotone increasing and passing through the origin, can be supplied as
    ``DecisionParams.value_function`` instead.
    """
    
    sigma: float = DEFAULT_SIGMA
    lam: float = DEFAULT_LAMBDA
    
    def __post_init__(self):
        
        _check_curvature(self.sigma, self.lam)
    
    def __call__(self, x):
        
        return value(x, self.sigma, self.lam)
    
    def derivative(self, x):
        
        return value_derivative(x, self.sigma, self.lam)


def _check_alpha(alpha):
    
    if not 0 < alpha <= 1:
        raise DomainError(f'Rationality coefficient alpha must lie in (0, 1], got {alpha}.')


def _check_probability(p):
    
    # Written to also reject NaN
    if not 0 <= p <= 1:
        raise DomainError(f'Probability {p} lies outside [0, 1].')


def weight(p, alpha):
    """
    Return the perceived probability ``exp(-(-ln p) ** alpha)``. By
    definition ``weight(0, alpha) = 0`` and ``weight(1, alpha) = 1``. With
    ``alpha = 1`` the input is returned unchanged.
    
    Accepts a scalar or an array of probabilities.
    
    :param p: The actual probability, in ``[0, 1]``.
    :param alpha: The rationality coefficient, in ``(0, 1]``.
    :return: The perceived probability.
    """
    
    _check_alpha(alpha)
    
    if np.ndim(p) == 0:
        p = float(p)
        _check_probability(p)
        
        if alpha == 1 or p == 1 or p == 0:
            return p
        
        return math.exp(-(-math.log(p)) ** alpha)
    
    p = np.asarray(p, dtype=float)
    if not np.all((p >= 0) & (p <= 1)):
        raise DomainError('Probabilities must lie in [0, 1].')
    
    if alpha == 1:
        return p.copy()
    
    out = p.copy()
    interior = (p > 0) & (p < 1)
    out[interior] = np.exp(-(-np.log(p[interior])) ** alpha)
    
    return out


def weight_dp(p, alpha):
    """
    Return the derivative of :func:`weight` with respect to the scalar
    probability ``p``. Infinite at ``p = 0`` and ``p = 1`` when ``alpha < 1``.
    """
    
    _check_alpha(alpha)
    p = float(p)
    _check_probability(p)
    
    if alpha == 1:
        return 1.0
    
    if p == 0 or p == 1:
        return math.inf
    
    log_term = -math.log(p)
    w = math.exp(-log_term ** alpha)
    
    return alpha * log_term ** (alpha - 1) * w / p


def weight_dalpha(p, alpha):
    """
    Return the derivative of :func:`weight` with respect to ``alpha`` at the
    scalar probability ``p``: negative below ``1/e``, positive above it.
    """
    
    _check_alpha(alpha)
    p = float(p)
    _check_probability(p)
    
    if p == 0 or p == 1:
        return 0.0
    
    log_term = -math.log(p)
    powered = log_term ** alpha
    
    return -powered * math.log(log_term) * math.exp(-powered)


def perceived_risk(p, alpha, mode):
    """
    Return the infection risk perceived by a decision maker: the actual
    probability ``p`` under EUT, ``weight(p, alpha)`` under PT.
    """
    
    if check_mode(mode) == EUT:
        if np.ndim(p) == 0:
            p = float(p)
            _check_probability(p)
            return p
        
        return np.asarray(p, dtype=float).copy()
    
    return weight(p, alpha)


@dataclass(frozen=True)
class BehaviorSpec:
    """
    A behaviour available to susceptible individuals, with the infection rate
    per infected contact and the intrinsic payoff of adopting it.
    """
    
    infection_rate: float
    intrinsic_payoff: float
    
    def __post_init__(self):
        
        if not self.infection_rate >= 0 or not math.isfinite(self.infection_rate):
            raise PreconditionError(f'Infection rate must be finite and non-negative, got {self.infection_rate}.')
        
        if not math.isfinite(self.intrinsic_payoff):
            raise PreconditionError(f'Intrinsic payoff must be finite, got {self.intrinsic_payoff}.')


@dataclass(frozen=True)
class EpidemicParams:
    """
    Epidemic and network parameters: recovery rate ``gamma``, contact-network
    degree ``k_bar``, information-network degree ``d_bar`` and the ordered
    behaviours.
    
    ``d_bar`` enters no mean-field equation; only the agent simulator uses it.
    """
    
    recovery_rate: float
    contact_degree: float
    behaviors: tuple
    info_degree: float = 1
    
    def __post_init__(self):
        
        object.__setattr__(self, 'behaviors', tuple(self.behaviors))
        
        if not 0 < self.recovery_rate <= 1:
            raise PreconditionError(f'Recovery rate gamma must lie in (0, 1], got {self.recovery_rate}.')
        
        if not self.contact_degree >= 1:
            raise PreconditionError(f'Contact degree k_bar must be at least 1, got {self.contact_degree}.')
        
        if not self.info_degree >= 1:
            raise PreconditionError(f'Information degree d_bar must be at least 1, got {self.info_degree}.')
        
        if len(self.behaviors) < 2:
            raise PreconditionError(f'At least two behaviours are required, got {len(self.behaviors)}.')
        
        for index, behavior in enumerate(self.behaviors, start=1):
            if not isinstance(behavior, BehaviorSpec):
                raise PreconditionError(f'Behaviour {index} is not a BehaviorSpec.')
            
            # The infection probability k_bar * beta * i must remain a probability
            if self.contact_degree * behavior.infection_rate > 1 + PROBABILITY_TOL:
                raise PreconditionError(
                    f'Behaviour {index} has k_bar * beta = '
                    f'{self.contact_degree * behavior.infection_rate:.6g} > 1.'
                )


@dataclass(frozen=True)
class DecisionParams:
    """
    Decision-making parameters: the infection loss ``c_n``, rationality
    coefficient ``alpha``, value-function shape (``sigma``, ``lambda``),
    focal fraction ``m``, selection strength ``omega`` and the payoff
    normalisation term ``U_max``.
    
    ``payoff_scale=None`` is resolved by :class:`ModelParams` to
    :func:`default_payoff_scale`.
    """
    
    infection_loss: float
    rationality: float = 1.0
    value_curvature: float = DEFAULT_SIGMA
    loss_sensitivity: float = DEFAULT_LAMBDA
    focal_fraction: float = 1.0
    selection_strength: float = 1.0
    payoff_scale: float = None
    value_function: object = field(default=None, repr=False)
    
    def __post_init__(self):
        
        if not self.infection_loss < 0 or not math.isfinite(self.infection_loss):
            raise PreconditionError(f'Infection loss c_n must be finite and negative, got {self.infection_loss}.')
        
        if not 0 < self.rationality <= 1:
            raise PreconditionError(f'Rationality alpha must lie in (0, 1], got {self.rationality}.')
        
        _check_curvature(self.value_curvature, self.loss_sensitivity)
        
        if not 0 < self.focal_fraction <= 1:
            raise PreconditionError(f'Focal fraction m must lie in (0, 1], got {self.focal_fraction}.')
        
        if not 0 < self.selection_strength <= 1:
            raise PreconditionError(f'Selection strength omega must lie in (0, 1], got {self.selection_strength}.')
        
        if self.payoff_scale is not None and not self.payoff_scale > 0:
            raise PreconditionError(f'Payoff scale U_max must be positive, got {self.payoff_scale}.')
        
        if self.value_function is not None:
            vf = self.value_function
            if not callable(vf) or not callable(getattr(vf, 'derivative', None)):
                raise PreconditionError('A value function must be callable and provide derivative().')
            
            if vf(0.0) != 0:
                raise PreconditionError('A value function must pass through the origin.')
    
    @cached_property
    def value_fn(self):
        
        if self.value_function is not None:
            return self.value_function
        
        return PowerValue(self.value_curvature, self.loss_sensitivity)


def default_payoff_scale(behaviors, decision):
    """
    Return the default normalisation term ``U_max``: the spread of the
    perceived intrinsic payoffs plus the absolute perceived infection loss.
    This bounds the perceived payoff gap between any two behaviours at any
    infection level, so imitation probabilities stay in ``[0, 1]``.
    """
    
    u = decision.value_fn
    values = [u(b.intrinsic_payoff) for b in behaviors]
    
    return max(values) - min(values) + abs(u(decision.infection_loss))


@dataclass(frozen=True)
class ModelParams:
    """
    The full parameter set of the co-evolution model. Derived quantities
    (``k0``, perceived payoffs) are computed once and cached.
    """
    
    epidemic: EpidemicParams
    decision: DecisionParams
    
    def __post_init__(self):
        
        if self.decision.payoff_scale is None:
            scale = default_payoff_scale(self.epidemic.behaviors, self.decision)
            object.__setattr__(self, 'decision', replace(self.decision, payoff_scale=scale))
        
        if not self.k0 > 0:
            raise PreconditionError(f'Derived k0 = m * omega / U_max must be positive, got {self.k0}.')
    
    @property
    def behavior_count(self):
        
        return len(self.epidemic.behaviors)
    
    @property
    def gamma(self):
        
        return self.epidemic.recovery_rate
    
    @property
    def k_bar(self):
        
        return self.epidemic.contact_degree
    
    @property
    def alpha(self):
        
        return self.decision.rationality
    
    @property
    def u_max(self):
        
        return self.decision.payoff_scale
    
    @cached_property
    def k0(self):
        
        d = self.decision
        
        return d.focal_fraction * d.selection_strength / d.payoff_scale
    
    @cached_property
    def betas(self):
        
        return np.array([b.infection_rate for b in self.epidemic.behaviors])
    
    @cached_property
    def payoffs(self):
        
        return np.array([b.intrinsic_payoff for b in self.epidemic.behaviors])
    
    @cached_property
    def intrinsic_values(self):
        
        u = self.decision.value_fn
        
        return np.array([u(c) for c in self.payoffs])
    
    @cached_property
    def loss_value(self):
        
        return self.decision.value_fn(self.decision.infection_loss)
    
    def with_decision(self, **changes):
        """
        Return a copy with the given ``DecisionParams`` fields replaced. The
        resolved ``U_max``, and therefore ``k0``, is carried over unless
        ``payoff_scale`` is itself among the changes. The ``with_*`` behaviour
        helpers carry it over in the same way.
        """
        
        return ModelParams(self.epidemic, replace(self.decision, **changes))
    
    def with_behaviors(self, behaviors):
        
        return ModelParams(replace(self.epidemic, behaviors=tuple(behaviors)), self.decision)
    
    def with_infection_rate(self, index, infection_rate):
        
        behaviors = list(self.epidemic.behaviors)
        behaviors[index] = replace(behaviors[index], infection_rate=infection_rate)
        
        return self.with_behaviors(behaviors)
    
    def with_payoffs(self, payoffs):
        
        behaviors = [
            replace(b, intrinsic_payoff=c) for b, c in zip(self.epidemic.behaviors, payoffs)
        ]
        
        return self.with_behaviors(behaviors)


def make_params(beta, c, c_n, gamma, k_bar, d_bar=None, alpha=1.0, sigma=DEFAULT_SIGMA,
                lam=DEFAULT_LAMBDA, m=1.0, omega=1.0, u_max=None, value_function=None):
    """
    Build :class:`ModelParams` from flat values, using the same names as the
    experiment configuration keys.
    
    :param beta: Infection rates, one per behaviour.
    :param c: Intrinsic payoffs, one per behaviour.
    :param d_bar: Information-network degree, defaults to ``k_bar``.
    :return: The validated parameter set.
    """
    
    if len(beta) != len(c):
        raise PreconditionError(f'Got {len(beta)} infection rates but {len(c)} payoffs.')
    
    behaviors = tuple(BehaviorSpec(float(b), float(p)) for b, p in zip(beta, c))
    epidemic = EpidemicParams(
        recovery_rate=gamma,
        contact_degree=k_bar,
        behaviors=behaviors,
        info_degree=k_bar if d_bar is None else d_bar
    )
    decision = DecisionParams(
        infection_loss=c_n,
        rationality=alpha,
        value_curvature=sigma,
        loss_sensitivity=lam,
        focal_fraction=m,
        selection_strength=omega,
        payoff_scale=u_max,
        value_function=value_function
    )
    
    return ModelParams(epidemic, decision)


@dataclass(frozen=True, eq=False)
class SystemState:
    """
    The infected fraction ``i`` and the behaviour shares ``x_1..x_M``.
    """
    
    infected: float
    shares: np.ndarray
    
    def __post_init__(self):
        
        shares = np.array(self.shares, dtype=float)
        object.__setattr__(self, 'shares', shares)
        object.__setattr__(self, 'infected', float(self.infected))
        
        if not 0 <= self.infected <= 1:
            raise DomainError(f'Infected fraction {self.infected} lies outside [0, 1].')
        
        if shares.ndim != 1 or shares.size < 2:
            raise DomainError('Behaviour shares must be a vector of at least two entries.')
        
        if np.any(shares < 0) or not np.all(np.isfinite(shares)):
            raise DomainError('Behaviour shares must be finite and non-negative.')
        
        if abs(shares.sum() - 1) > SIMPLEX_TOL:
            raise DomainError(f'Behaviour shares sum to {shares.sum():.15g}, not 1.')
    
    @classmethod
    def from_array(cls, values):
        
        values = np.asarray(values, dtype=float)
        
        return cls(values[0], values[1:])
    
    def as_array(self):
        
        return np.concatenate(([self.infected], self.shares))


def infection_probability(infection_rate, infected, k_bar):
    """
    Return the probability ``k_bar * beta * i`` that a susceptible individual
    is infected in one time unit. Raise ``DomainError`` if the approximation
    leaves ``[0, 1]``.
    """
    
    p = k_bar * infection_rate * infected
    if np.ndim(p) == 0:
        if p > 1 + PROBABILITY_TOL:
            raise DomainError(f'Infection probability k_bar * beta * i = {p:.6g} exceeds 1.')
        
        return min(float(p), 1.0)
    
    if np.any(p > 1 + PROBABILITY_TOL):
        raise DomainError('Infection probability k_bar * beta * i exceeds 1.')
    
    return np.minimum(p, 1.0)


def utility(behavior_index, infected, params, mode=PT):
    """
    Return the perceived payoff of behaviour ``behavior_index`` at infected
    fraction ``infected``: ``u(c_j) + u(c_n) * k_bar * beta_j * i`` under EUT,
    with the infection probability passed through :func:`weight` under PT.
    """
    
    if not 0 <= infected <= 1:
        raise DomainError(f'Infected fraction {infected} lies outside [0, 1].')
    
    behavior = params.epidemic.behaviors[behavior_index]
    p = infection_probability(behavior.infection_rate, infected, params.k_bar)
    risk = perceived_risk(p, params.alpha, mode)
    
    return params.intrinsic_values[behavior_index] + params.loss_value * risk


def payoffs(infected, params, mode=PT):
    """
    Return the perceived payoffs of all behaviours at infected fraction
    ``infected``, as an array. Element ``j`` equals
    ``utility(j, infected, params, mode)``.
    """
    
    p = infection_probability(params.betas, infected, params.k_bar)
    risk = perceived_risk(p, params.alpha, mode)
    
    return params.intrinsic_values + params.loss_value * risk


def imitation_prob(u_self, u_other, omega, u_max):
    """
    Return the probability that a focal individual with perceived payoff
    ``u_self`` adopts the behaviour of a neighbour with payoff ``u_other``:
    ``1/2 + (omega/2) * (u_other - u_self) / u_max``.
    
    The advantaged side is computed directly and the disadvantaged side as its
    complement, so ``imitation_prob(a, b) + imitation_prob(b, a) == 1``
    exactly. Accepts scalars or arrays.
    
    :raises OutOfScaleError: if ``|u_other - u_self| > u_max``.
    """
    
    if not u_max > 0:
        raise PreconditionError(f'Payoff scale U_max must be positive, got {u_max}.')
    
    gap = np.subtract(u_other, u_self)
    magnitude = np.abs(gap)
    if np.any(magnitude > u_max * (1 + PROBABILITY_TOL)):
        raise OutOfScaleError(
            f'Payoff gap {float(np.max(magnitude)):.6g} exceeds U_max = {u_max:.6g}; '
            'choose a larger payoff scale.'
        )
    
    advantaged = np.minimum(0.5 + omega * magnitude / (2 * u_max), 1.0)
    prob = np.where(gap >= 0, advantaged, 1.0 - advantaged)
    
    if np.ndim(prob) == 0:
        return float(prob)
    
    return prob
