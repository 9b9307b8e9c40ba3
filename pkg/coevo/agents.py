"""
Agent-based simulation of the co-evolution process on a pair of regular
networks: a contact network carrying the SIS epidemic and an information
network carrying behaviour imitation.

One call to :func:`step` advances one time unit, in three synchronous
phases: infection, recovery, imitation.
"""

import logging
import math
from dataclasses import dataclass
from multiprocessing import Pool

import networkx as nx
import numpy as np
import pandas as pd

from coevo.exceptions import NetworkError, PreconditionError
from coevo.model import PT, check_mode, imitation_prob, payoffs

logger = logging.getLogger(__name__)

REGULAR = 'regular'
RANDOM = 'random'
TOPOLOGIES = (REGULAR, RANDOM)

DEFAULT_INITIAL_INFECTED = 0.05


@dataclass(frozen=True, eq=False)
class RegularNetwork:
    """
    An undirected regular network without self-loops. ``neighbors`` is an
    ``N x degree`` array of neighbour indices, ``adjacency`` the same
    structure as a sparse matrix.
    """
    
    graph: nx.Graph
    neighbors: np.ndarray
    adjacency: object
    
    @property
    def node_count(self):
        
        return self.neighbors.shape[0]
    
    @property
    def degree(self):
        
        return self.neighbors.shape[1]
    
    def write_edge_list(self, path):
        """
        Write the network to ``path`` as whitespace-separated node pairs, one
        edge per line.
        """
        
        nx.write_edgelist(self.graph, path, data=False)


def _from_graph(graph, degree):
    
    nodes = range(graph.number_of_nodes())
    neighbors = [sorted(graph.neighbors(v)) for v in nodes]
    
    for v, adjacent in enumerate(neighbors):
        if len(adjacent) != degree:
            raise NetworkError(f'Node {v} has {len(adjacent)} neighbours, expected {degree}.')
    
    adjacency = nx.to_scipy_sparse_array(graph, nodelist=nodes, format='csr', dtype=float)
    
    return RegularNetwork(graph, np.array(neighbors, dtype=int), adjacency)


def check_network(nodes, degree, topology=REGULAR):
    """
    Raise ``NetworkError`` unless a ``degree``-regular network of the given
    ``topology`` exists on ``nodes`` nodes.
    """
    
    if topology == REGULAR:
        if degree < 2 or degree % 2:
            raise NetworkError(f'Lattice degree must be even and at least 2, got {degree}.')
        
        if degree >= nodes:
            raise NetworkError(f'Degree {degree} must be smaller than the node count {nodes}.')
    elif not 1 <= degree < nodes or (nodes * degree) % 2:
        raise NetworkError(f'No {degree}-regular network exists on {nodes} nodes.')


def build_regular(nodes, degree):
    """
    Build the ring lattice on ``nodes`` nodes in which node ``v`` is adjacent
    to ``v +/- 1, ..., v +/- degree/2`` modulo ``nodes``.
    
    :raises NetworkError: if ``degree`` is odd, below 2 or not below
        ``nodes``.
    """
    
    check_network(nodes, degree, REGULAR)
    
    graph = nx.circulant_graph(nodes, range(1, degree // 2 + 1))
    
    return _from_graph(graph, degree)


def build_random_regular(nodes, degree, rng):
    """
    Build a uniformly random ``degree``-regular network on ``nodes`` nodes,
    seeded from ``rng``.
    
    :raises NetworkError: if no such network exists.
    """
    
    check_network(nodes, degree, RANDOM)
    
    seed = int(rng.integers(2 ** 32))
    graph = nx.random_regular_graph(degree, nodes, seed=seed)
    
    return _from_graph(graph, degree)


def build_network(nodes, degree, topology=REGULAR, rng=None):
    
    if topology == REGULAR:
        return build_regular(nodes, degree)
    
    if topology == RANDOM:
        return build_random_regular(nodes, degree, rng or np.random.default_rng())
    
    raise PreconditionError(f'Unknown topology "{topology}", expected one of: {", ".join(TOPOLOGIES)}.')


@dataclass(frozen=True, eq=False)
class Population:
    """
    The health and behaviour of every agent. An infected agent keeps its
    behaviour until it recovers.
    """
    
    infected: np.ndarray
    behavior: np.ndarray
    
    @property
    def size(self):
        
        return self.infected.size
    
    @property
    def infected_fraction(self):
        
        return float(self.infected.mean())
    
    def shares(self, behavior_count):
        """
        Return the behaviour shares among susceptible agents, or among all
        agents if none is susceptible.
        """
        
        pool = self.behavior[~self.infected]
        if pool.size == 0:
            pool = self.behavior
        
        counts = np.bincount(pool, minlength=behavior_count)
        
        return counts / counts.sum()


def initial_population(nodes, shares, rng, initial_infected=DEFAULT_INITIAL_INFECTED):
    """
    Draw a population: ``round(initial_infected * nodes)`` agents infected
    uniformly at random, behaviours drawn independently from ``shares``.
    """
    
    shares = np.asarray(shares, dtype=float)
    if np.any(shares < 0) or not math.isclose(shares.sum(), 1, abs_tol=1e-9):
        raise PreconditionError('Initial behaviour shares must be non-negative and sum to 1.')
    
    if not 0 <= initial_infected <= 1:
        raise PreconditionError(f'Initial infected fraction must lie in [0, 1], got {initial_infected}.')
    
    infected = np.zeros(nodes, dtype=bool)
    infected[rng.choice(nodes, size=round(initial_infected * nodes), replace=False)] = True
    behavior = rng.choice(shares.size, size=nodes, p=shares / shares.sum())
    
    return Population(infected, behavior)


def _infect(population, contact, params, rng):
    
    exposure = contact.adjacency @ population.infected.astype(float)
    beta = params.betas[population.behavior]
    
    # Independent Bernoulli(beta_j) per infected contact
    prob = 1 - (1 - beta) ** exposure
    hit = (rng.random(population.size) < prob) & ~population.infected
    
    return population.infected | hit


def _recover(population, infected, params, rng):
    
    behavior = population.behavior.copy()
    recovering = population.infected & (rng.random(population.size) < params.gamma)
    
    if np.any(recovering):
        shares = Population(infected, behavior).shares(params.behavior_count)
        behavior[recovering] = rng.choice(shares.size, size=int(recovering.sum()), p=shares)
    
    return infected & ~recovering, behavior


def _imitate(infected, behavior, info, params, mode, rng):
    
    susceptible = np.flatnonzero(~infected)
    focal_count = int(math.floor(params.decision.focal_fraction * susceptible.size))
    if focal_count == 0:
        return behavior
    
    focal = rng.choice(susceptible, size=focal_count, replace=False)
    
    eligible = ~infected[info.neighbors[focal]]
    available = eligible.sum(axis=1)
    
    # Pick the k-th susceptible neighbour, k uniform over those available
    pick = np.floor(rng.random(focal_count) * available).astype(int)
    column = np.argmax(np.cumsum(eligible, axis=1) > pick[:, None], axis=1)
    neighbor = info.neighbors[focal, column]
    
    active = available > 0
    focal, neighbor = focal[active], neighbor[active]
    
    u = payoffs(float(infected.mean()), params, mode)
    decision = params.decision
    prob = imitation_prob(u[behavior[focal]], u[behavior[neighbor]], decision.selection_strength, params.u_max)
    switch = rng.random(focal.size) < prob
    
    # Synchronous: every focal agent copies the pre-imitation snapshot
    updated = behavior.copy()
    updated[focal[switch]] = behavior[neighbor[switch]]
    
    return updated


def step(population, contact, info, params, mode, rng):
    """
    Advance the population by one time unit.
    
    1. Each susceptible agent with behaviour ``j`` is infected independently
       by each infected contact with probability ``beta_j``.
    2. Each agent infected at the start of the step recovers with
       probability ``gamma`` and draws a behaviour from the susceptible
       behaviour shares.
    3. A random ``m`` fraction of susceptible agents each consult one random
       susceptible information neighbour and copy its behaviour with the
       imitation probability. Agents without such a neighbour skip.
    
    :return: The new :class:`Population`.
    """
    
    for name, network in (('contact', contact), ('information', info)):
        if network.node_count != population.size:
            raise PreconditionError(
                f'The {name} network has {network.node_count} nodes but the population has {population.size} agents.'
            )
    
    infected = _infect(population, contact, params, rng)
    infected, behavior = _recover(population, infected, params, rng)
    behavior = _imitate(infected, behavior, info, params, mode, rng)
    
    return Population(infected, behavior)


@dataclass(frozen=True, eq=False)
class SimulationRun:
    """
    The sampled series of one run: infected fraction and susceptible
    behaviour shares at ``t = 0, 1, ..., T``.
    """
    
    run: int
    times: np.ndarray
    infected: np.ndarray
    shares: np.ndarray
    
    @property
    def final_infected(self):
        
        return float(self.infected[-1])


def simulate(params, contact, info, horizon, rng, mode=PT, population=None, initial_shares=None,
             initial_infected=DEFAULT_INITIAL_INFECTED, run=0):
    """
    Run a single simulation for ``horizon`` time units.
    
    :param population: The initial :class:`Population`; drawn with
        :func:`initial_population` if not given.
    :param initial_shares: The initial behaviour shares, uniform by default.
    :return: A :class:`SimulationRun`.
    """
    
    check_mode(mode)
    
    behavior_count = params.behavior_count
    if population is None:
        if initial_shares is None:
            initial_shares = np.full(behavior_count, 1 / behavior_count)
        
        population = initial_population(contact.node_count, initial_shares, rng, initial_infected)
    
    infected = [population.infected_fraction]
    shares = [population.shares(behavior_count)]
    
    for _ in range(int(horizon)):
        population = step(population, contact, info, params, mode, rng)
        infected.append(population.infected_fraction)
        shares.append(population.shares(behavior_count))
    
    return SimulationRun(run, np.arange(len(infected), dtype=float), np.array(infected), np.array(shares))


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    """
    The runs of an ensemble, with pointwise statistics across runs.
    """
    
    seed: int
    runs: list
    
    @property
    def times(self):
        
        return self.runs[0].times
    
    @property
    def infected(self):
        
        return np.array([r.infected for r in self.runs])
    
    @property
    def shares(self):
        
        return np.array([r.shares for r in self.runs])
    
    def to_frame(self):
        """
        Return the pointwise mean and standard deviation over runs as a
        ``pandas.DataFrame`` with columns ``t, i_mean, i_std, x1_mean,
        x1_std, ...``.
        """
        
        infected = self.infected
        shares = self.shares
        
        data = {'t': self.times, 'i_mean': infected.mean(axis=0), 'i_std': infected.std(axis=0)}
        for j in range(shares.shape[2]):
            data[f'x{j + 1}_mean'] = shares[:, :, j].mean(axis=0)
            data[f'x{j + 1}_std'] = shares[:, :, j].std(axis=0)
        
        return pd.DataFrame(data)
    
    def terminals(self):
        """
        Return the final state of every run, one row per run.
        """
        
        rows = []
        for r in self.runs:
            row = {'run': r.run, 'i': r.final_infected}
            row.update({f'x{j + 1}': float(x) for j, x in enumerate(r.shares[-1])})
            rows.append(row)
        
        return pd.DataFrame(rows)


def _run_one(args):
    
    params, run, seed_seq, settings = args
    rng = np.random.default_rng(seed_seq)
    
    contact = settings['contact'] or build_network(settings['nodes'], settings['contact_degree'], RANDOM, rng)
    info = settings['info'] or build_network(settings['nodes'], settings['info_degree'], RANDOM, rng)
    
    result = simulate(
        params, contact, info, settings['horizon'], rng,
        mode=settings['mode'],
        initial_shares=settings['initial_shares'],
        initial_infected=settings['initial_infected'],
        run=run
    )
    logger.debug('Run %d finished with i = %.4f', run, result.final_infected)
    
    return result


def run_ensemble(params, nodes, contact_degree, info_degree, horizon, runs, seed, mode=PT, topology=REGULAR,
                 initial_shares=None, initial_infected=DEFAULT_INITIAL_INFECTED, workers=None):
    """
    Run ``runs`` independent simulations and collect them. Run ``r`` draws
    from ``numpy.random.SeedSequence(seed).spawn(runs)[r]``, so the result is
    determined by ``seed`` whether or not the runs fan out over workers.
    
    With the ``random`` topology each run draws its own pair of networks.
    
    :param workers: Run in this many processes.
    :return: An :class:`EnsembleResult`.
    """
    
    check_mode(mode)
    
    if runs < 1:
        raise PreconditionError(f'At least one run is needed, got {runs}.')
    
    if topology not in TOPOLOGIES:
        raise PreconditionError(f'Unknown topology "{topology}", expected one of: {", ".join(TOPOLOGIES)}.')
    
    settings = {
        'nodes': nodes,
        'contact_degree': contact_degree,
        'info_degree': info_degree,
        'horizon': horizon,
        'mode': mode,
        'initial_shares': initial_shares,
        'initial_infected': initial_infected,
        'contact': None,
        'info': None,
    }
    
    if topology == REGULAR:
        settings['contact'] = build_regular(nodes, contact_degree)
        settings['info'] = build_regular(nodes, info_degree)
    
    children = np.random.SeedSequence(seed).spawn(runs)
    jobs = [(params, r, child, settings) for r, child in enumerate(children)]
    
    if workers and workers > 1 and runs > 1:
        with Pool(workers) as pool:
            results = pool.map(_run_one, jobs)
    else:
        results = [_run_one(job) for job in jobs]
    
    return EnsembleResult(seed, results)
