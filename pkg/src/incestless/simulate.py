"""Protocol runs over a communication graph, in up to four modes.

Modes:
  naive      constrained learning, received log-beliefs fused with unit
             weights (data incest occurs)
  removal    constrained learning with the optimal incest-removal weights
  idealized  full-action-history benchmark (free of incest by construction)
  obs_oracle observation-level oracle: posterior from the raw observations
             of every node with a path in (comparison curve only; stronger
             information than the action-history benchmark)

Within a run, all modes share the same observation sequence, so any
difference between their traces is attributable to aggregation alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import graph as graphmod
from . import learning
from .errors import ConfigError, ConstraintViolationError, DegenerateEvidenceError
from .graph import CommGraph, TopologySpec
from .learning import LogBelief, StateModel

MODES = ("naive", "removal", "idealized", "obs_oracle")


@dataclass(frozen=True)
class ScenarioConfig:
    model: StateModel
    topology: TopologySpec
    true_state: int | str = "random"
    modes: tuple[str, ...] = ("naive", "removal", "idealized")
    runs: int = 100
    seed: int = 0
    estimate_rule: str = "mean"
    force: bool = False
    floor_zero_likelihood: bool = True

    def __post_init__(self):
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        unknown = set(self.modes) - set(MODES)
        if unknown:
            raise ConfigError(f"unknown modes: {sorted(unknown)}")
        if self.true_state != "random":
            if not 1 <= int(self.true_state) <= self.model.num_states:
                raise ConfigError(
                    f"true_state {self.true_state} out of range "
                    f"1..{self.model.num_states}"
                )
        if self.estimate_rule not in ("map", "mean"):
            raise ConfigError(f"unknown estimate rule {self.estimate_rule!r}")


@dataclass
class NodeRecord:
    node: int
    observation: int
    action: int
    public: np.ndarray
    after: np.ndarray
    estimate: float


@dataclass
class RunTrace:
    true_state: int
    graph_digest: str
    observations: list[int]
    records: dict[str, list[NodeRecord]]


@dataclass
class MetricsTable:
    """Monte Carlo aggregates, plus the full per-run estimate/action arrays."""

    num_nodes: int
    modes: tuple[str, ...]
    true_states: np.ndarray                 # (runs,)
    estimates: dict[str, np.ndarray]        # mode -> (runs, N)
    actions: dict[str, np.ndarray]          # mode -> (runs, N) int
    constraint: dict[int, list[int]]
    mean_estimate: dict[str, np.ndarray] = field(init=False)
    mse: dict[str, np.ndarray] = field(init=False)
    action_hist: dict[str, np.ndarray] = field(init=False)

    def __post_init__(self):
        self.mean_estimate = {m: e.mean(axis=0) for m, e in self.estimates.items()}
        self.mse = {
            m: ((e - self.true_states[:, None]) ** 2).mean(axis=0)
            for m, e in self.estimates.items()
        }
        self.action_hist = {}
        for m, acts in self.actions.items():
            amax = int(acts.max())
            hist = np.zeros((self.num_nodes, amax), dtype=np.int64)
            for n in range(self.num_nodes):
                counts = np.bincount(acts[:, n], minlength=amax + 1)
                hist[n] = counts[1:]
            self.action_hist[m] = hist


def node_weights(graph: CommGraph) -> list[np.ndarray]:
    """Incest-removal weight vector for every node (index n-1 -> w_n)."""
    return [graphmod.compute_weights(graph, n) for n in range(1, graph.size + 1)]


def run_once(config: ScenarioConfig, graph: CommGraph, rng: np.random.Generator,
             weights: list[np.ndarray] | None = None,
             constraint: dict[int, list[int]] | None = None) -> RunTrace:
    """Execute one protocol run over the graph, all configured modes in lockstep."""
    model = config.model
    modes = config.modes
    floor = config.floor_zero_likelihood

    if weights is None:
        weights = node_weights(graph)
    if "removal" in modes:
        if constraint is None:
            constraint = graphmod.constraint_report(graph)
        if constraint and not config.force:
            raise ConstraintViolationError(constraint)

    if config.true_state == "random":
        x = int(rng.choice(model.num_states, p=model.prior)) + 1
    else:
        x = int(config.true_state)

    log_prior = model.log_prior
    stored: dict[str, dict[int, LogBelief]] = {m: {} for m in modes}
    nus_ideal: dict[int, np.ndarray] = {}
    observations: list[int] = []
    records: dict[str, list[NodeRecord]] = {m: [] for m in modes}

    for n in range(1, graph.size + 1):
        t_n, b_n = graph.extract_t_b(n)
        neighbors = graph.in_neighbors(n)
        z = learning.sample_observation(x, model, rng)
        observations.append(z)

        for mode in modes:
            if mode == "removal":
                w = weights[n - 1].astype(np.float64)
                if config.force:
                    # drop coefficients whose log-belief never arrives
                    w = w * b_n
                received = {i: stored[mode][i] for i in neighbors}
                agg = learning.aggregate(
                    received, w, np.zeros(model.num_states), log_prior, node=n
                )
            elif mode == "naive":
                received = {i: stored[mode][i] for i in neighbors}
                agg = learning.naive_aggregate(
                    received, b_n, np.zeros(model.num_states), log_prior
                )
            elif mode == "idealized":
                agg = learning.full_history_belief(
                    nus_ideal, t_n, np.zeros(model.num_states), log_prior
                )
            else:  # obs_oracle
                with np.errstate(divide="ignore"):
                    evidence = np.zeros(model.num_states)
                    for i in np.flatnonzero(t_n):
                        evidence += np.log(
                            np.maximum(model.likelihood[:, observations[int(i)] - 1],
                                       learning.LIKELIHOOD_FLOOR)
                        )
                agg = LogBelief(log_prior=log_prior, evidence=evidence)

            pub = agg.belief()
            try:
                mu = learning.private_belief(pub, z, model)
            except DegenerateEvidenceError:
                # far-from-truth beliefs can underflow to exact zeros and
                # make the drawn observation "impossible"; fall back to the
                # public belief, matching the indicator inside
                # action_likelihood so agent and administrator agree
                mu = pub
            a = learning.choose_action(mu, model)

            if mode == "obs_oracle":
                after_evidence = agg.evidence + np.log(
                    np.maximum(model.likelihood[:, z - 1], learning.LIKELIHOOD_FLOOR)
                )
            else:
                nu = learning.action_likelihood(pub, a, model, floor)
                after_evidence = agg.evidence + nu
            after_lb = LogBelief(log_prior=log_prior, evidence=after_evidence)
            after = after_lb.belief()

            if mode in ("removal", "naive"):
                stored[mode][n] = after_lb
            elif mode == "idealized":
                nus_ideal[n] = nu

            records[mode].append(NodeRecord(
                node=n, observation=z, action=a, public=pub, after=after,
                estimate=learning.estimate_state(after, config.estimate_rule),
            ))

    return RunTrace(true_state=x, graph_digest=graph.digest(),
                    observations=observations, records=records)


def build_graph(config: ScenarioConfig) -> CommGraph:
    """Graph realization for a scenario; deterministic in the scenario seed."""
    ss = np.random.SeedSequence(config.seed)
    topo_ss = ss.spawn(1)[0]
    return graphmod.generate_topology(config.topology, np.random.default_rng(topo_ss))


def monte_carlo(config: ScenarioConfig, graph: CommGraph | None = None) -> MetricsTable:
    """Replicated runs with per-run seeds derived from the master seed.

    Seed scheme: SeedSequence(seed) spawns runs+1 children; child 0 drives
    topology generation, child r (1-based) drives run r.  Any single run
    is therefore reproducible standalone.
    """
    ss = np.random.SeedSequence(config.seed)
    children = ss.spawn(config.runs + 1)
    if graph is None:
        graph = graphmod.generate_topology(
            config.topology, np.random.default_rng(children[0])
        )

    weights = node_weights(graph)
    constraint = graphmod.constraint_report(graph)
    if "removal" in config.modes and constraint and not config.force:
        raise ConstraintViolationError(constraint)

    n = graph.size
    estimates = {m: np.zeros((config.runs, n)) for m in config.modes}
    actions = {m: np.zeros((config.runs, n), dtype=np.int64) for m in config.modes}
    true_states = np.zeros(config.runs)

    for r in range(config.runs):
        trace = run_once(config, graph, np.random.default_rng(children[r + 1]),
                         weights=weights, constraint=constraint)
        true_states[r] = trace.true_state
        for m in config.modes:
            estimates[m][r] = [rec.estimate for rec in trace.records[m]]
            actions[m][r] = [rec.action for rec in trace.records[m]]

    return MetricsTable(num_nodes=n, modes=config.modes, true_states=true_states,
                        estimates=estimates, actions=actions, constraint=constraint)
