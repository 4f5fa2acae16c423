"""Belief arithmetic for social learning.

States, observations and actions are 1-based integers externally
(states 1..X, observations 1..Z, actions 1..A); beliefs are numpy
probability vectors indexed 0..X-1.

Log-domain beliefs keep the prior and the accumulated action evidence as
two separate vectors.  The incest-removal weights apply only to the
evidence part; the prior part is always exactly log(prior), so it can
never be double counted no matter what the weights telescope to.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AvailabilityError,
    DegenerateEvidenceError,
    SignedInfinityError,
    ZeroProbabilityActionError,
)

LIKELIHOOD_FLOOR = 1e-300


@dataclass(frozen=True)
class StateModel:
    """Prior, observation likelihood and action cost for one scenario.

    prior:      length-X probability vector over states
    likelihood: X x Z matrix, row i = p(z | x = i)
    cost:       X x A matrix, cost[i, a-1] = C(x=i, a)
    """

    prior: np.ndarray
    likelihood: np.ndarray
    cost: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.prior, dtype=np.float64)
        b = np.asarray(self.likelihood, dtype=np.float64)
        c = np.asarray(self.cost, dtype=np.float64)
        if b.ndim != 2 or b.shape[0] != p.shape[0]:
            raise ValueError("likelihood must have one row per state")
        if c.ndim != 2 or c.shape[0] != p.shape[0]:
            raise ValueError("cost must have one row per state")
        if (b < 0).any() or not np.allclose(b.sum(axis=1), 1.0, atol=1e-12):
            raise ValueError("likelihood rows must be distributions")
        if (p < 0).any() or not np.isclose(p.sum(), 1.0, atol=1e-12):
            raise ValueError("prior must be a distribution")
        for arr in (p, b, c):
            arr.flags.writeable = False
        object.__setattr__(self, "prior", p)
        object.__setattr__(self, "likelihood", b)
        object.__setattr__(self, "cost", c)

    @property
    def num_states(self) -> int:
        return self.prior.shape[0]

    @property
    def num_obs(self) -> int:
        return self.likelihood.shape[1]

    @property
    def num_actions(self) -> int:
        return self.cost.shape[1]

    @property
    def log_prior(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.prior)


def triangular_likelihood(num_states: int, width: int = 3) -> np.ndarray:
    """Row-normalized triangular kernel B(m, j) ~ max(0, width - |m - j|), Z = X."""
    idx = np.arange(num_states)
    b = np.maximum(0.0, width - np.abs(idx[:, None] - idx[None, :]))
    return b / b.sum(axis=1, keepdims=True)


def quadratic_cost(num_states: int, num_actions: int) -> np.ndarray:
    """C(x, a) = (x - g(a))^2 with actions spread evenly over the state range.

    g(a) = a*X/A - (X/A - 1)/2 places the A action targets uniformly over
    1..X (for X=20, A=10: g(a) = 2a - 0.5).
    """
    ratio = num_states / num_actions
    targets = np.arange(1, num_actions + 1) * ratio - (ratio - 1) / 2
    states = np.arange(1, num_states + 1, dtype=np.float64)
    return (states[:, None] - targets[None, :]) ** 2


def default_model(num_states: int = 20, num_actions: int = 10,
                  kernel_width: int = 3) -> StateModel:
    """Uniform prior, triangular observation kernel, quadratic action cost."""
    return StateModel(
        prior=np.full(num_states, 1.0 / num_states),
        likelihood=triangular_likelihood(num_states, kernel_width),
        cost=quadratic_cost(num_states, num_actions),
    )


# ---------------------------------------------------------------------------
# single-node operations

def sample_observation(x: int, model: StateModel, rng: np.random.Generator) -> int:
    """Draw observation z in 1..Z from the likelihood row of true state x."""
    if not 1 <= x <= model.num_states:
        raise ValueError(f"state {x} out of range 1..{model.num_states}")
    return int(rng.choice(model.num_obs, p=model.likelihood[x - 1])) + 1


def private_belief(pub: np.ndarray, z: int, model: StateModel) -> np.ndarray:
    """Bayes update of the public belief with observation z."""
    if not 1 <= z <= model.num_obs:
        raise ValueError(f"observation {z} out of range 1..{model.num_obs}")
    unnorm = pub * model.likelihood[:, z - 1]
    total = unnorm.sum()
    if total == 0:
        raise DegenerateEvidenceError(
            f"observation {z} has zero probability under the public belief support"
        )
    return unnorm / total


def choose_action(mu: np.ndarray, model: StateModel) -> int:
    """Action (1..A) minimizing expected cost under mu; ties -> lowest index.

    Ties are detected with a small relative tolerance: a symmetric belief
    under a symmetric cost produces exactly tied expected costs, and the
    constrained and benchmark pipelines reach that belief through different
    summation orders.  Without the tolerance, float noise of order 1e-16
    would break such ties differently in the two pipelines.
    """
    costs = mu @ model.cost
    cmin = costs.min()
    tol = 1e-9 * max(1.0, abs(cmin))
    return int(np.argmax(costs <= cmin + tol)) + 1


def action_likelihood(pub: np.ndarray, a: int, model: StateModel,
                      floor_zero_likelihood: bool = True) -> np.ndarray:
    """Per-state log-likelihood of action a given the public belief.

    p(a | x=m, pub) = sum_j 1[agent observing j would pick a] * B(m, j).
    The indicator reuses the same expected-cost argmin (and tie rule) the
    simulated agents use, evaluated on the same normalized private belief.
    """
    if not 1 <= a <= model.num_actions:
        raise ValueError(f"action {a} out of range 1..{model.num_actions}")
    lik = np.zeros(model.num_states)
    for j in range(model.num_obs):
        unnorm = pub * model.likelihood[:, j]
        total = unnorm.sum()
        if total == 0:
            # observation impossible under the public belief: the private
            # belief limit is the public belief itself (prior dominance)
            mu = pub
        else:
            # same arithmetic as private_belief, so the indicator sees the
            # exact floats the simulated agent acted on (the tie tolerance
            # in choose_action is not scale invariant)
            mu = unnorm / total
        if choose_action(mu, model) == a:
            lik += model.likelihood[:, j]
    if not lik.any():
        raise ZeroProbabilityActionError(
            f"action {a} is not selectable under any observation"
        )
    if floor_zero_likelihood:
        return np.log(np.maximum(lik, LIKELIHOOD_FLOOR))
    with np.errstate(divide="ignore"):
        return np.log(lik)


def after_action_update(pub: np.ndarray, a: int, model: StateModel,
                        floor_zero_likelihood: bool = True) -> np.ndarray:
    """Public belief updated with the evidence carried by action a."""
    nu = action_likelihood(pub, a, model, floor_zero_likelihood)
    with np.errstate(divide="ignore"):
        return normalize_log(np.log(pub) + nu)


# ---------------------------------------------------------------------------
# log-domain aggregation

@dataclass(frozen=True)
class LogBelief:
    """After-action public belief in log domain, prior and evidence split.

    log_prior + evidence is the unnormalized log posterior.  evidence is a
    weighted sum of action log-likelihood vectors (nu's).
    """

    log_prior: np.ndarray
    evidence: np.ndarray

    def log_posterior(self) -> np.ndarray:
        return self.log_prior + self.evidence

    def belief(self) -> np.ndarray:
        return normalize_log(self.log_posterior())


def normalize_log(theta: np.ndarray) -> np.ndarray:
    """exp-normalize an unnormalized log-probability vector."""
    m = np.max(theta)
    if not np.isfinite(m):
        raise ValueError("log-belief has no finite entry")
    p = np.exp(theta - m)
    return p / p.sum()


def aggregate(received: dict[int, LogBelief], weights: np.ndarray,
              nu: np.ndarray, log_prior: np.ndarray,
              node: int | str = "?") -> LogBelief:
    """Fuse received after-action log-beliefs with weights and add own nu.

    received maps sender node -> LogBelief; weights[i] (0-based entry for
    node i+1) must have its nonzero support covered by received.  Only the
    evidence parts are weighted; the prior part of the result is exactly
    log_prior again, which is what makes the prior appear exactly once in
    the fused posterior.
    """
    w = np.asarray(weights, dtype=np.float64)
    needed = {int(i) + 1 for i in np.flatnonzero(w)}
    missing = needed - set(received)
    if missing:
        raise AvailabilityError(node=node, missing=missing)
    evidence = nu.astype(np.float64).copy()
    for node in sorted(needed):
        coeff = w[node - 1]
        term = received[node].evidence
        if coeff < 0 and np.isneginf(term).any():
            raise SignedInfinityError(
                f"negative weight {coeff} applied to -inf evidence from node {node}"
            )
        evidence += coeff * term
    return LogBelief(log_prior=log_prior, evidence=evidence)


def naive_aggregate(received: dict[int, LogBelief], b_n: np.ndarray,
                    nu: np.ndarray, log_prior: np.ndarray) -> LogBelief:
    """Incest-afflicted baseline: unit weight on every received log-belief."""
    return aggregate(received, np.asarray(b_n, dtype=np.float64), nu, log_prior)


def full_history_belief(nus: dict[int, np.ndarray], t_n: np.ndarray,
                        nu: np.ndarray, log_prior: np.ndarray) -> LogBelief:
    """Idealized benchmark: sum the nu of every node with a path in, plus own.

    nus maps node -> log action-likelihood vector; t_n[i] (0-based entry
    for node i+1) marks path existence.
    """
    evidence = nu.astype(np.float64).copy()
    for i in np.flatnonzero(t_n):
        evidence += nus[int(i) + 1]
    return LogBelief(log_prior=log_prior, evidence=evidence)


def estimate_state(belief: np.ndarray, rule: str = "mean") -> float:
    """Scalar state estimate from a belief; states carry labels 1..X."""
    if rule == "map":
        return float(np.argmax(belief) + 1)
    if rule == "mean":
        return float(belief @ np.arange(1, belief.shape[0] + 1))
    raise ValueError(f"unknown estimate rule {rule!r}")
