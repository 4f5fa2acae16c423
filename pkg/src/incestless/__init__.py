"""Bayesian social learning over time-dependent DAGs with data-incest removal."""

from .errors import (
    AvailabilityError,
    ConfigError,
    ConstraintViolationError,
    DagViolationError,
    DegenerateEvidenceError,
    GraphFormatError,
    IncestlessError,
    SignedInfinityError,
    ZeroProbabilityActionError,
)
from .graph import (
    CommGraph,
    TopologySpec,
    augment_for_constraint,
    check_constraint,
    closure_by_inversion,
    compute_weights,
    constraint_report,
    deindex,
    find_clean_seed,
    generate_topology,
    graph_from_edges,
    load_graph,
    reindex,
    save_graph,
    topology_rng,
    transitive_closure,
    validate_dag,
)
from .learning import (
    LogBelief,
    StateModel,
    action_likelihood,
    after_action_update,
    aggregate,
    choose_action,
    default_model,
    estimate_state,
    full_history_belief,
    naive_aggregate,
    normalize_log,
    private_belief,
    quadratic_cost,
    sample_observation,
    triangular_likelihood,
)
from .simulate import (
    MetricsTable,
    NodeRecord,
    RunTrace,
    ScenarioConfig,
    monte_carlo,
    run_once,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
