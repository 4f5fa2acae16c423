"""Command-line front end.

Subcommands:
  run                execute a scenario config, write CSV outputs
  report-constraint  check the topological constraint for a config's graph
  gen-graph          write a generated topology as an edge-list file
  closure            inspect closure, weights and constraint of a graph file

Scenario configs are YAML; bundled paper-style configs (paper_chain41,
paper_complete, paper_star, paper_random4) can be referenced by name.
The environment variable INCESTLESS_SEED overrides the config seed; the
--seed option overrides both.
"""

from __future__ import annotations

import importlib.resources
import os
import sys

import click
import numpy as np
import yaml

from . import graph as graphmod
from . import learning, simulate
from .errors import ConfigError, ConstraintViolationError, IncestlessError
from .graph import TopologySpec

_TOPOLOGY_KEYS = {"kind", "agents", "epochs", "delays", "path"}
_MODEL_KEYS = {"states", "actions", "kernel_width", "prior", "likelihood", "cost"}
_TOP_KEYS = {"topology", "model", "true_state", "modes", "runs", "seed",
             "estimate_rule", "force", "floor_zero_likelihood", "output_dir"}


def _reject_unknown(mapping, allowed, where):
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


def load_config_file(name_or_path: str) -> dict:
    """Load a YAML config from a path, or a bundled config by name."""
    if os.path.exists(name_or_path):
        with open(name_or_path) as f:
            raw = yaml.safe_load(f)
    else:
        resource = importlib.resources.files("incestless") / "configs" / f"{name_or_path}.yaml"
        if not resource.is_file():
            raise ConfigError(f"config {name_or_path!r}: no such file or bundled config")
        raw = yaml.safe_load(resource.read_text())
    if not isinstance(raw, dict):
        raise ConfigError(f"config {name_or_path!r} is not a mapping")
    return raw


def build_model(raw: dict) -> learning.StateModel:
    _reject_unknown(raw, _MODEL_KEYS, "model")
    states = int(raw.get("states", 20))
    actions = int(raw.get("actions", 10))
    width = int(raw.get("kernel_width", 3))

    prior = raw.get("prior", "uniform")
    if prior == "uniform":
        prior = np.full(states, 1.0 / states)
    else:
        prior = np.asarray(prior, dtype=np.float64)
    likelihood = raw.get("likelihood")
    if likelihood is None:
        likelihood = learning.triangular_likelihood(states, width)
    else:
        likelihood = np.asarray(likelihood, dtype=np.float64)
    cost = raw.get("cost")
    if cost is None:
        cost = learning.quadratic_cost(states, actions)
    else:
        cost = np.asarray(cost, dtype=np.float64)
    try:
        return learning.StateModel(prior=prior, likelihood=likelihood, cost=cost)
    except ValueError as e:
        raise ConfigError(f"invalid model: {e}")


def build_scenario(raw: dict, seed_override: int | None = None,
                   **overrides) -> simulate.ScenarioConfig:
    _reject_unknown(raw, _TOP_KEYS, "config")
    topo_raw = dict(raw.get("topology", {}))
    _reject_unknown(topo_raw, _TOPOLOGY_KEYS, "topology")
    if "delays" in topo_raw:
        topo_raw["delays"] = tuple(topo_raw["delays"])
    if "kind" not in topo_raw:
        raise ConfigError("topology.kind is required")
    topology = TopologySpec(**topo_raw)
    model = build_model(dict(raw.get("model", {})))

    seed = raw.get("seed", 0)
    env_seed = os.environ.get("INCESTLESS_SEED")
    if env_seed is not None:
        seed = int(env_seed)
    if seed_override is not None:
        seed = seed_override

    kwargs = dict(
        model=model,
        topology=topology,
        true_state=raw.get("true_state", "random"),
        modes=tuple(raw.get("modes", ("naive", "removal", "idealized"))),
        runs=int(raw.get("runs", 100)),
        seed=int(seed),
        estimate_rule=raw.get("estimate_rule", "mean"),
        force=bool(raw.get("force", False)),
        floor_zero_likelihood=bool(raw.get("floor_zero_likelihood", True)),
    )
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    return simulate.ScenarioConfig(**kwargs)


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def write_outputs(metrics: simulate.MetricsTable, out_dir: str) -> None:
    """Emit the long-format CSVs and the constraint report (LF line endings)."""
    os.makedirs(out_dir, exist_ok=True)

    with open(os.path.join(out_dir, "actions.csv"), "w", newline="\n") as f:
        f.write("node,mode,run,action\n")
        for mode in metrics.modes:
            acts = metrics.actions[mode]
            for n in range(metrics.num_nodes):
                for r in range(acts.shape[0]):
                    f.write(f"{n + 1},{mode},{r + 1},{acts[r, n]}\n")

    with open(os.path.join(out_dir, "estimates.csv"), "w", newline="\n") as f:
        f.write("node,mode,mean_estimate\n")
        for mode in metrics.modes:
            for n in range(metrics.num_nodes):
                f.write(f"{n + 1},{mode},{_fmt(metrics.mean_estimate[mode][n])}\n")

    with open(os.path.join(out_dir, "mse.csv"), "w", newline="\n") as f:
        f.write("node,mode,mse\n")
        for mode in metrics.modes:
            for n in range(metrics.num_nodes):
                f.write(f"{n + 1},{mode},{_fmt(metrics.mse[mode][n])}\n")

    with open(os.path.join(out_dir, "constraint.txt"), "w", newline="\n") as f:
        if not metrics.constraint:
            f.write("all nodes satisfy the topological constraint\n")
        else:
            for n in sorted(metrics.constraint):
                idx = " ".join(str(j) for j in metrics.constraint[n])
                f.write(f"node {n}: violation at {idx}\n")


@click.group()
def main():
    """Bayesian social learning with optimal data-incest removal."""


@main.command("run")
@click.argument("config")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--runs", type=int, default=None, help="Override the run count.")
@click.option("--modes", default=None,
              help="Comma-separated mode list (naive,removal,idealized,obs_oracle).")
@click.option("--output-dir", default=None, help="Output directory (default: out).")
@click.option("--force", is_flag=True, default=False,
              help="Run removal mode even if the topological constraint is violated.")
def cmd_run(config, seed, runs, modes, output_dir, force):
    """Run a scenario and write actions.csv, estimates.csv, mse.csv, constraint.txt."""
    try:
        raw = load_config_file(config)
        out_dir = output_dir or raw.get("output_dir", "out")
        overrides = {"runs": runs, "force": True if force else None}
        if modes:
            overrides["modes"] = tuple(modes.split(","))
        scenario = build_scenario(raw, seed_override=seed, **overrides)
        metrics = simulate.monte_carlo(scenario)
    except ConstraintViolationError as e:
        click.echo(f"error: {e} (use --force to run anyway)", err=True)
        sys.exit(2)
    except (IncestlessError, yaml.YAMLError, TypeError, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    write_outputs(metrics, out_dir)
    click.echo(f"wrote {out_dir}/actions.csv, estimates.csv, mse.csv, constraint.txt")


@main.command("report-constraint")
@click.argument("config")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
def cmd_report_constraint(config, seed):
    """Print the per-node topological constraint status for a config's graph."""
    try:
        raw = load_config_file(config)
        scenario = build_scenario(raw, seed_override=seed)
        graph = simulate.build_graph(scenario)
        report = graphmod.constraint_report(graph)
    except (IncestlessError, yaml.YAMLError, TypeError, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    for n in range(2, graph.size + 1):
        if n in report:
            idx = " ".join(str(j) for j in report[n])
            click.echo(f"node {n}: violation at {idx}")
        else:
            click.echo(f"node {n}: satisfied")
    if report:
        sys.exit(2)


@main.command("gen-graph")
@click.argument("kind")
@click.option("--seed", type=int, default=0)
@click.option("--agents", type=int, default=6)
@click.option("--epochs", type=int, default=4)
@click.option("--out", required=True, type=click.Path())
def cmd_gen_graph(kind, seed, agents, epochs, out):
    """Generate a topology and write it as an edge-list file."""
    try:
        spec = TopologySpec(kind=kind, agents=agents, epochs=epochs)
        graph = graphmod.generate_topology(spec, np.random.default_rng(seed))
        graphmod.save_graph(graph, out)
    except (IncestlessError, OSError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    click.echo(f"wrote {out} ({graph.size} nodes)")


@main.command("closure")
@click.argument("graph_file", type=click.Path())
def cmd_closure(graph_file):
    """Print the transitive closure and per-node t, b, w, constraint status."""
    try:
        graph = graphmod.load_graph(graph_file)
    except (IncestlessError, OSError, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    click.echo("closure:")
    for row in graph.closure:
        click.echo(" ".join(str(int(v)) for v in row))
    for n in range(1, graph.size + 1):
        t_n, b_n = graph.extract_t_b(n)
        w = graphmod.compute_weights(graph, n)
        bad = graphmod.check_constraint(w, b_n)
        status = "OK" if not bad else "violation at " + " ".join(map(str, bad))
        click.echo(
            f"node {n}: t={list(map(int, t_n))} b={list(map(int, b_n))} "
            f"w={list(map(int, w))} constraint {status}"
        )


if __name__ == "__main__":
    main()
