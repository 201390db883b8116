"""Gossip-based dominant-value voting: simulator, observer metrics, forecast replay."""

from .engine import SimState, TickEvents, Trajectory, init, run, run_state, step
from .forecast import (
    VARIANTS,
    Comparison,
    DatasetError,
    EvalReport,
    ForecastDataset,
    GossipParams,
    VariantSpec,
    compare_cell,
    compare_report,
    evaluate,
    evaluate_variant,
    load_dataset,
    mae,
    run_variant,
)
from .integration import VoteSet, consensus_value, dominant_value, mixed_integrate
from .metrics import (
    TickMetrics,
    clustering_gap,
    convergence_tick,
    steady_change_rate,
    tick_metrics,
    trajectory_metrics,
)
from .model import (
    AgentState,
    ConfigError,
    FriendGraph,
    KnowledgeValue,
    SimConfig,
    make_friend_graph,
    select_target,
)
from .scenario import (
    Scenario,
    load_scenario,
    parse_grid,
    save_scenario,
    simulate_scenario,
    sweep_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "AgentState",
    "Comparison",
    "ConfigError",
    "DatasetError",
    "EvalReport",
    "ForecastDataset",
    "FriendGraph",
    "GossipParams",
    "KnowledgeValue",
    "Scenario",
    "SimConfig",
    "SimState",
    "TickEvents",
    "TickMetrics",
    "Trajectory",
    "VARIANTS",
    "VariantSpec",
    "VoteSet",
    "clustering_gap",
    "compare_cell",
    "compare_report",
    "consensus_value",
    "convergence_tick",
    "dominant_value",
    "evaluate",
    "evaluate_variant",
    "init",
    "load_dataset",
    "load_scenario",
    "mae",
    "make_friend_graph",
    "mixed_integrate",
    "parse_grid",
    "run",
    "run_state",
    "run_variant",
    "save_scenario",
    "select_target",
    "simulate_scenario",
    "steady_change_rate",
    "step",
    "sweep_scenario",
    "tick_metrics",
    "trajectory_metrics",
]
