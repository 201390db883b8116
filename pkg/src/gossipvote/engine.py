"""Discrete-time scheduler for the gossip voting protocol.

Every tick runs three phases, consuming randomness from the single run RNG
in ascending agent-id order so equal seeds replay byte-for-byte:

1. activation — each agent flips an activation coin; activated agents pick a
   target and stage their *pre-integration* value for delivery,
2. delivery — staged values are appended to target inboxes in sender order,
3. integration — each agent whose inbox holds at least v values votes over
   the first v entries (plus its own value when configured), adopts the
   operator's result, and clears the whole inbox.

Because sends are staged before any integration runs, two agents that message
each other in the same tick exchange their old values (a simultaneous swap),
never the freshly integrated ones.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .integration import VoteSet, consensus_value, dominant_value, mixed_integrate
from .model import AgentState, FriendGraph, KnowledgeValue, SimConfig, make_friend_graph, select_target


@dataclass(slots=True)
class TickEvents:
    """Counts of what happened in one tick."""

    sent: int
    delivered: int
    integrations: int
    changed: int


@dataclass(slots=True)
class SimState:
    config: SimConfig
    agents: list[AgentState]
    graph: FriendGraph
    rng: random.Random

    def snapshot(self) -> np.ndarray:
        """Copy of every agent's current value, indexed by agent id."""
        return np.fromiter(
            (agent.current for agent in self.agents), dtype=np.int64, count=len(self.agents)
        )

    def is_absorbing(self) -> bool:
        """Unanimous values and empty inboxes: nothing can ever change again."""
        first = self.agents[0].current
        return all(a.current == first and not a.inbox for a in self.agents)


@dataclass(slots=True)
class Trajectory:
    """One run's record: value snapshots (initial state included) and tick events.

    snapshots[t] is the population after tick t; len(snapshots) == len(events)+1.
    A run that hit an absorbing state stops early, so trajectories can be
    shorter than the configured horizon.
    """

    snapshots: list[np.ndarray]
    events: list[TickEvents]
    config: SimConfig

    @property
    def n_ticks(self) -> int:
        return len(self.events)


def init(config: SimConfig) -> SimState:
    """Fresh state from a config: friend graph first, then uniform initial values.

    The draw order (graph, then one value per agent in id order) is part of
    the replay contract.
    """
    rng = random.Random(config.seed)
    graph = make_friend_graph(config.n, config.f, rng, symmetric=config.symmetric_friends)
    agents = [
        AgentState(id=i, current=rng.randint(0, config.k), friends=graph.adjacency[i])
        for i in range(config.n)
    ]
    return SimState(config=config, agents=agents, graph=graph, rng=rng)


def step(state: SimState) -> TickEvents:
    """Advance one tick (all three phases); returns that tick's event counts."""
    cfg = state.config
    rng = state.rng
    rand = rng.random
    agents = state.agents
    solo = cfg.n == 1
    activation = cfg.activation_prob
    friend_prob = cfg.friend_prob
    graph = state.graph

    staged: list[tuple[int, KnowledgeValue]] = []
    for agent in agents:
        if rand() >= activation:
            continue
        if solo:
            continue  # activation coin is still consumed; nobody to message
        target = select_target(agent, graph, friend_prob, rng)
        staged.append((target, agent.current))

    delivered = 0
    for target, value in staged:
        agents[target].inbox.append(value)
        delivered += 1

    v = cfg.v
    include_self = cfg.include_self
    strategy = cfg.strategy
    k = cfg.k
    consensus_prob = cfg.mixed_consensus_prob
    integrations = 0
    changed = 0
    for agent in agents:
        inbox = agent.inbox
        if len(inbox) < v:
            continue
        votes = inbox[:v]
        if include_self:
            votes.append(agent.current)
        vote_set = VoteSet(tuple(votes), own=agent.current)
        if strategy == "dominant":
            result = dominant_value(vote_set)
        elif strategy == "consensus":
            result = consensus_value(vote_set, k)
        else:
            result = mixed_integrate(vote_set, k, consensus_prob, rng)
        integrations += 1
        if result != agent.current:
            agent.current = result
            changed += 1
        inbox.clear()
    return TickEvents(sent=len(staged), delivered=delivered, integrations=integrations, changed=changed)


def run_state(state: SimState) -> Trajectory:
    """Run an initialized state to its horizon, recording one snapshot per tick.

    The absorbing check runs before each tick, so an initially unanimous
    population yields an empty-events trajectory immediately.
    """
    snapshots = [state.snapshot()]
    events: list[TickEvents] = []
    for _ in range(state.config.max_ticks):
        if state.is_absorbing():
            break
        events.append(step(state))
        snapshots.append(state.snapshot())
    return Trajectory(snapshots=snapshots, events=events, config=state.config)


def run(config: SimConfig) -> Trajectory:
    return run_state(init(config))
