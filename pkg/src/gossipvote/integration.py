"""Integration operators: how an agent turns a full inbox into a new value.

All three are pure functions of the vote set (plus one coin for the mixed
strategy); the engine never peeks inside them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import KnowledgeValue


@dataclass(frozen=True)
class VoteSet:
    """The multiset an integration step ranges over.

    own is the integrating agent's current value and only breaks ties in
    favour of keeping it; None (e.g. a supervisor integrating for a whole
    group) removes that preference, so ties break to the smallest value.
    own must already be in values when the agent counts itself.
    """

    values: tuple[KnowledgeValue, ...]
    own: KnowledgeValue | None = None

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("a vote set needs at least one value")


def dominant_value(votes: VoteSet) -> KnowledgeValue:
    """Most frequent value; ties keep own if own is tied, else take the smallest."""
    counts: dict[KnowledgeValue, int] = {}
    for value in votes.values:
        counts[value] = counts.get(value, 0) + 1
    best = max(counts.values())
    if votes.own is not None and counts.get(votes.own) == best:
        return votes.own
    return min(value for value, count in counts.items() if count == best)


def consensus_value(votes: VoteSet, k: int) -> KnowledgeValue:
    """Lower median of the vote set over the ordered domain 0..k.

    For even sizes the lower of the two middle values is taken, so the result
    is always a value someone actually voted for.
    """
    for value in votes.values:
        if not 0 <= value <= k:
            raise ValueError(f"vote {value} outside domain 0..{k}")
    ordered = sorted(votes.values)
    return ordered[(len(ordered) - 1) // 2]


def mixed_integrate(
    votes: VoteSet, k: int, consensus_prob: float, rng: random.Random
) -> KnowledgeValue:
    """Apply consensus with probability consensus_prob, else dominant.

    Draws exactly one coin from rng regardless of outcome, keeping run
    replay byte-stable.
    """
    if not 0.0 <= consensus_prob <= 1.0:
        raise ValueError(f"consensus_prob must lie in [0, 1], got {consensus_prob}")
    if rng.random() < consensus_prob:
        return consensus_value(votes, k)
    return dominant_value(votes)
