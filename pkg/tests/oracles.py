"""Brute-force oracles, written independently of the library implementations."""

from __future__ import annotations


def mode_oracle(values: list[int], own: int | None) -> int:
    """Maximal-multiplicity value; own wins ties when tied, else smallest."""
    multiplicity: dict[int, int] = {}
    for value in values:
        multiplicity[value] = multiplicity.get(value, 0) + 1
    best = max(multiplicity.values())
    tied = sorted(value for value, count in multiplicity.items() if count == best)
    if own is not None and own in tied:
        return own
    return tied[0]


def median_cost_oracle(values: list[int], k: int) -> int:
    """Smallest c in 0..k minimizing the summed absolute distance to values."""
    best_c = 0
    best_cost = sum(abs(x - 0) for x in values)
    for c in range(1, k + 1):
        cost = sum(abs(x - c) for x in values)
        if cost < best_cost:
            best_c, best_cost = c, cost
    return best_c
