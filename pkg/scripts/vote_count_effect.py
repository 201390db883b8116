#!/usr/bin/env python3
"""Measure how the vote-gathering count v shapes long-run change rates.

Runs paired seeds at two v settings (binary domain, no preferential channels)
and prints per-arm steady change rates, convergence ticks, and the paired
win count. Numbers are reported as measured.
"""

from __future__ import annotations

import argparse
import statistics

from gossipvote import SimConfig, convergence_tick, run, steady_change_rate


def arm(v: int, seed: int, horizon: int, burn_in: int) -> tuple[float, int | None]:
    traj = run(
        SimConfig(n=500, k=1, v=v, f=0, activation_prob=0.5, max_ticks=horizon, seed=seed)
    )
    return steady_change_rate(traj, burn_in), convergence_tick(traj)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=30, help="paired seed count")
    parser.add_argument("--base-seed", type=int, default=1000)
    parser.add_argument("--v-low", type=int, default=3)
    parser.add_argument("--v-high", type=int, default=20)
    parser.add_argument("--horizon", type=int, default=500)
    parser.add_argument("--burn-in", type=int, default=50)
    args = parser.parse_args()

    low_rates, high_rates, low_conv, high_conv = [], [], [], []
    low_wins = 0
    for s in range(args.seeds):
        seed = args.base_seed + s
        rate_low, conv_low = arm(args.v_low, seed, args.horizon, args.burn_in)
        rate_high, conv_high = arm(args.v_high, seed, args.horizon, args.burn_in)
        low_rates.append(rate_low)
        high_rates.append(rate_high)
        low_conv.append(conv_low)
        high_conv.append(conv_high)
        low_wins += rate_low > rate_high

    def describe(label: str, rates: list[float], convs: list) -> None:
        converged = [c for c in convs if c is not None]
        conv_note = (
            f"convergence tick median {statistics.median(converged)}"
            if converged
            else "never converged"
        )
        print(
            f"v={label}: steady change rate mean {statistics.mean(rates):.6f} "
            f"median {statistics.median(rates):.6f}; {len(converged)}/{len(convs)} "
            f"converged ({conv_note})"
        )

    describe(str(args.v_low), low_rates, low_conv)
    describe(str(args.v_high), high_rates, high_conv)
    print(
        f"paired seeds where v={args.v_low} rate > v={args.v_high} rate: "
        f"{low_wins}/{args.seeds}"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
