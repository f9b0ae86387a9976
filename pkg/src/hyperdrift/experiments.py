"""Scaling experiments behind the bench command and the acceptance suite."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .rng import spawn
from .walksat import FixedStart, DistanceStart, mean_hitting_time, worst_start
from .xorsat import XorSatInstance, gen_complete, gen_triadic_cycle
from .rng import SplitMix64


@dataclass(frozen=True)
class BenchPoint:
    size: int
    trials: int
    censored: int
    mean_capped: float
    mean_uncensored: float | None


def triadic_instance(m: int, seed: int) -> XorSatInstance:
    bits = SplitMix64(seed).bits(2 * m)
    u = [(bits >> i) & 1 for i in range(2 * m)]
    return gen_triadic_cycle(m, u)


def bench_triadic(
    sizes: list[int],
    trials: int,
    starts: int,
    seed: int,
    max_steps: int,
    workers: int | None = None,
) -> list[BenchPoint]:
    """Mean WalkSAT steps on triadic-cycle instances, worst-of-`starts` x0."""
    out = []
    for i, m in enumerate(sizes):
        sub = spawn(seed, i)
        inst = triadic_instance(m, spawn(sub, 0))
        x0 = worst_start(inst, starts, spawn(sub, 1))
        stats = mean_hitting_time(inst, FixedStart(x0), trials, spawn(sub, 2), max_steps, workers)
        out.append(BenchPoint(m, trials, stats.censored, float(stats.mean_capped()), stats.mean))
    return out


def bench_complete5(
    sizes: list[int],
    trials: int,
    seed: int,
    max_steps: int,
    workers: int | None = None,
) -> list[BenchPoint]:
    """Mean WalkSAT steps on complete 5-uniform systems from distance n/2."""
    out = []
    for i, n in enumerate(sizes):
        sub = spawn(seed, i)
        z = SplitMix64(spawn(sub, 0)).bits(n)
        inst = gen_complete(5, n, z)
        d = -(-n // 2)  # ceil
        stats = mean_hitting_time(inst, DistanceStart(d), trials, spawn(sub, 1), max_steps, workers)
        out.append(BenchPoint(n, trials, stats.censored, float(stats.mean_capped()), stats.mean))
    return out


def fit_exponent(points: list[BenchPoint]) -> float:
    """Least-squares slope of log(mean) against log(size)."""
    xs = [math.log(p.size) for p in points]
    ys = [math.log(max(p.mean_capped, 1e-9)) for p in points]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


def growth_ratios(points: list[BenchPoint]) -> list[float]:
    return [
        b.mean_capped / a.mean_capped for a, b in zip(points, points[1:])
    ]
