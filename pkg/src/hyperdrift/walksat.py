"""WalkSAT on XOR-SAT instances, with replayable randomness.

Each step draws exactly two 64-bit words from the run's SplitMix64
stream: the first selects a uniformly random unsatisfied equation (by
rank among the set bits of the unsat bitset, ascending), the second a
uniformly random variable of that equation.  The unsat set is maintained
as an int bitset and updated by XOR with the flipped variable's column
mask, so steps are cheap even on instances with thousands of equations.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import gf2
from .rng import SplitMix64, spawn
from .xorsat import XorSatInstance, unsat_mask


@dataclass(frozen=True)
class FixedStart:
    x: int


@dataclass(frozen=True)
class UniformStart:
    pass


@dataclass(frozen=True)
class DistanceStart:
    """Start at a fixed Hamming distance from a satisfying witness."""

    d: int


StartPolicy = FixedStart | UniformStart | DistanceStart


@dataclass
class WalkSatRun:
    steps: int | None  # None = censored at max_steps
    seed: int
    max_steps: int
    x0: int
    final: int
    flips: list[tuple[int, int]] | None = None  # (equation, variable) per step
    unsat_counts: list[int] | None = None  # length steps+1, count before each step

    @property
    def censored(self) -> bool:
        return self.steps is None


@lru_cache(maxsize=None)
def _columns(inst: XorSatInstance) -> tuple[int, ...]:
    """For each variable, the bitset of equations containing it."""
    cols = [0] * inst.n
    for e, eq in enumerate(inst.equations):
        for v in eq.vars:
            cols[v] |= 1 << e
    return tuple(cols)


def _nth_set_bit(mask: int, k: int) -> int:
    """Index of the (k+1)-th set bit of mask, counting from bit 0."""
    base = 0
    while True:
        word = mask & 0xFFFFFFFFFFFFFFFF
        pc = word.bit_count()
        if k < pc:
            for _ in range(k):
                word &= word - 1
            return base + (word & -word).bit_length() - 1
        k -= pc
        mask >>= 64
        base += 64


def walksat(
    inst: XorSatInstance,
    x0: int,
    seed: int,
    max_steps: int,
    record: bool = False,
) -> WalkSatRun:
    """Run WalkSAT from x0 until satisfaction or max_steps.

    Deterministic given (inst, x0, seed).  Unsatisfiability only shows up
    as censoring; there is no solvability precheck.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    if x0 < 0 or x0 >> inst.n:
        raise ValueError("assignment does not fit the variable count")
    rng = SplitMix64(seed)
    cols = _columns(inst)
    eq_vars = [eq.vars for eq in inst.equations]
    unsat = unsat_mask(inst, x0)
    x = x0
    flips: list[tuple[int, int]] | None = [] if record else None
    counts: list[int] | None = [unsat.bit_count()] if record else None
    steps = 0
    while unsat:
        if steps == max_steps:
            return WalkSatRun(None, seed, max_steps, x0, x, flips, counts)
        cnt = unsat.bit_count()
        e = _nth_set_bit(unsat, rng.below(cnt))
        vs = eq_vars[e]
        v = vs[rng.below(len(vs))]
        x ^= 1 << v
        unsat ^= cols[v]
        steps += 1
        if record:
            flips.append((e, v))
            counts.append(unsat.bit_count())
    return WalkSatRun(steps, seed, max_steps, x0, x, flips, counts)


def u_trajectory(inst: XorSatInstance, run: WalkSatRun) -> list[int]:
    """Hamming distance to the unique solution after each step.

    Refuses instances that are not uniquely satisfiable.  Consecutive
    entries differ by exactly one (every step flips one variable).
    """
    z = gf2.unique_witness(inst)
    if run.flips is None:
        raise ValueError("run was not recorded; pass record=True to walksat()")
    u = (run.x0 ^ z).bit_count()
    out = [u]
    x = run.x0
    for _, v in run.flips:
        x ^= 1 << v
        u += 1 if ((x >> v) & 1) != ((z >> v) & 1) else -1
        out.append(u)
    return out


def trajectory_csv(inst: XorSatInstance, run: WalkSatRun) -> str:
    """Per-step `t,unsat,u` rows; the u column is blank unless the instance
    is uniquely satisfiable."""
    if run.unsat_counts is None:
        raise ValueError("run was not recorded; pass record=True to walksat()")
    try:
        us = [str(u) for u in u_trajectory(inst, run)]
    except ValueError:
        us = [""] * len(run.unsat_counts)
    lines = ["t,unsat,u"]
    lines.extend(f"{t},{c},{u}" for t, (c, u) in enumerate(zip(run.unsat_counts, us)))
    return "\n".join(lines) + "\n"


@dataclass
class HittingStats:
    steps: list[int | None]  # per trial, None = censored
    trials: int
    censored: int
    mean: float | None  # over uncensored trials; None if all censored
    max_steps: int

    def mean_capped(self) -> Fraction:
        """Mean with censored runs counted at the cap."""
        total = sum(self.max_steps if s is None else s for s in self.steps)
        return Fraction(total, self.trials)


def _start_for_trial(inst: XorSatInstance, policy: StartPolicy, trial_seed: int) -> int:
    if isinstance(policy, FixedStart):
        return policy.x
    rng = SplitMix64(spawn(trial_seed, 0))
    if isinstance(policy, UniformStart):
        return rng.bits(inst.n)
    if isinstance(policy, DistanceStart):
        res = gf2.solve(gf2.instance_system(inst))
        if res.witness is None:
            raise ValueError("distance policy needs a satisfiable instance")
        if not 0 <= policy.d <= inst.n:
            raise ValueError("distance out of range")
        flip = 0
        for v in rng.sample_indices(inst.n, policy.d):
            flip |= 1 << v
        return res.witness ^ flip
    raise TypeError(f"unknown start policy {policy!r}")


def _run_trials(args: tuple) -> list[tuple[int, int | None]]:
    inst, policy, seed, max_steps, lo, hi = args
    out = []
    for i in range(lo, hi):
        trial_seed = spawn(seed, i)
        x0 = _start_for_trial(inst, policy, trial_seed)
        run = walksat(inst, x0, spawn(trial_seed, 1), max_steps)
        out.append((i, run.steps))
    return out


def default_workers() -> int:
    env = os.environ.get("HYPERDRIFT_THREADS")
    if env:
        return max(1, int(env))
    return 1


def mean_hitting_time(
    inst: XorSatInstance,
    policy: StartPolicy,
    trials: int,
    seed: int,
    max_steps: int,
    workers: int | None = None,
) -> HittingStats:
    """Monte Carlo estimate of the expected number of WalkSAT steps.

    Trial i runs from the derived seed (seed, i), so results do not depend
    on the worker count and repeat exactly for the same arguments.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1:
        results = _run_trials((inst, policy, seed, max_steps, 0, trials))
    else:
        from concurrent.futures import ProcessPoolExecutor

        chunk = -(-trials // workers)
        jobs = [
            (inst, policy, seed, max_steps, lo, min(lo + chunk, trials))
            for lo in range(0, trials, chunk)
        ]
        results = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_trials, jobs):
                results.extend(part)
    results.sort()
    steps: list[int | None] = [s for _, s in results]
    done = [s for s in steps if s is not None]
    mean = sum(done) / len(done) if done else None
    return HittingStats(steps, trials, len(steps) - len(done), mean, max_steps)


def worst_start(inst: XorSatInstance, candidates: int, seed: int) -> int:
    """The worst of `candidates` uniform random starts.

    Ranked by initial number of unsatisfied equations, ties broken by
    candidate index, so the choice is deterministic.
    """
    best_x = 0
    best_cnt = -1
    for i in range(candidates):
        x = SplitMix64(spawn(seed, i)).bits(inst.n)
        cnt = unsat_mask(inst, x).bit_count()
        if cnt > best_cnt:
            best_cnt, best_x = cnt, x
    return best_x
