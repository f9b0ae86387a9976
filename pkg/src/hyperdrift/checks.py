"""Named invariant suites.

Each check replays one of the exact correspondences on a battery of small
random inputs: coupling of the annihilating and coalescing walks, the
forward/backward duality, the algebraic characterization of stabilizing
states, recurrence of the two-party model, the one-step drift identity,
and the two reachability counterexamples.  They return a CheckOutcome so
the CLI can exit nonzero on any violation; the acceptance tests call them
with the criterion parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import gf2
from .drift import cut_report
from .fixtures import counterexamples
from .hypergraph import (
    Hypergraph,
    OddCase,
    degrees,
    odd_case,
    random_connected_hypergraph,
    random_k_regular_hypergraph,
    random_odd_connected_hypergraph,
)
from .ips import (
    bfs_stabilizing_set,
    config_bfs,
    coupled_process_P,
    coupled_vm_times,
    d_epsilon_experiment,
    duality_harness,
    random_schedule,
    states_reaching,
    two_party_step,
)
from .rng import SplitMix64, spawn
from .xorsat import gen_random_k_uniform, triadic_dual


@dataclass
class CheckOutcome:
    name: str
    ok: bool
    checked: int
    failures: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        status = "ok" if self.ok else "FAILED"
        out = [f"{self.name}: {status} ({self.checked} cases)"]
        out.extend(f"  {f}" for f in self.failures[:10])
        return out


def _stabilizing_subsets(h: Hypergraph, rng: SplitMix64, want: int) -> list[int]:
    out = []
    tries = 0
    while len(out) < want and tries < 200 * want:
        tries += 1
        b = rng.bits(h.n)
        if gf2.is_stabilizing(h, b):
            out.append(b)
    return out


def check_coupling(graphs: int, runs_per_graph: int, seed: int, n_max: int = 8, max_steps: int = 200_000) -> CheckOutcome:
    """Per-run equality of annihilation and coalescence times, both modes."""
    failures = []
    checked = 0
    for g in range(graphs):
        sub = spawn(seed, g)
        rng = SplitMix64(spawn(sub, 0))
        n = 3 + rng.below(n_max - 2)
        h = random_connected_hypergraph(n, n + rng.below(4), spawn(sub, 1))
        bs = _stabilizing_subsets(h, SplitMix64(spawn(sub, 2)), max(1, runs_per_graph // 4))
        if not bs:
            continue
        for r in range(runs_per_graph):
            b = bs[r % len(bs)]
            for mode in ("eager", "lazy"):
                res = coupled_process_P(h, b, mode, spawn(sub, 100 + 2 * r + (mode == "lazy")), max_steps)
                checked += 1
                if res.censored:
                    failures.append(f"graph {g} run {r} {mode}: censored")
                elif res.c_ann != res.c_coal:
                    failures.append(
                        f"graph {g} run {r} {mode}: c_ann={res.c_ann} != c_coal={res.c_coal}"
                    )
    return CheckOutcome("coupling", not failures, checked, failures)


def check_duality(graphs: int, schedules_per_graph: int, seed: int, n_max: int = 7, length: int = 40) -> CheckOutcome:
    """Per-prefix iff between CRW parity and reversed voter parity."""
    failures = []
    checked = 0
    for g in range(graphs):
        sub = spawn(seed, g)
        rng = SplitMix64(spawn(sub, 0))
        n = 3 + rng.below(n_max - 2)
        h = random_connected_hypergraph(n, n + rng.below(3), spawn(sub, 1))
        bs = _stabilizing_subsets(h, SplitMix64(spawn(sub, 2)), 4)
        if not bs:
            continue
        for s in range(schedules_per_graph):
            sched = random_schedule(h, length, spawn(sub, 100 + s))
            b = bs[s % len(bs)]
            rep = duality_harness(h, b, sched)
            checked += 1
            if not rep.consistent:
                bad = next(t for t in range(len(sched) + 1) if rep.crw_ok[t] != rep.voter_ok[t])
                failures.append(f"graph {g} schedule {s}: prefixes disagree at t={bad}")
    return CheckOutcome("duality", not failures, checked, failures)


def check_stabilizing(graphs: int, seed: int, n_max: int = 10) -> CheckOutcome:
    """gf2.is_stabilizing against brute-force BFS over all configurations."""
    failures = []
    checked = 0
    for g in range(graphs):
        sub = spawn(seed, g)
        rng = SplitMix64(spawn(sub, 0))
        n = 3 + rng.below(n_max - 2)
        h = random_connected_hypergraph(n, n + rng.below(4), spawn(sub, 1))
        truth = bfs_stabilizing_set(h)
        for w in range(1 << h.n):
            checked += 1
            if gf2.is_stabilizing(h, w) != (w in truth):
                failures.append(f"graph {g} config {w:#x}: certificate disagrees with BFS")
    return CheckOutcome("stabilizing", not failures, checked, failures)


def check_recurrence(graphs: int, seed: int, n_max: int = 10) -> CheckOutcome:
    """Two-party reachability of 0 on odd-connected hypergraphs.

    With an odd edge, 0 is reachable from everywhere; with all edges
    even, from everywhere but the all-ones fixed point.
    """
    failures = []
    checked = 0
    for g in range(graphs):
        sub = spawn(seed, g)
        rng = SplitMix64(spawn(sub, 0))
        n = 3 + rng.below(n_max - 2)
        h = random_odd_connected_hypergraph(
            n, n + rng.below(3), spawn(sub, 1), even_only=(g % 3 == 2)
        )
        can_reach_zero = states_reaching(h, "two-party", 0)
        ones = h.full_mask()
        total = 1 << h.n
        checked += total
        if odd_case(h) is OddCase.ODD_EDGE:
            if len(can_reach_zero) != total:
                failures.append(f"graph {g}: 0 unreachable from {total - len(can_reach_zero)} states")
        else:
            expected = total - 1
            if len(can_reach_zero - {ones}) != expected or ones in can_reach_zero:
                failures.append(f"graph {g}: all-even case has wrong basin")
            fixed = all(
                two_party_step(h, ones, (v, e)) == ones
                for v in range(h.n)
                for e in range(h.m)
                if v in h.edges[e]
            )
            if not fixed:
                failures.append(f"graph {g}: all-ones is not a fixed point")
    return CheckOutcome("recurrence", not failures, checked, failures)


def check_drift_lemma(graphs: int, seed: int, n_max: int = 10) -> CheckOutcome:
    """Exact one-step drift identity on k-regular hypergraphs.

    Over all nk vertex-edge pairs, the probability of losing minus gaining
    a live vertex equals (e_minus - e_plus)/(nk) at every configuration.
    """
    failures = []
    checked = 0
    for g in range(graphs):
        sub = spawn(seed, g)
        rng = SplitMix64(spawn(sub, 0))
        n = 3 + rng.below(n_max - 2)
        k = 2 + rng.below(3)
        h = random_k_regular_hypergraph(n, k, spawn(sub, 1))
        assert set(degrees(h)) == {k}
        pairs = [(v, e) for e in range(h.m) for v in h.edges[e]]
        assert len(pairs) == n * k
        for state in range(1 << h.n):
            down = up = 0
            before = state.bit_count()
            for pair in pairs:
                after = two_party_step(h, state, pair).bit_count()
                if after == before - 1:
                    down += 1
                elif after == before + 1:
                    up += 1
            rep = cut_report(h, state)
            checked += 1
            if (down, up) != (rep.e_minus, rep.e_plus) or Fraction(down - up, n * k) != Fraction(
                rep.e_minus - rep.e_plus, n * k
            ):
                failures.append(f"graph {g} state {state:#x}: enumeration != pair counts")
    return CheckOutcome("drift-lemma", not failures, checked, failures)


def check_counterexamples() -> CheckOutcome:
    """Both fixtures: parity system solvable AND target BFS-unreachable."""
    failures = []
    checked = 0
    for name, h, w1, w2 in counterexamples():
        checked += 1
        solvable = gf2.solve(gf2.reachability_system(h, w1, w2)).consistent
        reachable = w2 in config_bfs(h, "arw-eager", w1)
        if not solvable:
            failures.append(f"{name}: parity system unexpectedly inconsistent")
        if reachable:
            failures.append(f"{name}: target unexpectedly reachable")
    return CheckOutcome("counterexamples", not failures, checked, failures)


def check_d_epsilon(
    fixtures_seed: int,
    runs: int,
    eps: float = 0.125,
    max_steps: int = 300_000,
) -> CheckOutcome:
    """c_2vm <= t_parity per run, and shared-schedule tail domination."""
    from .experiments import triadic_instance

    failures = []
    checked = 0
    hs: list[Hypergraph] = [
        triadic_dual(triadic_instance(6, spawn(fixtures_seed, 90))),
        triadic_dual(triadic_instance(9, spawn(fixtures_seed, 91))),
        random_odd_connected_hypergraph(7, 9, spawn(fixtures_seed, 92)),
    ]
    for idx, h in enumerate(hs):
        sub = spawn(fixtures_seed, idx)
        bs = _stabilizing_subsets(h, SplitMix64(spawn(sub, 0)), 3)
        if not bs:
            continue
        b = bs[0]
        vm_tails: list[int] = []
        tvm_tails: list[int] = []
        for r in range(runs):
            samp = d_epsilon_experiment(h, eps, b, spawn(sub, 100 + r), max_steps)
            checked += 1
            if samp.censored:
                failures.append(f"fixture {idx} run {r}: censored")
                continue
            if samp.c_2vm is None or samp.c_2vm > samp.t_parity:
                failures.append(
                    f"fixture {idx} run {r}: c_2vm={samp.c_2vm} > t_parity={samp.t_parity}"
                )
            shared = coupled_vm_times(h, samp.d_mask, b, spawn(sub, 10_000 + r), max_steps)
            checked += 1
            if shared.c_vm is None or shared.c_2vm is None:
                failures.append(f"fixture {idx} run {r}: shared schedule censored")
                continue
            if shared.c_2vm > shared.c_vm:
                failures.append(
                    f"fixture {idx} run {r}: c_2vm={shared.c_2vm} > c_vm={shared.c_vm}"
                )
            vm_tails.append(shared.c_vm)
            tvm_tails.append(shared.c_2vm)
        if vm_tails:
            # Empirical tail domination with 3 sigma slack.
            n_runs = len(vm_tails)
            sigma = (1.0 / n_runs) ** 0.5
            horizon = max(vm_tails)
            for t in range(0, horizon + 1, max(1, horizon // 20)):
                p2 = sum(1 for x in tvm_tails if x > t) / n_runs
                pv = sum(1 for x in vm_tails if x > t) / n_runs
                if p2 > pv + 3 * sigma:
                    failures.append(f"fixture {idx}: tail domination fails at t={t}")
    return CheckOutcome("d-epsilon", not failures, checked, failures)


def check_acyclicity_duality(instances: int, seed: int, n_max: int = 12) -> CheckOutcome:
    """is_acyclic(inst) iff is_odd_connected(triadic_dual(inst)).

    Width-3 instances: the equivalence can only break on instances that
    are globally cyclic with no proper cycle, and odd widths keep that
    degenerate corner out of the sampled family (every variable would
    need an even occurrence count summing to 3m).
    """
    from .hypergraph import is_odd_connected

    failures = []
    checked = 0
    made = 0
    t = 0
    while made < instances and t < 100 * instances:
        sub = spawn(seed, t)
        t += 1
        rng = SplitMix64(sub)
        n = 5 + rng.below(n_max - 4)
        m = 3 + rng.below(min(n_max, 10))
        try:
            inst, _ = gen_random_k_uniform(n, m, 3, spawn(sub, 1), connected=True, max_tries=50)
        except (RuntimeError, ValueError):
            continue
        made += 1
        checked += 1
        left = gf2.is_acyclic(inst)
        right = is_odd_connected(triadic_dual(inst))
        if left != right:
            failures.append(f"instance {made}: acyclic={left} but dual odd-connected={right}")
    return CheckOutcome("acyclicity-duality", not failures, checked, failures)


CHECKS = {
    "coupling": lambda seed, trials: check_coupling(50, max(1, trials // 50), seed),
    "duality": lambda seed, trials: check_duality(20, max(1, trials // 20), seed),
    "stabilizing": lambda seed, trials: check_stabilizing(max(1, trials), seed),
    "recurrence": lambda seed, trials: check_recurrence(max(1, trials), seed),
    "drift-lemma": lambda seed, trials: check_drift_lemma(max(1, trials), seed),
    "counterexamples": lambda seed, trials: check_counterexamples(),
    "d-epsilon": lambda seed, trials: check_d_epsilon(seed, max(1, trials)),
    "acyclicity-duality": lambda seed, trials: check_acyclicity_duality(max(1, trials), seed),
}
