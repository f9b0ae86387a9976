"""Interacting particle systems on hypergraphs.

Four dynamics share the same notion of an update event: a pair (v, e)
with v a vertex of edge e.

* annihilating walk (ARW): all labels of e flip when v is live;
* coalescing walk (CRW): v's multiset is copied to the rest of e, v empties;
* multiset voter: v adopts the multiset sum of the rest of e;
* two-party voter: v adopts the XOR of the rest of e.

Boolean states are int masks.  Multiset states are tuples of Counters
(exact multiplicities).  Long experiments use the mod-2 compression of a
multiset state - a tuple of int masks, one per vertex, recording which
labels have odd count there - because every parity predicate factors
through it and exact multiplicities explode on hypergraphs.

Time convention: all stopping times count applied update events, and
predicates are checked at t=0 before any event.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .hypergraph import Hypergraph, OddCase, edge_masks, incident_edges, odd_case
from .rng import SplitMix64

Pair = tuple[int, int]  # (vertex, edge index)
MultisetState = tuple[Counter, ...]
ParityState = tuple[int, ...]


def _check_pair(h: Hypergraph, pair: Pair) -> None:
    v, e = pair
    if not 0 <= e < h.m:
        raise ValueError(f"edge index {e} out of range")
    if v not in h.edges[e]:
        raise ValueError(f"vertex {v} not in edge {e}")


# ---------------------------------------------------------------------------
# Single steps.


def arw_step(h: Hypergraph, state: int, pair: Pair) -> int:
    """Eager annihilating step: requires a live vertex, flips its edge."""
    _check_pair(h, pair)
    v, e = pair
    if not (state >> v) & 1:
        raise ValueError(f"eager step on dead vertex {v}")
    return state ^ edge_masks(h)[e]


def arw_step_lazy(h: Hypergraph, state: int, pair: Pair) -> int:
    """Lazy annihilating step: a dead vertex makes the move a no-op."""
    _check_pair(h, pair)
    v, e = pair
    if (state >> v) & 1:
        return state ^ edge_masks(h)[e]
    return state


def crw_step(h: Hypergraph, state: MultisetState, pair: Pair) -> MultisetState:
    """Coalescing step: v's multiset is copied to every other vertex of e."""
    _check_pair(h, pair)
    v, e = pair
    new = [Counter(c) for c in state]
    src = state[v]
    for j in h.edges[e]:
        if j != v:
            new[j].update(src)
    new[v] = Counter()
    return tuple(new)


def voter_step(h: Hypergraph, state: MultisetState, pair: Pair) -> MultisetState:
    """Multiset voter step: v adopts the multiset sum of the rest of e.

    A self-loop has no other vertices, so it empties v (the empty sum).
    """
    _check_pair(h, pair)
    v, e = pair
    new = [Counter(c) for c in state]
    acc: Counter = Counter()
    for j in h.edges[e]:
        if j != v:
            acc.update(state[j])
    new[v] = acc
    return tuple(new)


def two_party_step(h: Hypergraph, state: int, pair: Pair) -> int:
    """Two-party step: v adopts the XOR of the other labels of e."""
    _check_pair(h, pair)
    v, e = pair
    others = edge_masks(h)[e] & ~(1 << v)
    bit = (state & others).bit_count() & 1
    return (state & ~(1 << v)) | (bit << v)


# Mod-2 compressed multiset steps: masks[v] has bit b set iff label b has
# odd multiplicity at v.  They commute with the exact steps above.


def crw_step_parity(h: Hypergraph, state: ParityState, pair: Pair) -> ParityState:
    _check_pair(h, pair)
    v, e = pair
    new = list(state)
    src = state[v]
    for j in h.edges[e]:
        if j != v:
            new[j] ^= src
    new[v] = 0
    return tuple(new)


def voter_step_parity(h: Hypergraph, state: ParityState, pair: Pair) -> ParityState:
    _check_pair(h, pair)
    v, e = pair
    acc = 0
    for j in h.edges[e]:
        if j != v:
            acc ^= state[j]
    new = list(state)
    new[v] = acc
    return tuple(new)


def parity_of(state: MultisetState) -> ParityState:
    out = []
    for c in state:
        mask = 0
        for label, mult in c.items():
            if mult & 1:
                mask ^= 1 << label
        out.append(mask)
    return tuple(out)


# ---------------------------------------------------------------------------
# Parity predicates.


def crw_parity_on(state: MultisetState | ParityState, vertices: Iterable[int]) -> bool:
    """Every vertex in the set holds an even-size multiset."""
    sizes = [
        (c.total() if isinstance(c, Counter) else c.bit_count()) for c in state
    ]
    return all(sizes[v] % 2 == 0 for v in vertices)


def voter_parity_on(
    state: MultisetState | ParityState,
    vertices: Iterable[int],
    opinions: Iterable[int] | None = None,
) -> bool:
    """Every opinion (from the given set, default all) has even total count
    over the given vertices."""
    acc_mask = 0
    acc_counter: Counter = Counter()
    for v in vertices:
        c = state[v]
        if isinstance(c, Counter):
            acc_counter.update(c)
        else:
            acc_mask ^= c
    if acc_counter:
        for label, mult in acc_counter.items():
            acc_mask ^= (mult & 1) << label
    if opinions is None:
        return acc_mask == 0
    return all(not (acc_mask >> b) & 1 for b in opinions)


def xor_parity_on(state: int, b_mask: int) -> bool:
    """Two-party predicate: the labels of B XOR to zero."""
    return (state & b_mask).bit_count() % 2 == 0


# ---------------------------------------------------------------------------
# Initial states.


def crw_initial(n: int, b_mask: int) -> MultisetState:
    return tuple(Counter([v]) if (b_mask >> v) & 1 else Counter() for v in range(n))


def crw_initial_parity(n: int, b_mask: int) -> ParityState:
    return tuple((1 << v) if (b_mask >> v) & 1 else 0 for v in range(n))


def voter_initial(n: int) -> MultisetState:
    return tuple(Counter([v]) for v in range(n))


def voter_initial_parity(n: int) -> ParityState:
    return tuple(1 << v for v in range(n))


# ---------------------------------------------------------------------------
# Random schedules and runs.


def random_pair(h: Hypergraph, rng: SplitMix64, among: Sequence[int] | None = None) -> Pair:
    """Uniform vertex (optionally among a subset) then uniform incident edge."""
    v = rng.below(h.n) if among is None else among[rng.below(len(among))]
    inc = incident_edges(h)[v]
    if not inc:
        raise ValueError(f"vertex {v} has no incident edge")
    return v, inc[rng.below(len(inc))]


def random_schedule(h: Hypergraph, length: int, seed: int) -> list[Pair]:
    rng = SplitMix64(seed)
    return [random_pair(h, rng) for _ in range(length)]


def run_arw(
    h: Hypergraph,
    init: int,
    mode: Literal["eager", "lazy"],
    seed: int,
    max_steps: int,
) -> int | None:
    """Annihilation time sample, or None when censored at max_steps."""
    if mode not in ("eager", "lazy"):
        raise ValueError("mode must be 'eager' or 'lazy'")
    rng = SplitMix64(seed)
    state = init
    for t in range(max_steps + 1):
        if state == 0:
            return t
        if t == max_steps:
            break
        if mode == "eager":
            live = [v for v in range(h.n) if (state >> v) & 1]
            pair = random_pair(h, rng, live)
            state = arw_step(h, state, pair)
        else:
            pair = random_pair(h, rng)
            state = arw_step_lazy(h, state, pair)
    return None


# ---------------------------------------------------------------------------
# The coupled annihilating/coalescing process.
#
# Vertices hold multisets of tokens (label, time); time None marks the
# live witness.  Observing only the None-tokens gives the annihilating
# walk; forgetting times gives the coalescing walk.  When two live
# vertices meet across an edge, their witnesses are retired into a pair
# of tokens stamped with the current time.


@dataclass
class CoupledTimes:
    c_ann: int | None
    c_coal: int | None
    censored: bool


def _witness(tokens: Counter) -> int | None:
    for (label, t) in tokens:
        if t is None:
            return label
    return None


def coupled_process_P(
    h: Hypergraph,
    b_mask: int,
    mode: Literal["eager", "lazy"],
    seed: int,
    max_steps: int,
) -> CoupledTimes:
    """Run the tagged process and time both projections independently.

    c_ann is the first time no vertex holds a live witness; c_coal the
    first time every vertex's token multiset has even size.  The two must
    agree run by run.
    """
    if mode not in ("eager", "lazy"):
        raise ValueError("mode must be 'eager' or 'lazy'")
    rng = SplitMix64(seed)
    state: list[Counter] = [
        Counter({(v, None): 1}) if (b_mask >> v) & 1 else Counter() for v in range(h.n)
    ]
    c_ann: int | None = None
    c_coal: int | None = None

    def observe(t: int) -> None:
        nonlocal c_ann, c_coal
        if c_ann is None and all(_witness(c) is None for c in state):
            c_ann = t
        if c_coal is None and all(c.total() % 2 == 0 for c in state):
            c_coal = t

    observe(0)
    for t in range(1, max_steps + 1):
        if c_ann is not None and c_coal is not None:
            break
        if mode == "eager":
            live = [v for v in range(h.n) if _witness(state[v]) is not None]
            if not live:
                # ARW projection is absorbed; dead mass can still move but
                # neither predicate changes, so stop early.
                observe(t)
                continue
            v, e = random_pair(h, rng, live)
        else:
            v, e = random_pair(h, rng)
        src = Counter(state[v])
        b_src = _witness(src)
        for j in h.edges[e]:
            if j == v:
                continue
            b_dst = _witness(state[j])
            if b_src is not None and b_dst is not None:
                merged = Counter(src)
                merged[(b_src, None)] -= 1
                # Both witnesses retire into time-stamped tokens; build from a
                # list so equal labels still contribute two tokens.
                merged += Counter([(b_src, t), (b_dst, t)])
                dst = state[j]
                dst[(b_dst, None)] -= 1
                dst += merged
                state[j] = +dst  # drop zero entries
            else:
                state[j] = state[j] + src
        state[v] = Counter()
        observe(t)
    return CoupledTimes(c_ann, c_coal, c_ann is None or c_coal is None)


# ---------------------------------------------------------------------------
# Duality between the lazy coalescing walk and the multiset voter model.


@dataclass
class DualityReport:
    crw_time: int | None  # first prefix length with all vertex parities even
    voter_time: int | None  # first prefix length with opinion parity on B
    crw_ok: list[bool]  # predicate per prefix length 0..len(schedule)
    voter_ok: list[bool]

    @property
    def consistent(self) -> bool:
        return self.crw_ok == self.voter_ok

    @property
    def exhausted(self) -> bool:
        return self.crw_time is None or self.voter_time is None


def duality_harness(h: Hypergraph, b_mask: int, schedule: Sequence[Pair]) -> DualityReport:
    """Replay a pointed-edge schedule forward as the lazy CRW from B and
    reversed as the multiset voter model from all-distinct opinions.

    For prefix length t the CRW runs events 0..t-1 in order while the
    voter runs them t-1..0; the respective parity predicates (all ball
    counts even / all opinions even on B) must agree at every t.
    """
    b_vertices = [v for v in range(h.n) if (b_mask >> v) & 1]
    all_vertices = range(h.n)

    crw_ok: list[bool] = []
    state = crw_initial_parity(h.n, b_mask)
    crw_ok.append(crw_parity_on(state, all_vertices))
    for pair in schedule:
        state = crw_step_parity(h, state, pair)
        crw_ok.append(crw_parity_on(state, all_vertices))

    voter_ok: list[bool] = []
    for t in range(len(schedule) + 1):
        vstate = voter_initial_parity(h.n)
        for pair in reversed(schedule[:t]):
            vstate = voter_step_parity(h, vstate, pair)
        voter_ok.append(voter_parity_on(vstate, b_vertices))

    def first(flags: list[bool]) -> int | None:
        return next((t for t, ok in enumerate(flags) if ok), None)

    return DualityReport(first(crw_ok), first(voter_ok), crw_ok, voter_ok)


def schedule_to_csv(schedule: Sequence[Pair]) -> str:
    lines = ["t,v,e"]
    lines.extend(f"{t},{v},{e}" for t, (v, e) in enumerate(schedule))
    return "\n".join(lines) + "\n"


def schedule_from_csv(text: str) -> list[Pair]:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != "t,v,e":
        raise ValueError("schedule CSV must start with header 't,v,e'")
    out = []
    for expect, ln in enumerate(lines[1:]):
        t, v, e = (int(tok) for tok in ln.split(","))
        if t != expect:
            raise ValueError("schedule timestamps must be 0,1,2,...")
        out.append((v, e))
    return out


# ---------------------------------------------------------------------------
# Two-party experiments.


@dataclass
class DEpsilonSample:
    d_mask: int
    c_2vm: int | None  # first time the parity predicate on B holds
    t_parity: int | None  # first time the state is absorbing-equivalent
    censored: bool


def d_epsilon_experiment(
    h: Hypergraph,
    eps: float,
    b_mask: int,
    seed: int,
    max_steps: int,
) -> DEpsilonSample:
    """Sample D (each vertex kept with probability 1/2 - eps) and run the
    two-party model from it under uniform lazy pairs.

    t_parity waits for state 0 (some odd edge) or for {0, all-ones} (all
    edges even); c_2vm for the XOR over B to vanish.  For stabilizing B
    the sample satisfies c_2vm <= t_parity.
    """
    if not 0 < eps < 0.5:
        raise ValueError("need 0 < eps < 1/2")
    rng = SplitMix64(seed)
    d_mask = 0
    for v in range(h.n):
        if rng.random() < 0.5 - eps:
            d_mask |= 1 << v
    targets = {0}
    if odd_case(h) is OddCase.ALL_EVEN:
        targets.add(h.full_mask())
    state = d_mask
    c_2vm: int | None = None
    t_parity: int | None = None
    for t in range(max_steps + 1):
        if c_2vm is None and xor_parity_on(state, b_mask):
            c_2vm = t
        if t_parity is None and state in targets:
            t_parity = t
        if t_parity is not None:
            break
        if t == max_steps:
            break
        state = two_party_step(h, state, random_pair(h, rng))
    return DEpsilonSample(d_mask, c_2vm, t_parity, t_parity is None)


@dataclass
class SharedScheduleTimes:
    c_vm: int | None
    c_2vm: int | None


def coupled_vm_times(
    h: Hypergraph,
    a_mask: int,
    b_mask: int,
    seed: int,
    max_steps: int,
) -> SharedScheduleTimes:
    """Parity times of the multiset voter and the two-party model driven by
    one shared schedule.

    The two-party run starts from the indicator of A; the multiset run
    from all-distinct opinions.  Because the two-party state is the
    parity projection of the multiset state onto the opinions of A,
    c_2vm <= c_vm holds run by run.
    """
    rng = SplitMix64(seed)
    b_vertices = [v for v in range(h.n) if (b_mask >> v) & 1]
    vstate = voter_initial_parity(h.n)
    tstate = a_mask
    c_vm: int | None = None
    c_2vm: int | None = None
    for t in range(max_steps + 1):
        if c_vm is None and voter_parity_on(vstate, b_vertices):
            c_vm = t
        if c_2vm is None and xor_parity_on(tstate, b_mask):
            c_2vm = t
        if c_vm is not None and c_2vm is not None:
            break
        if t == max_steps:
            break
        pair = random_pair(h, rng)
        vstate = voter_step_parity(h, vstate, pair)
        tstate = two_party_step(h, tstate, pair)
    return SharedScheduleTimes(c_vm, c_2vm)


# ---------------------------------------------------------------------------
# Configuration-space BFS oracles.

Dynamics = Literal["arw-eager", "arw-lazy", "two-party"]


def successors(h: Hypergraph, dynamics: Dynamics, state: int) -> set[int]:
    masks = edge_masks(h)
    inc = incident_edges(h)
    out: set[int] = set()
    if dynamics in ("arw-eager", "arw-lazy"):
        for v in range(h.n):
            if (state >> v) & 1:
                for e in inc[v]:
                    out.add(state ^ masks[e])
        if dynamics == "arw-lazy":
            out.add(state)
    elif dynamics == "two-party":
        for v in range(h.n):
            for e in inc[v]:
                others = masks[e] & ~(1 << v)
                bit = (state & others).bit_count() & 1
                out.add((state & ~(1 << v)) | (bit << v))
    else:
        raise ValueError(f"unknown dynamics {dynamics!r}")
    return out


def config_bfs(h: Hypergraph, dynamics: Dynamics, w1: int, size_limit: int = 22) -> frozenset[int]:
    """Full reachable set of the chosen dynamics from w1 (2^n state space)."""
    if h.n > size_limit:
        raise ValueError(f"state space 2^{h.n} exceeds the guard 2^{size_limit}")
    seen = {w1}
    frontier = [w1]
    while frontier:
        nxt = []
        for s in frontier:
            for s2 in successors(h, dynamics, s):
                if s2 not in seen:
                    seen.add(s2)
                    nxt.append(s2)
        frontier = nxt
    return frozenset(seen)


def reaches(h: Hypergraph, dynamics: Dynamics, w1: int, w2: int) -> bool:
    return w2 in config_bfs(h, dynamics, w1)


def reachable_to_hex(reachable: Iterable[int]) -> str:
    """Sorted hex encoding of a reachable set, one configuration per line."""
    return "\n".join(f"{s:x}" for s in sorted(reachable)) + "\n"


def reachable_from_hex(text: str) -> frozenset[int]:
    return frozenset(int(ln, 16) for ln in text.split() if ln)


def states_reaching(h: Hypergraph, dynamics: Dynamics, target: int) -> frozenset[int]:
    """All states from which the target is reachable (backward closure)."""
    if h.n > 22:
        raise ValueError("state space too large")
    preds: dict[int, set[int]] = {}
    for s in range(1 << h.n):
        for s2 in successors(h, dynamics, s):
            preds.setdefault(s2, set()).add(s)
    seen = {target}
    frontier = [target]
    while frontier:
        nxt = []
        for s in frontier:
            for p in preds.get(s, ()):
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return frozenset(seen)


def bfs_stabilizing_set(h: Hypergraph) -> frozenset[int]:
    """States whose entire forward closure can still reach 0 (ARW moves).

    This is the brute-force counterpart of the GF(2) certificate in
    :func:`hyperdrift.gf2.is_stabilizing`.
    """
    good = states_reaching(h, "arw-eager", 0)
    bad = set(range(1 << h.n)) - good
    # A state is stabilizing iff it cannot reach the bad set.
    preds: dict[int, set[int]] = {}
    for s in range(1 << h.n):
        for s2 in successors(h, "arw-eager", s):
            preds.setdefault(s2, set()).add(s)
    can_reach_bad = set(bad)
    frontier = list(bad)
    while frontier:
        s = frontier.pop()
        for p in preds.get(s, ()):
            if p not in can_reach_bad:
                can_reach_bad.add(p)
                frontier.append(p)
    return frozenset(range(1 << h.n)) - frozenset(can_reach_bad)
