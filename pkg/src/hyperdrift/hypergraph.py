"""Hypergraphs with self-loops and repeated hyperedges.

Vertices are 0..n-1.  An edge is a duplicate-free set of vertices, stored
sorted; the *position* of an edge in the sequence is its identity, so the
same vertex set may appear several times (e.g. multiple self-loops on one
vertex) and is counted separately everywhere.

Boolean configurations on vertices are ints: bit v is the label of vertex
v.  The same packing is used for vertex subsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable

from . import gf2
from .rng import SplitMix64, spawn


class HypergraphFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one vertex")
        for e, edge in enumerate(self.edges):
            if not edge:
                raise ValueError(f"edge {e} is empty")
            if any(v < 0 or v >= self.n for v in edge):
                raise ValueError(f"edge {e} has a vertex out of range")
            if any(a >= b for a, b in zip(edge, edge[1:])):
                raise ValueError(f"edge {e} is not strictly increasing")

    @property
    def m(self) -> int:
        return len(self.edges)

    def full_mask(self) -> int:
        return (1 << self.n) - 1


def hypergraph(n: int, edges: Iterable[Iterable[int]]) -> Hypergraph:
    """Build a Hypergraph, sorting each edge and checking for duplicates."""
    normalized = []
    for edge in edges:
        tup = tuple(sorted(edge))
        if len(set(tup)) != len(tup):
            raise ValueError(f"duplicate vertex within edge {tup}")
        normalized.append(tup)
    return Hypergraph(n, tuple(normalized))


@lru_cache(maxsize=None)
def edge_masks(h: Hypergraph) -> tuple[int, ...]:
    return tuple(sum(1 << v for v in edge) for edge in h.edges)


@lru_cache(maxsize=None)
def incident_edges(h: Hypergraph) -> tuple[tuple[int, ...], ...]:
    """For each vertex, the indices of edges containing it."""
    out: list[list[int]] = [[] for _ in range(h.n)]
    for e, edge in enumerate(h.edges):
        for v in edge:
            out[v].append(e)
    return tuple(tuple(lst) for lst in out)


def degree(h: Hypergraph, v: int) -> int:
    """Number of (edge, v) incidences; a repeated edge counts each time."""
    if not 0 <= v < h.n:
        raise ValueError(f"vertex {v} out of range")
    return len(incident_edges(h)[v])


def degrees(h: Hypergraph) -> list[int]:
    return [len(lst) for lst in incident_edges(h)]


def neighbors(h: Hypergraph, v: int) -> set[int]:
    """Open neighborhood: vertices sharing an edge with v, excluding v."""
    if not 0 <= v < h.n:
        raise ValueError(f"vertex {v} out of range")
    out: set[int] = set()
    for e in incident_edges(h)[v]:
        out.update(h.edges[e])
    out.discard(v)
    return out


def closed_neighbors(h: Hypergraph, v: int) -> set[int]:
    return neighbors(h, v) | {v}


def is_connected(h: Hypergraph) -> bool:
    """Connectivity of the vertex-edge incidence graph, over vertices."""
    if h.n == 1:
        return True
    parent = list(range(h.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for edge in h.edges:
        root = find(edge[0])
        for v in edge[1:]:
            parent[find(v)] = root
    return len({find(v) for v in range(h.n)}) == 1


def even_dominating_kernel(h: Hypergraph) -> list[int]:
    """GF(2) basis of vertex sets meeting every edge an even number of times.

    These are exactly the kernel vectors of the edge-by-vertex incidence
    matrix; the empty set is the zero vector.  Basis is in reduced echelon
    form, so output is deterministic.
    """
    return gf2.kernel_basis(edge_masks(h), h.n)


def is_odd_connected(h: Hypergraph) -> bool:
    """No even parity dominating set other than the empty and full sets."""
    if not is_connected(h):
        raise ValueError("odd-connectivity is defined for connected hypergraphs")
    basis = even_dominating_kernel(h)
    if not basis:
        return True
    return len(basis) == 1 and basis[0] == h.full_mask()


class OddCase(Enum):
    ODD_EDGE = "odd-edge"
    ALL_EVEN = "all-even"


def odd_case(h: Hypergraph) -> OddCase:
    """Whether some hyperedge has odd size (drives the absorbing-state set)."""
    if any(len(edge) % 2 for edge in h.edges):
        return OddCase.ODD_EDGE
    return OddCase.ALL_EVEN


# ---------------------------------------------------------------------------
# Configurations as ints.


def vertex_mask(vertices: Iterable[int]) -> int:
    out = 0
    for v in vertices:
        out |= 1 << v
    return out


def mask_vertices(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def config_from_string(bits: str) -> int:
    """'0110' -> int with bit i = character i."""
    if any(c not in "01" for c in bits):
        raise ValueError("configuration must be over {0,1}")
    return sum(1 << i for i, c in enumerate(bits) if c == "1")


def config_to_string(mask: int, n: int) -> str:
    return "".join("1" if (mask >> i) & 1 else "0" for i in range(n))


# ---------------------------------------------------------------------------
# Text format.
#
#   h <n> <m>
#   e v1 v2 ... vk        (m lines, ids strictly increasing; repeated
#                          identical lines encode repeated edges)


def format_hypergraph(h: Hypergraph) -> str:
    lines = [f"h {h.n} {h.m}"]
    lines.extend("e " + " ".join(str(v) for v in edge) for edge in h.edges)
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise HypergraphFormatError("empty input")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "h":
        raise HypergraphFormatError(f"bad header: {lines[0]!r}")
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError as exc:
        raise HypergraphFormatError(f"bad header: {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise HypergraphFormatError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        toks = ln.split()
        if toks[0] != "e":
            raise HypergraphFormatError(f"edge line must start with 'e': {ln!r}")
        try:
            vs = [int(t) for t in toks[1:]]
        except ValueError as exc:
            raise HypergraphFormatError(f"bad edge line: {ln!r}") from exc
        if not vs:
            raise HypergraphFormatError("empty edge")
        if any(a >= b for a, b in zip(vs, vs[1:])):
            raise HypergraphFormatError(f"vertices not strictly increasing: {ln!r}")
        if any(v < 0 or v >= n for v in vs):
            raise HypergraphFormatError(f"vertex out of range: {ln!r}")
        edges.append(tuple(vs))
    return Hypergraph(n, tuple(edges))


# ---------------------------------------------------------------------------
# Small builders used all over the tests and the check suites.


def graph(n: int, pairs: Iterable[tuple[int, int]]) -> Hypergraph:
    return hypergraph(n, ({a, b} for a, b in pairs))


def complete_graph(n: int) -> Hypergraph:
    return hypergraph(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def cycle_graph(n: int) -> Hypergraph:
    return hypergraph(n, ({i, (i + 1) % n} for i in range(n)))


def complete_k_uniform(n: int, k: int) -> Hypergraph:
    from itertools import combinations

    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    return Hypergraph(n, tuple(combinations(range(n), k)))


# ---------------------------------------------------------------------------
# Random hypergraphs for the check suites.  Rejection sampling keeps the
# constructions simple; all sizes involved are tiny.


def random_hypergraph(
    n: int,
    m: int,
    seed: int,
    max_size: int = 4,
    allow_loops: bool = True,
) -> Hypergraph:
    rng = SplitMix64(seed)
    edges = []
    lo = 1 if allow_loops else 2
    for _ in range(m):
        size = lo + rng.below(min(max_size, n) - lo + 1)
        edges.append(tuple(rng.sample_indices(n, size)))
    return Hypergraph(n, tuple(edges))


def random_connected_hypergraph(
    n: int,
    m: int,
    seed: int,
    max_size: int = 4,
    allow_loops: bool = True,
    max_tries: int = 10_000,
) -> Hypergraph:
    for t in range(max_tries):
        h = random_hypergraph(n, m, spawn(seed, t), max_size, allow_loops)
        if is_connected(h) and all(d > 0 for d in degrees(h)):
            return h
    raise RuntimeError("could not sample a connected hypergraph")


def random_odd_connected_hypergraph(
    n: int,
    m: int,
    seed: int,
    max_size: int = 4,
    even_only: bool = False,
    max_tries: int = 10_000,
) -> Hypergraph:
    for t in range(max_tries):
        sub = spawn(seed, t)
        if even_only:
            rng = SplitMix64(sub)
            edges = []
            for _ in range(m):
                size = 2 * (1 + rng.below(max(1, min(max_size, n) // 2)))
                edges.append(tuple(rng.sample_indices(n, size)))
            h = Hypergraph(n, tuple(edges))
        else:
            h = random_hypergraph(n, m, sub, max_size)
        if not (is_connected(h) and all(d > 0 for d in degrees(h))):
            continue
        if is_odd_connected(h):
            return h
    raise RuntimeError("could not sample an odd-connected hypergraph")


def random_k_regular_hypergraph(
    n: int,
    k: int,
    seed: int,
    max_size: int = 4,
) -> Hypergraph:
    """Every vertex gets degree exactly k; edge sizes vary, loops allowed.

    Greedy slot-filling: repeatedly draw an edge among vertices with spare
    degree.  A single leftover vertex is topped up with self-loops, which
    keeps regularity exact.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = SplitMix64(seed)
    remaining = [k] * n
    edges: list[tuple[int, ...]] = []
    while True:
        avail = [v for v in range(n) if remaining[v] > 0]
        if not avail:
            break
        if len(avail) == 1:
            v = avail[0]
            edges.extend([(v,)] * remaining[v])
            break
        size = 1 + rng.below(min(max_size, len(avail)))
        picked = sorted(avail[i] for i in rng.sample_indices(len(avail), size))
        for v in picked:
            remaining[v] -= 1
        edges.append(tuple(picked))
    return Hypergraph(n, tuple(edges))


def random_config(n: int, seed: int) -> int:
    return SplitMix64(seed).bits(n)


def random_subset(n: int, seed: int, size: int | None = None) -> int:
    rng = SplitMix64(seed)
    if size is None:
        return rng.bits(n)
    return vertex_mask(rng.sample_indices(n, size))
