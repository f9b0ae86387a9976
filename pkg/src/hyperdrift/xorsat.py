"""XOR-SAT instances, their hypergraphs, duals and generator families.

An instance is a list of parity equations over n boolean variables.
Assignments are ints (bit v = value of variable v), like vertex
configurations in :mod:`hyperdrift.hypergraph`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .hypergraph import Hypergraph
from .rng import SplitMix64, spawn


class InstanceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Equation:
    vars: tuple[int, ...]  # strictly increasing variable ids
    rhs: int

    def __post_init__(self) -> None:
        if not self.vars:
            raise ValueError("equation with no variables")
        if any(a >= b for a, b in zip(self.vars, self.vars[1:])):
            raise ValueError("variables must be strictly increasing")
        if self.rhs not in (0, 1):
            raise ValueError("right-hand side must be 0 or 1")

    @property
    def mask(self) -> int:
        return sum(1 << v for v in self.vars)


@dataclass(frozen=True)
class XorSatInstance:
    n: int
    equations: tuple[Equation, ...]
    k: int | None = None  # uniform width, when the family guarantees one

    def __post_init__(self) -> None:
        for eq in self.equations:
            if eq.vars[-1] >= self.n:
                raise ValueError("variable out of range")
            if self.k is not None and len(eq.vars) != self.k:
                raise ValueError(f"equation width {len(eq.vars)} != k={self.k}")

    @property
    def m(self) -> int:
        return len(self.equations)


def instance(n: int, equations: Iterable[tuple[Iterable[int], int]], k: int | None = None) -> XorSatInstance:
    eqs = tuple(Equation(tuple(sorted(vs)), rhs) for vs, rhs in equations)
    return XorSatInstance(n, eqs, k)


def eval_equation(eq: Equation, x: int) -> bool:
    """True iff the assignment satisfies the equation."""
    return ((eq.mask & x).bit_count() & 1) == eq.rhs


def unsat_mask(inst: XorSatInstance, x: int) -> int:
    """Bit e set iff equation e is unsatisfied by x."""
    out = 0
    for e, eq in enumerate(inst.equations):
        if not eval_equation(eq, x):
            out |= 1 << e
    return out


def satisfies(inst: XorSatInstance, x: int) -> bool:
    return unsat_mask(inst, x) == 0


def has_distinct_varsets(inst: XorSatInstance) -> bool:
    masks = [eq.mask for eq in inst.equations]
    return len(set(masks)) == len(masks)


# ---------------------------------------------------------------------------
# Hypergraphs of an instance.


def formula_hypergraph(inst: XorSatInstance) -> Hypergraph:
    """Variables as vertices, one hyperedge per equation, in equation order."""
    return Hypergraph(inst.n, tuple(eq.vars for eq in inst.equations))


def triadic_dual(inst: XorSatInstance) -> Hypergraph:
    """Equations as vertices, one hyperedge per variable.

    A variable's edge is the set of equations containing it; a variable in
    a single equation becomes a self-loop there, and variables in no
    equation are dropped.  The result is k-regular for k-uniform input.
    """
    if inst.m == 0:
        raise ValueError("dual of an instance with no equations")
    occ: list[list[int]] = [[] for _ in range(inst.n)]
    for e, eq in enumerate(inst.equations):
        for v in eq.vars:
            occ[v].append(e)
    edges = tuple(tuple(lst) for lst in occ if lst)
    return Hypergraph(inst.m, edges)


def dual_vars(inst: XorSatInstance) -> list[int]:
    """Variable ids in dual-edge order (variables with no occurrence skipped)."""
    used = [False] * inst.n
    for eq in inst.equations:
        for v in eq.vars:
            used[v] = True
    return [v for v in range(inst.n) if used[v]]


def dual_config(inst: XorSatInstance, x: int) -> int:
    """Configuration on the dual: label 1 iff the equation is UNSATISFIED.

    With this convention the live vertices of the annihilating walk are
    the unsatisfied clauses and the target is the all-zeros state.
    """
    return unsat_mask(inst, x)


# ---------------------------------------------------------------------------
# Generator families.  Each generator's auxiliary input doubles as a
# satisfying witness by construction.


def gen_complete(k: int, n: int, z: int) -> XorSatInstance:
    """All C(n,k) width-k equations, right-hand sides read off z."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    eqs = []
    for sub in combinations(range(n), k):
        rhs = sum((z >> v) & 1 for v in sub) & 1
        eqs.append(Equation(sub, rhs))
    return XorSatInstance(n, tuple(eqs), k)


def hnru_variables(n: int, r: int) -> list[tuple[int, ...]]:
    """The r-subsets of range(n) in lexicographic order = variable ids."""
    return list(combinations(range(n), r))


def gen_hnru(n: int, r: int, u: Mapping[tuple[int, ...], int]) -> XorSatInstance:
    """One variable per r-subset, one equation per ground element.

    Equation i sums the variables of all subsets containing i; the labels
    u satisfy the instance by construction.  The triadic dual is the
    complete r-uniform hypergraph on n vertices.
    """
    if not 1 <= r <= n:
        raise ValueError("need 1 <= r <= n")
    subsets = hnru_variables(n, r)
    index = {sub: i for i, sub in enumerate(subsets)}
    missing = [sub for sub in subsets if sub not in u]
    if missing:
        raise ValueError(f"labels missing for {len(missing)} subsets, e.g. {missing[0]}")
    eqs = []
    for i in range(n):
        vs = tuple(index[sub] for sub in subsets if i in sub)
        rhs = 0
        for sub in subsets:
            if i in sub:
                rhs ^= u[sub] & 1
        eqs.append(Equation(vs, rhs))
    width = len(eqs[0].vars)
    k = width if all(len(e.vars) == width for e in eqs) else None
    return XorSatInstance(len(subsets), tuple(eqs), k)


def hnru_witness(n: int, r: int, u: Mapping[tuple[int, ...], int]) -> int:
    z = 0
    for i, sub in enumerate(hnru_variables(n, r)):
        z |= (u[sub] & 1) << i
    return z


def gen_triadic_cycle(m: int, u: Sequence[int]) -> XorSatInstance:
    """Ring of m triangles, consecutive triangles sharing one edge-variable.

    Variables 0..m-1 are the shared edges (variable i between triangles
    i-1 and i... between i and i+1), variables m..2m-1 the private edges.
    Triangle i is the equation over {i, (i+1) % m, m+i} with rhs the
    parity of u on those three variables.  Shared variables occur twice,
    private ones once, so the dual is an m-cycle with a self-loop on each
    vertex, 3-regular.
    """
    if m < 3:
        raise ValueError("need at least 3 triangles")
    if len(u) != 2 * m:
        raise ValueError("u must label all 2m edge-variables")
    eqs = []
    for i in range(m):
        vs = tuple(sorted((i, (i + 1) % m, m + i)))
        rhs = (u[i] ^ u[(i + 1) % m] ^ u[m + i]) & 1
        eqs.append(Equation(vs, rhs))
    return XorSatInstance(2 * m, tuple(eqs), 3)


def labels_to_assignment(u: Sequence[int]) -> int:
    return sum((bit & 1) << i for i, bit in enumerate(u))


def triangles_of(n: int, pairs: Sequence[tuple[int, int]]) -> list[tuple[int, int, int]]:
    edge_set = {tuple(sorted(p)) for p in pairs}
    out = []
    for a, b, c in combinations(range(n), 3):
        if (a, b) in edge_set and (a, c) in edge_set and (b, c) in edge_set:
            out.append((a, b, c))
    return out


def gen_ctd(
    n: int,
    pairs: Sequence[tuple[int, int]],
    labels: Sequence[int],
    targets: Sequence[int] | None = None,
) -> tuple[XorSatInstance, int]:
    """Constrained triadic dynamics as 3-XOR-SAT over the edges of a graph.

    One variable per graph edge (in the given edge order), one equation
    per triangle, rhs = parity of `targets` on its edges (all balanced by
    default).  Returns the instance and the initial assignment read off
    `labels`.  Triangle-free graphs yield no equations.
    """
    edges = [tuple(sorted(p)) for p in pairs]
    if len(set(edges)) != len(edges):
        raise ValueError("graph has a repeated edge")
    if any(a == b for a, b in edges):
        raise ValueError("graph has a self-loop")
    if len(labels) != len(edges):
        raise ValueError("labels must cover all edges")
    if targets is None:
        targets = [0] * len(edges)
    if len(targets) != len(edges):
        raise ValueError("targets must cover all edges")
    index = {e: i for i, e in enumerate(edges)}
    eqs = []
    for a, b, c in triangles_of(n, edges):
        vs = tuple(sorted((index[(a, b)], index[(a, c)], index[(b, c)])))
        rhs = (targets[vs[0]] ^ targets[vs[1]] ^ targets[vs[2]]) & 1
        eqs.append(Equation(vs, rhs))
    inst = XorSatInstance(len(edges), tuple(eqs), 3 if eqs else None)
    return inst, labels_to_assignment(labels)


def _hex_patch(radius: int):
    """Vertices, edges and unit triangles of a hexagonal patch of the
    triangular lattice, in cube coordinates (x+y+z = 0, max |.| <= radius)."""
    verts = [
        (x, y, -x - y)
        for x in range(-radius, radius + 1)
        for y in range(-radius, radius + 1)
        if max(abs(x), abs(y), abs(x + y)) <= radius
    ]
    index = {v: i for i, v in enumerate(sorted(verts))}
    dirs = [(1, 0, -1), (0, 1, -1), (-1, 1, 0)]
    edges = set()
    tris = set()
    for v in index:
        for dx, dy, dz in dirs:
            w = (v[0] + dx, v[1] + dy, v[2] + dz)
            if w in index:
                edges.add(tuple(sorted((index[v], index[w]))))
        # the two unit-triangle orientations anchored at v
        for a, b in (((1, 0, -1), (0, 1, -1)), ((1, 0, -1), (1, -1, 0))):
            p = (v[0] + a[0], v[1] + a[1], v[2] + a[2])
            q = (v[0] + b[0], v[1] + b[1], v[2] + b[2])
            if p in index and q in index:
                tris.add(tuple(sorted((index[v], index[p], index[q]))))
    boundary = {
        index[v] for v in index if max(abs(v[0]), abs(v[1]), abs(v[2])) == radius
    }
    return index, sorted(edges), sorted(tris), boundary


def gen_glued_lattice(radius: int, u: Sequence[int] | None = None) -> XorSatInstance:
    """Two hexagonal triangular-lattice patches glued along their boundary.

    Interior vertices are doubled, boundary vertices shared, so every
    edge lies in exactly two triangles; variables are the glued edges and
    each triangle contributes one equation with rhs the parity of u on
    its edges (u defaults to zero).  The triadic dual is a loop-free
    3-regular graph: the nonnegative-drift regime with zero attained.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    index, edges, tris, boundary = _hex_patch(radius)
    n_pts = len(index)

    def lift(vertex: int, copy: int) -> int:
        return vertex if vertex in boundary else n_pts * copy + vertex

    glued_edges: dict[tuple[int, int], int] = {}
    equations: list[tuple[int, int, int]] = []
    for copy in (0, 1):
        for a, b, c in tris:
            va, vb, vc = lift(a, copy), lift(b, copy), lift(c, copy)
            eq = []
            for pair in ((va, vb), (va, vc), (vb, vc)):
                key = tuple(sorted(pair))
                if key not in glued_edges:
                    glued_edges[key] = len(glued_edges)
                eq.append(glued_edges[key])
            equations.append(tuple(sorted(eq)))
    n_vars = len(glued_edges)
    if u is None:
        u = [0] * n_vars
    if len(u) != n_vars:
        raise ValueError(f"u must label all {n_vars} edge-variables")
    eqs = [
        Equation(vs, (u[vs[0]] ^ u[vs[1]] ^ u[vs[2]]) & 1) for vs in equations
    ]
    return XorSatInstance(n_vars, tuple(eqs), 3)


def gen_random_k_uniform(
    n: int,
    m: int,
    k: int,
    seed: int,
    connected: bool = False,
    max_tries: int = 10_000,
) -> tuple[XorSatInstance, int]:
    """m distinct random width-k varsets with a planted satisfying z."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    from math import comb

    if m > comb(n, k):
        raise ValueError("more equations than distinct varsets")
    from .hypergraph import is_connected

    for t in range(max_tries):
        rng = SplitMix64(spawn(seed, t))
        z = rng.bits(n)
        seen: set[tuple[int, ...]] = set()
        while len(seen) < m:
            seen.add(tuple(rng.sample_indices(n, k)))
        eqs = []
        for vs in sorted(seen):
            rhs = sum((z >> v) & 1 for v in vs) & 1
            eqs.append(Equation(vs, rhs))
        inst = XorSatInstance(n, tuple(eqs), k)
        if not connected or is_connected(formula_hypergraph(inst)):
            return inst, z
    raise RuntimeError("could not sample a connected instance")


# ---------------------------------------------------------------------------
# Text format.
#
#   p xnf <n> <m>
#   <b> v1 v2 ... vk 0     (rhs bit first, ids strictly increasing,
#                           a literal 0 token closes the line)
#
# Lines starting with 'c' are comments.  Assignments are a single line of
# n characters over {0,1}, character i = variable i.


def format_instance(inst: XorSatInstance) -> str:
    lines = [f"p xnf {inst.n} {inst.m}"]
    for eq in inst.equations:
        lines.append(f"{eq.rhs} " + " ".join(str(v) for v in eq.vars) + " 0")
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> XorSatInstance:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("c")]
    if not lines:
        raise InstanceFormatError("empty input")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "p" or head[1] != "xnf":
        raise InstanceFormatError(f"bad header: {lines[0]!r}")
    try:
        n, m = int(head[2]), int(head[3])
    except ValueError as exc:
        raise InstanceFormatError(f"bad header: {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise InstanceFormatError(f"expected {m} equation lines, found {len(lines) - 1}")
    eqs = []
    for ln in lines[1:]:
        try:
            toks = [int(t) for t in ln.split()]
        except ValueError as exc:
            raise InstanceFormatError(f"bad equation line: {ln!r}") from exc
        if len(toks) < 3 or toks[-1] != 0:
            raise InstanceFormatError(f"equation line must end with 0: {ln!r}")
        rhs, vs = toks[0], toks[1:-1]
        if rhs not in (0, 1):
            raise InstanceFormatError(f"rhs must be 0 or 1: {ln!r}")
        if len(set(vs)) != len(vs):
            raise InstanceFormatError(f"duplicate variable: {ln!r}")
        if any(a >= b for a, b in zip(vs, vs[1:])):
            raise InstanceFormatError(f"variables not strictly increasing: {ln!r}")
        if any(v < 0 or v >= n for v in vs):
            raise InstanceFormatError(f"variable out of range: {ln!r}")
        eqs.append(Equation(tuple(vs), rhs))
    widths = {len(e.vars) for e in eqs}
    k = widths.pop() if len(widths) == 1 else None
    return XorSatInstance(n, tuple(eqs), k)


def format_assignment(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n)) + "\n"


def parse_assignment(text: str, n: int) -> int:
    line = text.strip()
    if len(line) != n or any(c not in "01" for c in line):
        raise InstanceFormatError(f"assignment must be {n} characters over {{0,1}}")
    return sum(1 << i for i, c in enumerate(line) if c == "1")
