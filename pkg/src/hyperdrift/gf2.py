"""GF(2) linear algebra on int-packed rows.

A row is a Python int whose bit i is the coefficient of column i, so XOR
is word-parallel elimination for free.  All certificates in the package
(unique satisfiability, stabilizing configurations, cyclicity, odd
connectivity) reduce to rank/kernel/solve calls on such systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:  # pragma: no cover
    from .hypergraph import Hypergraph
    from .xorsat import XorSatInstance


class SolveStatus(Enum):
    UNIQUE = "unique"
    AFFINE = "affine"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class Gf2System:
    """rows x cols boolean system  a . x = b  with rows packed as ints."""

    rows: int
    cols: int
    a: tuple[int, ...]
    b: int  # bit i = right-hand side of row i

    def __post_init__(self) -> None:
        if len(self.a) != self.rows:
            raise ValueError("row count mismatch")
        mask = (1 << self.cols) - 1
        if any(row & ~mask for row in self.a):
            raise ValueError("row has bits beyond cols")
        if self.b & ~((1 << self.rows) - 1):
            raise ValueError("rhs has bits beyond rows")

    def residual(self, x: int) -> int:
        """Bitmask of rows not satisfied by assignment x."""
        out = 0
        for i, row in enumerate(self.a):
            if ((row & x).bit_count() & 1) != ((self.b >> i) & 1):
                out |= 1 << i
        return out


@dataclass(frozen=True)
class SolveResult:
    status: SolveStatus
    witness: int | None  # a particular solution; None iff inconsistent
    rank: int
    kernel: tuple[int, ...]  # reduced-echelon basis of the homogeneous kernel

    @property
    def consistent(self) -> bool:
        return self.status is not SolveStatus.INCONSISTENT


def rref(rows: Sequence[int], cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    work = list(rows)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        bit = 1 << c
        pivot = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def rank(rows: Sequence[int], cols: int) -> int:
    return len(rref(rows, cols)[1])


def kernel_basis(rows: Sequence[int], cols: int) -> list[int]:
    """Basis of {x : row . x = 0 for all rows}, one vector per free column.

    Deterministic: free columns are visited in increasing order and each
    basis vector has a 1 in exactly one free column.
    """
    reduced, pivots = rref(rows, cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for row, p in zip(reduced, pivots):
            if row & (1 << free):
                vec |= 1 << p
        basis.append(vec)
    return basis


def solve(system: Gf2System) -> SolveResult:
    """Solve a . x = b, reporting rank, a witness and the kernel."""
    # Eliminate on rows augmented with the rhs in bit position `cols`.
    aug = [row | (((system.b >> i) & 1) << system.cols) for i, row in enumerate(system.a)]
    reduced, pivots = rref(aug, system.cols + 1)
    if pivots and pivots[-1] == system.cols:
        # A zero row of `a` demands 1 on the rhs.
        a_rank = len(pivots) - 1
        return SolveResult(SolveStatus.INCONSISTENT, None, a_rank, ())
    a_rank = len(pivots)
    rhs_bit = 1 << system.cols
    witness = 0
    for row, p in zip(reduced, pivots):
        if row & rhs_bit:
            witness |= 1 << p
    kernel = tuple(kernel_basis(system.a, system.cols))
    status = SolveStatus.UNIQUE if a_rank == system.cols else SolveStatus.AFFINE
    return SolveResult(status, witness, a_rank, kernel)


# ---------------------------------------------------------------------------
# Systems attached to hypergraphs and XOR-SAT instances.


def reachability_system(h: "Hypergraph", w1: int, w2: int) -> Gf2System:
    """Edge-use parity system: one unknown per hyperedge, one row per vertex.

    Row v says that the edges containing v are used an odd number of times
    exactly when the two configurations disagree at v.  Vertices in no edge
    yield empty (all-zero) rows.  Repeated hyperedges get distinct columns.
    """
    limit = 1 << h.n
    if w1 >= limit or w2 >= limit or w1 < 0 or w2 < 0:
        raise ValueError("configuration does not fit the vertex count")
    rows = [0] * h.n
    for e, edge in enumerate(h.edges):
        for v in edge:
            rows[v] |= 1 << e
    diff = w1 ^ w2
    return Gf2System(h.n, len(h.edges), tuple(rows), diff)


def is_stabilizing(h: "Hypergraph", w1: int) -> bool:
    """Whether total annihilation stays reachable from w1 and its descendants.

    Certified by consistency of the edge-use parity system with target 0.
    """
    return solve(reachability_system(h, w1, 0)).consistent


def instance_system(inst: "XorSatInstance") -> Gf2System:
    rows = tuple(eq.mask for eq in inst.equations)
    b = 0
    for i, eq in enumerate(inst.equations):
        b |= eq.rhs << i
    return Gf2System(len(inst.equations), inst.n, rows, b)


def is_uniquely_satisfiable(inst: "XorSatInstance") -> bool:
    return solve(instance_system(inst)).status is SolveStatus.UNIQUE


def unique_witness(inst: "XorSatInstance") -> int:
    res = solve(instance_system(inst))
    if res.status is not SolveStatus.UNIQUE:
        raise ValueError("instance is not uniquely satisfiable")
    assert res.witness is not None
    return res.witness


def is_cyclic(inst: "XorSatInstance") -> bool:
    """Every variable occurs in an even number of equations."""
    counts = [0] * inst.n
    for eq in inst.equations:
        for v in eq.vars:
            counts[v] ^= 1
    return not any(counts)


def is_acyclic(inst: "XorSatInstance") -> bool:
    """No nonempty subset of equations touches every variable evenly.

    Equivalent to a trivial kernel of the equation-by-variable incidence
    matrix, with equation subsets as the unknowns.
    """
    m = len(inst.equations)
    rows = [0] * inst.n
    for i, eq in enumerate(inst.equations):
        for v in eq.vars:
            rows[v] |= 1 << i
    return not kernel_basis(rows, m)
