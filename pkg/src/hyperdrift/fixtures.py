"""Built-in regression fixtures.

The two unreachability counterexamples: configurations whose edge-use
parity system is solvable even though no sequence of annihilating moves
connects them.  They pin down that solvability is necessary but not
sufficient for reachability, in a loopless hypergraph and in a plain
graph respectively.
"""

from __future__ import annotations

from .hypergraph import Hypergraph, complete_graph, vertex_mask


def three_edge_star() -> tuple[Hypergraph, int, int]:
    """Three size-3 hyperedges sharing one vertex; no graph edges.

    w1 marks the two private vertices of the middle edge, w2 everything
    except the shared vertex.  The parity system has the solution using
    the two outer edges once, yet w2 has no preimage chain from w1.
    """
    h = Hypergraph(7, ((0, 1, 2), (0, 3, 4), (0, 5, 6)))
    w1 = vertex_mask([3, 4])
    w2 = vertex_mask([1, 2, 3, 4, 5, 6])
    return h, w1, w2


def k4_single_one() -> tuple[Hypergraph, int, int]:
    """K4 with one live vertex versus the complementary three.

    Using every edge once solves the parity system, but on a loop-free
    graph the number of live vertices never increases, so three ones are
    unreachable from one.
    """
    h = complete_graph(4)
    w1 = vertex_mask([0])
    w2 = vertex_mask([1, 2, 3])
    return h, w1, w2


def counterexamples() -> list[tuple[str, Hypergraph, int, int]]:
    star = three_edge_star()
    k4 = k4_single_one()
    return [("three-edge-star", *star), ("k4-single-one", *k4)]
