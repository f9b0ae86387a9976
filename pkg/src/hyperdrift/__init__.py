"""WalkSAT on XOR-SAT, hypergraph particle systems, and odd-cut drift analysis."""

from .hypergraph import Hypergraph, hypergraph
from .xorsat import XorSatInstance, instance

__all__ = ["Hypergraph", "hypergraph", "XorSatInstance", "instance"]
__version__ = "0.1.0"
