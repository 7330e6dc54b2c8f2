"""Set-family constructions from triangle instances.

The universe is the C part; each A-vertex and each B-vertex contributes its
C-neighborhood as a set (A-vertices occupy family slots [0, |A|),
B-vertices the next |B| slots); each A x B edge becomes one query. An edge
is in a triangle exactly when its two sets intersect, and the intersection
elements are the completing C-vertices, so listing round-trips through
set intersection with the same global cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .instances import SetFamilyInstance, TripartiteWeightedGraph
from .oracles import Triangle


@dataclass(frozen=True)
class SetDecodeMap:
    """Query order for decoding set answers back to per-edge answers."""

    edges: tuple[tuple[int, int], ...]

    def decode_disjointness(self, answers) -> dict[tuple[int, int], bool]:
        """Per A x B edge: in a triangle iff its query is NOT disjoint."""
        if len(answers) != len(self.edges):
            raise ValueError("answers do not align with the queries")
        return {edge: not disjoint
                for edge, disjoint in zip(self.edges, answers)}

    def decode_intersection(self, element_lists) -> dict[tuple[int, int], list[Triangle]]:
        """Per A x B edge: the triangles its intersection elements complete."""
        if len(element_lists) != len(self.edges):
            raise ValueError("answers do not align with the queries")
        return {(a, b): [(a, b, c) for c in elements]
                for (a, b), elements in zip(self.edges, element_lists)}


def _build(g: TripartiteWeightedGraph, output_cap: Optional[int]):
    na, nb, _nc = g.part_sizes
    family = [set() for _ in range(na + nb)]
    for c, a, _w in g.edges_ca:
        family[a].add(c)
    for b, c, _w in g.edges_bc:
        family[na + b].add(c)
    edges = tuple(sorted((a, b) for a, b, _w in g.edges_ab))
    queries = tuple((a, na + b) for a, b in edges)
    instance = SetFamilyInstance(
        g.part_sizes[2],
        tuple(tuple(sorted(s)) for s in family),
        queries,
        output_cap,
    )
    return instance, SetDecodeMap(edges)


def sparse_triangle_to_set_disjointness(
    g: TripartiteWeightedGraph,
) -> tuple[SetFamilyInstance, SetDecodeMap]:
    """All-edges triangle detection as batched set disjointness."""
    return _build(g, None)


def listing_to_set_intersection(
    g: TripartiteWeightedGraph,
    global_cap: Optional[int],
) -> tuple[SetFamilyInstance, SetDecodeMap]:
    """Globally-capped triangle listing as batched set intersection."""
    return _build(g, global_cap)
