"""Structure-preserving reductions from triangle listing to triangle
detection.

Two halves. Unique-listing-via-detection recovers, for each A x B edge in
exactly one triangle, the third vertex bit by bit from detection answers
on index-restricted C-subsets; a recovered candidate is verified against
the adjacency, so a returned triangle is never wrong. Listing-via-unique
then samples geometric C-subsets across stages so that whatever the true
per-edge triangle count, some stage isolates triangles one at a time.

Both keep part sizes and degrees intact: subgraphs drop edges, never
reindex vertices.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Callable, Optional

from .instances import TripartiteWeightedGraph
from .oracles import Triangle
from .rng import RngStream
from .zero_triangle import ceil_log2

DetectionSolver = Callable[[TripartiteWeightedGraph], dict[tuple[int, int], bool]]
UniqueSolver = Callable[[TripartiteWeightedGraph],
                        dict[tuple[int, int], Optional[Triangle]]]


def _restrict_c(g: TripartiteWeightedGraph, keep_mask: int) -> TripartiteWeightedGraph:
    """Drop BC and CA edges whose C endpoint is not in the mask."""
    return replace(
        g,
        edges_bc=tuple(e for e in g.edges_bc if (keep_mask >> e[1]) & 1),
        edges_ca=tuple(e for e in g.edges_ca if (keep_mask >> e[0]) & 1),
    )


def unique_listing_via_detection(
    g: TripartiteWeightedGraph,
    detection_solver: DetectionSolver,
) -> dict[tuple[int, int], Optional[Triangle]]:
    """Per A x B edge: its triangle when that triangle is unique, else None.

    Runs ceil(log2 |C|) detection calls, one per bit position, on the
    subgraphs induced by C-vertices whose index has that bit set. An edge in
    exactly one triangle reads off its C-vertex's bits from the answers;
    edges in zero or several triangles may assemble a bogus index, which the
    final adjacency check rejects.
    """
    nc = g.part_sizes[2]
    ab_edges = [(a, b) for a, b, _w in g.edges_ab]
    if nc == 0:
        return {edge: None for edge in ab_edges}
    bits = (nc - 1).bit_length()

    candidate = {edge: 0 for edge in ab_edges}
    for bit in range(bits):
        mask = 0
        for c in range(nc):
            if (c >> bit) & 1:
                mask |= 1 << c
        answers = detection_solver(_restrict_c(g, mask))
        for edge in ab_edges:
            if answers.get(edge, False):
                candidate[edge] |= 1 << bit

    has_bc = {(b, c) for b, c, _w in g.edges_bc}
    has_ca = {(c, a) for c, a, _w in g.edges_ca}
    out: dict[tuple[int, int], Optional[Triangle]] = {}
    for (a, b) in ab_edges:
        c = candidate[(a, b)]
        if c < nc and (b, c) in has_bc and (c, a) in has_ca:
            out[(a, b)] = (a, b, c)
        else:
            out[(a, b)] = None
    return out


def listing_via_unique(
    g: TripartiteWeightedGraph,
    per_edge_cap: int,
    unique_solver: UniqueSolver,
    rng: RngStream,
    c_iter: int = 4,
) -> dict[tuple[int, int], list[Triangle]]:
    """Recover up to ``per_edge_cap`` triangles per A x B edge by random
    C-subsampling.

    Stage l keeps each C-vertex with probability 2^-l; when an edge's true
    triangle count sits near 2^l, a kept subset often isolates exactly one
    not-yet-found triangle, which the unique solver then reports. Stage
    count is ceil(3 log2(|C|+2)); each stage runs
    c_iter * cap^2 * ceil(log2(n+2)) iterations. Found triangles are
    verified against g before being kept, and each edge's list is returned
    sorted and truncated to the cap.
    """
    ab_edges = [(a, b) for a, b, _w in g.edges_ab]
    found: dict[tuple[int, int], set] = {edge: set() for edge in ab_edges}
    if per_edge_cap <= 0 or not ab_edges:
        return {edge: [] for edge in ab_edges}

    nc = g.part_sizes[2]
    n = sum(g.part_sizes)
    stages = ceil_log2((nc + 2) ** 3)  # = ceil(3 log2(nc + 2))
    iterations = c_iter * per_edge_cap * per_edge_cap * ceil_log2(n + 2)
    has_bc = {(b, c) for b, c, _w in g.edges_bc}
    has_ca = {(c, a) for c, a, _w in g.edges_ca}

    unsaturated = len(ab_edges)
    for stage in range(1, stages + 1):
        denom = 1 << stage
        for it in range(iterations):
            if unsaturated == 0:
                break
            stream = rng.child("stage", stage, "iter", it)
            mask = 0
            for c in range(nc):
                if stream.randrange(denom) == 0:
                    mask |= 1 << c
            if mask == 0:
                continue
            result = unique_solver(_restrict_c(g, mask))
            for edge, tri in result.items():
                if tri is None:
                    continue
                a, b, c = tri
                if edge != (a, b) or (b, c) not in has_bc or (c, a) not in has_ca:
                    continue  # unique solvers must not invent triangles
                bucket = found[edge]
                if tri not in bucket:
                    bucket.add(tri)
                    if len(bucket) == per_edge_cap:
                        unsaturated -= 1
        if unsaturated == 0:
            break

    return {edge: sorted(found[edge])[:per_edge_cap] for edge in ab_edges}


def listing_via_detection(
    g: TripartiteWeightedGraph,
    per_edge_cap: int,
    detection_solver: DetectionSolver,
    rng: RngStream,
    c_iter: int = 4,
) -> dict[tuple[int, int], list[Triangle]]:
    """Composition: listing through unique-listing through detection."""
    def unique(sub: TripartiteWeightedGraph):
        return unique_listing_via_detection(sub, detection_solver)

    return listing_via_unique(g, per_edge_cap, unique, rng, c_iter=c_iter)
