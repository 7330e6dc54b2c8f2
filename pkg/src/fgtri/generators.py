"""Seeded instance generators.

Generators are pure functions of (parameters, stream): the same seed and
parameters always produce the same instance, on any platform. Weighted
graphs come out complete tripartite with near-balanced parts; optional
planting rewrites one triangle so its weights sum to zero.
"""

from __future__ import annotations

from typing import Optional

from .instances import (ColoredValuedGraph, IntMatrix, MINUS_INF, PLUS_INF,
                        SetFamilyInstance, TripartiteWeightedGraph)
from .rng import RngStream


def balanced_split(n: int) -> tuple[int, int, int]:
    """Split n vertices into three near-equal parts (sizes differ by <= 1)."""
    return ((n + 2) // 3, (n + 1) // 3, n // 3)


def generate_tripartite(
    n: int,
    weight_bound: int,
    plant_zero: bool,
    rng: RngStream,
) -> tuple[TripartiteWeightedGraph, Optional[tuple[int, int, int]]]:
    """Complete tripartite graph with weights uniform in [-bound, bound].

    With ``plant_zero`` one triple (a, b, c) gets its three edge weights
    adjusted, within the bound, so they sum to zero; the triple is returned
    alongside the graph. An empty graph (n = 0) is fine without planting.
    """
    if weight_bound < 1:
        raise ValueError("weight_bound must be >= 1")
    na, nb, nc = balanced_split(n)
    if plant_zero and min(na, nb, nc) == 0:
        raise ValueError("cannot plant a zero triangle with an empty part")

    wstream = rng.child("weights")
    edges_ab = [(a, b, wstream.randint(-weight_bound, weight_bound))
                for a in range(na) for b in range(nb)]
    edges_bc = [(b, c, wstream.randint(-weight_bound, weight_bound))
                for b in range(nb) for c in range(nc)]
    edges_ca = [(c, a, wstream.randint(-weight_bound, weight_bound))
                for c in range(nc) for a in range(na)]

    planted = None
    if plant_zero:
        pstream = rng.child("plant")
        a = pstream.randrange(na)
        b = pstream.randrange(nb)
        c = pstream.randrange(nc)
        w_ab = pstream.randint(-weight_bound, weight_bound)
        # Constrain the second draw so the closing weight stays in range.
        lo = max(-weight_bound, -weight_bound - w_ab)
        hi = min(weight_bound, weight_bound - w_ab)
        w_bc = pstream.randint(lo, hi)
        w_ca = -(w_ab + w_bc)
        edges_ab[a * nb + b] = (a, b, w_ab)
        edges_bc[b * nc + c] = (b, c, w_bc)
        edges_ca[c * na + a] = (c, a, w_ca)
        planted = (a, b, c)

    g = TripartiteWeightedGraph((na, nb, nc), tuple(edges_ab),
                                tuple(edges_bc), tuple(edges_ca))
    return g, planted


def generate_sparse_tripartite(
    sizes: tuple[int, int, int],
    keep_percent: int,
    weight_bound: int,
    rng: RngStream,
) -> TripartiteWeightedGraph:
    """Unbalanced tripartite graph keeping each edge with the given percent."""
    if not 0 <= keep_percent <= 100:
        raise ValueError("keep_percent must be in [0, 100]")
    na, nb, nc = sizes
    estream = rng.child("edges")

    def draw(nu, nv):
        out = []
        for u in range(nu):
            for v in range(nv):
                if estream.bernoulli(keep_percent, 100):
                    out.append((u, v, estream.randint(-weight_bound, weight_bound)))
        return tuple(out)

    return TripartiteWeightedGraph((na, nb, nc), draw(na, nb), draw(nb, nc),
                                   draw(nc, na))


def random_three_coloring(vertices: int, rng: RngStream) -> tuple[int, ...]:
    """Assign each vertex independently and uniformly to one of three parts.

    Callers repeat this O(log n) times: any fixed triangle lands with one
    vertex in each part ("rainbow") in some repetition with high
    probability. Labels 0/1/2 map to parts A/B/C by identity.
    """
    stream = rng.child("coloring")
    return tuple(stream.randrange(3) for _ in range(vertices))


def generate_colored(
    sizes: tuple[int, int, int],
    num_colors: int,
    keep_percent: int,
    value_range: int,
    value_sides: frozenset,
    rng: RngStream,
) -> ColoredValuedGraph:
    """Random colored instance; valued pairs draw values in [0, value_range)."""
    if num_colors < 1:
        raise ValueError("need at least one color")
    if value_sides and value_range < 1:
        raise ValueError("value_range must be >= 1 when any side is valued")
    estream = rng.child("edges")
    sides = frozenset(value_sides)

    def draw(pair, nu, nv):
        valued = pair in sides
        out = []
        for u in range(nu):
            for v in range(nv):
                if estream.bernoulli(keep_percent, 100):
                    color = estream.randrange(num_colors)
                    value = estream.randrange(value_range) if valued else None
                    out.append((u, v, color, value))
        return tuple(out)

    ni, nj, nk = sizes
    return ColoredValuedGraph(
        (ni, nj, nk),
        draw("IJ", ni, nj),
        draw("JK", nj, nk),
        draw("IK", ni, nk),
        sides,
    )


def generate_matrix(
    rows: int,
    cols: int,
    lo: int,
    hi: int,
    rng: RngStream,
    plus_inf_percent: int = 0,
    minus_inf_percent: int = 0,
) -> IntMatrix:
    """Random matrix with entries in [lo, hi] and optional sentinel entries."""
    stream = rng.child("matrix")
    entries = []
    for _ in range(rows * cols):
        roll = stream.randrange(100) if (plus_inf_percent or minus_inf_percent) else 100
        if roll < plus_inf_percent:
            entries.append(PLUS_INF)
        elif roll < plus_inf_percent + minus_inf_percent:
            entries.append(MINUS_INF)
        else:
            entries.append(stream.randint(lo, hi))
    return IntMatrix(rows, cols, tuple(entries))


def generate_set_family(
    universe_size: int,
    family_size: int,
    max_set_size: int,
    num_queries: int,
    rng: RngStream,
    output_cap: Optional[int] = None,
) -> SetFamilyInstance:
    stream = rng.child("sets")
    family = []
    for _ in range(family_size):
        size = stream.randrange(max_set_size + 1)
        size = min(size, universe_size)
        family.append(tuple(sorted(stream.sample_distinct(universe_size, size))))
    queries = tuple(
        (stream.randrange(family_size), stream.randrange(family_size))
        for _ in range(num_queries)
    ) if family_size else ()
    return SetFamilyInstance(universe_size, tuple(family), queries, output_cap)
