"""Randomized reduction from Zero Triangle to parameterized triangle listing.

The pipeline, per trial: reduce weights into a prime field, shear them with
a random multiplier and telescoping per-vertex offsets, split the field
into contiguous ranges, and enumerate the range triples whose sumset can
hit zero. Each triple induces a sparse subinstance (after pruning
high-degree vertices) on which an injected listing solver runs; every
listed triangle is re-verified against the original weights, so a positive
answer is sound unconditionally and completeness comes from repetition.

Range indices are 1-based (ranges L_1..L_s); vertex indices stay 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

from .instances import TripartiteWeightedGraph
from .oracles import Triangle
from .rng import RngStream

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for anything this package draws."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n == small:
            return True
        if n % small == 0:
            return False
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class RandomizationData:
    """Prime p, multiplier x, and per-vertex offsets (one tuple per part)."""

    prime: int
    multiplier: int
    offsets: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        object.__setattr__(self, "offsets", tuple(tuple(o) for o in self.offsets))
        residues = [self.multiplier]
        for part in self.offsets:
            residues.extend(part)
        for r in residues:
            if not 0 <= r < self.prime:
                raise ValueError(f"residue {r} outside [0, {self.prime})")


@dataclass(frozen=True)
class RangeSplit:
    """Contiguous intervals (inclusive lo, hi) partitioning [0, p)."""

    prime: int
    ranges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "ranges", tuple(map(tuple, self.ranges)))
        expect = 0
        s = len(self.ranges)
        if s == 0 or s > self.prime:
            raise ValueError("need 1 <= s <= p ranges")
        base, extra = divmod(self.prime, s)
        for lo, hi in self.ranges:
            if lo != expect or hi < lo:
                raise ValueError("ranges must tile [0, p) contiguously")
            if hi - lo + 1 not in (base, base + 1):
                raise ValueError("range sizes must be floor(p/s) or ceil(p/s)")
            expect = hi + 1
        if expect != self.prime:
            raise ValueError("ranges must cover [0, p)")
        _ = extra

    @property
    def count(self) -> int:
        return len(self.ranges)

    def index_of(self, residue: int) -> int:
        """1-based id of the range containing the residue."""
        if not 0 <= residue < self.prime:
            raise ValueError(f"residue {residue} outside [0, {self.prime})")
        base, extra = divmod(self.prime, len(self.ranges))
        head = extra * (base + 1)
        if residue < head:
            return residue // (base + 1) + 1
        return extra + (residue - head) // base + 1


@dataclass(frozen=True)
class SubinstanceReport:
    """One range triple's subinstance: its graph, what pruning removed, and
    (once a listing solver ran) what was listed and which hits verified."""

    triple: tuple[int, int, int]
    graph: TripartiteWeightedGraph
    pruned: tuple[tuple[str, int], ...]
    listed: tuple[Triangle, ...] = ()
    hits: tuple[Triangle, ...] = ()


def exact_to_zero(g: TripartiteWeightedGraph, target: int) -> TripartiteWeightedGraph:
    """Shift every A x B weight down by the target: T-triangles become
    zero triangles, bijectively."""
    mod = g.weight_modulus
    shifted = tuple(
        (a, b, (w - target) % mod if mod is not None else w - target)
        for a, b, w in g.edges_ab)
    return replace(g, edges_ab=shifted)


def pick_prime(max_abs_weight: int, rng: RngStream) -> int:
    """Rejection-sample a prime in [100 W, 100 W * max(2, ceil(log2(100 W)))].

    The window is at least [100 W, 200 W], so it always contains a prime and
    the loop terminates; the draw is deterministic given the stream.
    """
    if max_abs_weight < 1:
        raise ValueError("max_abs_weight must be >= 1")
    lo = 100 * max_abs_weight
    hi = lo * max(2, (lo - 1).bit_length())
    while True:
        candidate = rng.randint(lo, hi)
        if is_prime(candidate):
            return candidate


def reduce_mod_p(g: TripartiteWeightedGraph, p: int) -> TripartiteWeightedGraph:
    """View all weights as residues in F_p."""
    return TripartiteWeightedGraph(
        g.part_sizes,
        tuple((u, v, w % p) for u, v, w in g.edges_ab),
        tuple((u, v, w % p) for u, v, w in g.edges_bc),
        tuple((u, v, w % p) for u, v, w in g.edges_ca),
        weight_modulus=p,
    )


def draw_randomization(
    part_sizes: tuple[int, int, int], p: int, rng: RngStream,
) -> RandomizationData:
    x = rng.child("multiplier").randrange(p)
    streams = [rng.child("offsets", part) for part in range(3)]
    offsets = tuple(
        tuple(streams[part].randrange(p) for _ in range(part_sizes[part]))
        for part in range(3))
    return RandomizationData(p, x, offsets)


def randomize_weights(
    g: TripartiteWeightedGraph, rd: RandomizationData,
) -> TripartiteWeightedGraph:
    """Shear the weights so that triangle sums scale by the multiplier.

    New weights (all mod p): AB gets x*w - y_b + y_a, BC gets x*w - y_c + y_b,
    CA gets x*w - y_a + y_c. Around any triangle the offsets telescope, so
    the w'-sum is x times the w-sum; zero triangles are preserved whenever
    x != 0.
    """
    if g.weight_modulus != rd.prime:
        raise ValueError("graph weights must already live in F_p")
    p = rd.prime
    x = rd.multiplier
    ya, yb, yc = rd.offsets
    if (len(ya), len(yb), len(yc)) != g.part_sizes:
        raise ValueError("offset lengths must match part sizes")
    edges_ab = tuple((a, b, (x * w - yb[b] + ya[a]) % p) for a, b, w in g.edges_ab)
    edges_bc = tuple((b, c, (x * w - yc[c] + yb[b]) % p) for b, c, w in g.edges_bc)
    edges_ca = tuple((c, a, (x * w - ya[a] + yc[c]) % p) for c, a, w in g.edges_ca)
    return replace(g, edges_ab=edges_ab, edges_bc=edges_bc, edges_ca=edges_ca)


def split_ranges(p: int, s: int) -> RangeSplit:
    """Split [0, p) into s contiguous ranges, the first p mod s of them one
    longer than the rest."""
    if not 1 <= s <= p:
        raise ValueError("need 1 <= s <= p")
    base, extra = divmod(p, s)
    ranges = []
    lo = 0
    for idx in range(s):
        size = base + 1 if idx < extra else base
        ranges.append((lo, lo + size - 1))
        lo += size
    return RangeSplit(p, tuple(ranges))


def enumerate_zero_triples(rs: RangeSplit) -> list[tuple[int, int, int]]:
    """All (i, j, k) with some a in L_i, b in L_j, c in L_k summing to 0 mod p.

    Per (i, j) the candidate set -(L_i + L_j) mod p is a circular interval,
    split into at most two plain intervals, so at most a handful of k match.
    """
    p = rs.prime
    s = rs.count
    out = []
    for i in range(1, s + 1):
        lo_i, hi_i = rs.ranges[i - 1]
        for j in range(1, s + 1):
            lo_j, hi_j = rs.ranges[j - 1]
            span = hi_i + hi_j - lo_i - lo_j + 1
            ks: set[int] = set()
            if span >= p:
                ks.update(range(1, s + 1))
            else:
                start = (-(hi_i + hi_j)) % p
                end = (-(lo_i + lo_j)) % p
                if start <= end:
                    pieces = [(start, end)]
                else:
                    pieces = [(start, p - 1), (0, end)]
                for u, v in pieces:
                    k = rs.index_of(u)
                    while k <= s and rs.ranges[k - 1][0] <= v:
                        ks.add(k)
                        k += 1
            out.extend((i, j, k) for k in sorted(ks))
    return out


def default_degree_cap(dest_size: int, s: int) -> int:
    return 100 * dest_size // s + 200


def default_per_edge_cap(size_c: int, s: int) -> int:
    return 900 * size_c // (s * s) + 1


def default_global_cap(part_sizes: tuple[int, int, int], s: int) -> int:
    na, nb, nc = part_sizes
    return 8100 * na * nb * nc // (s ** 3) + 1


def ceil_log2(x: int) -> int:
    """Smallest t with 2^t >= x, for x >= 1."""
    if x < 1:
        raise ValueError("ceil_log2 needs x >= 1")
    return (x - 1).bit_length()


def default_trials(total_vertices: int, multiplier: int = 100) -> int:
    return multiplier * ceil_log2(total_vertices + 2)


def build_subinstance(
    gp: TripartiteWeightedGraph,
    rs: RangeSplit,
    triple: tuple[int, int, int],
    degree_cap_ab: Optional[int] = None,
    degree_cap_ca: Optional[int] = None,
    degree_cap_bc: Optional[int] = None,
) -> SubinstanceReport:
    """Select the triple's edges (CA in L_i, BC in L_j, AB in L_k), then
    delete every vertex whose initial degree toward some part exceeds that
    part's cap.

    Default caps follow the pipeline constants: toward part P the cap is
    100|P|/s + 200. An explicit pair cap overrides both directions of that
    pair. Part sizes and vertex indices are preserved; deletion means
    dropping incident edges.
    """
    if gp.weight_modulus != rs.prime:
        raise ValueError("subinstance selection needs mod-p weights")
    i, j, k = triple
    s = rs.count
    for idx in (i, j, k):
        if not 1 <= idx <= s:
            raise ValueError(f"range id {idx} outside 1..{s}")
    lo_i, hi_i = rs.ranges[i - 1]
    lo_j, hi_j = rs.ranges[j - 1]
    lo_k, hi_k = rs.ranges[k - 1]

    sel_ca = [(c, a, w) for c, a, w in gp.edges_ca if lo_i <= w <= hi_i]
    sel_bc = [(b, c, w) for b, c, w in gp.edges_bc if lo_j <= w <= hi_j]
    sel_ab = [(a, b, w) for a, b, w in gp.edges_ab if lo_k <= w <= hi_k]

    na, nb, nc = gp.part_sizes
    caps = {
        ("A", "B"): degree_cap_ab if degree_cap_ab is not None else default_degree_cap(nb, s),
        ("B", "A"): degree_cap_ab if degree_cap_ab is not None else default_degree_cap(na, s),
        ("A", "C"): degree_cap_ca if degree_cap_ca is not None else default_degree_cap(nc, s),
        ("C", "A"): degree_cap_ca if degree_cap_ca is not None else default_degree_cap(na, s),
        ("B", "C"): degree_cap_bc if degree_cap_bc is not None else default_degree_cap(nc, s),
        ("C", "B"): degree_cap_bc if degree_cap_bc is not None else default_degree_cap(nb, s),
    }

    deg: dict[tuple[str, int, str], int] = {}

    def bump(part, idx, toward):
        key = (part, idx, toward)
        deg[key] = deg.get(key, 0) + 1

    for a, b, _w in sel_ab:
        bump("A", a, "B")
        bump("B", b, "A")
    for b, c, _w in sel_bc:
        bump("B", b, "C")
        bump("C", c, "B")
    for c, a, _w in sel_ca:
        bump("C", c, "A")
        bump("A", a, "C")

    doomed: set[tuple[str, int]] = set()
    for (part, idx, toward), count in deg.items():
        if count > caps[(part, toward)]:
            doomed.add((part, idx))

    if doomed:
        sel_ab = [(a, b, w) for a, b, w in sel_ab
                  if ("A", a) not in doomed and ("B", b) not in doomed]
        sel_bc = [(b, c, w) for b, c, w in sel_bc
                  if ("B", b) not in doomed and ("C", c) not in doomed]
        sel_ca = [(c, a, w) for c, a, w in sel_ca
                  if ("C", c) not in doomed and ("A", a) not in doomed]

    graph = replace(gp, edges_ab=tuple(sel_ab), edges_bc=tuple(sel_bc),
                    edges_ca=tuple(sel_ca))
    return SubinstanceReport(triple, graph, tuple(sorted(doomed)))


ListingSolver = Callable[[TripartiteWeightedGraph, int],
                         dict[tuple[int, int], list[Triangle]]]
GlobalListingSolver = Callable[[TripartiteWeightedGraph, int], list[Triangle]]


def _original_weight_maps(g: TripartiteWeightedGraph):
    return ({(u, v): w for u, v, w in g.edges_ab},
            {(u, v): w for u, v, w in g.edges_bc},
            {(u, v): w for u, v, w in g.edges_ca})


def _verified_hit(tri: Triangle, maps) -> bool:
    w_ab, w_bc, w_ca = maps
    a, b, c = tri
    if (a, b) not in w_ab or (b, c) not in w_bc or (c, a) not in w_ca:
        return False
    return w_ab[(a, b)] + w_bc[(b, c)] + w_ca[(c, a)] == 0


def _run_trials(g, s, trials, rng, per_subinstance, first_trial=0):
    """Shared trial loop: randomize, split, enumerate, visit subinstances.

    ``first_trial`` shifts the trial indices (and hence the derived
    streams), so disjoint chunks run by different workers reproduce the
    sequential run exactly.
    """
    if min(g.part_sizes) == 0 or trials <= 0:
        return False, None
    w_bound = max(1, g.max_abs_weight())
    maps = _original_weight_maps(g)
    for trial in range(first_trial, first_trial + trials):
        stream = rng.child("trial", trial)
        p = pick_prime(w_bound, stream.child("prime"))
        if s > p:
            raise ValueError(f"range count {s} exceeds prime {p}")
        gp = reduce_mod_p(g, p)
        rd = draw_randomization(g.part_sizes, p, stream.child("randomize"))
        sheared = randomize_weights(gp, rd)
        rs = split_ranges(p, s)
        for triple in enumerate_zero_triples(rs):
            hit = per_subinstance(trial, sheared, rs, triple, maps)
            if hit is not None:
                return True, hit
    return False, None


def zero_triangle_via_listing(
    g: TripartiteWeightedGraph,
    s: int,
    listing_solver: ListingSolver,
    trials: int,
    rng: RngStream,
    per_edge_cap: Optional[int] = None,
    report_sink: Optional[Callable[[dict], None]] = None,
    first_trial: int = 0,
) -> tuple[bool, Optional[Triangle]]:
    """Decide Zero Triangle through an all-edges listing solver.

    Sound unconditionally: a True verdict carries a witness whose original
    weights sum to zero (every listed triangle is re-verified). Complete
    with overwhelming empirical probability over the given number of
    independent trials when a zero triangle exists.
    """
    cap = per_edge_cap if per_edge_cap is not None \
        else default_per_edge_cap(g.part_sizes[2], s)

    def visit(trial, sheared, rs, triple, maps):
        report = build_subinstance(sheared, rs, triple)
        lists = listing_solver(report.graph, cap)
        listed = tuple(tri for edge in sorted(lists) for tri in lists[edge])
        hits = tuple(tri for tri in listed if _verified_hit(tri, maps))
        report = replace(report, listed=listed, hits=hits)
        if report_sink is not None:
            report_sink({"trial": trial, "triple": list(triple),
                         "edges_kept": report.graph.edge_count,
                         "pruned": len(report.pruned),
                         "listed": len(report.listed),
                         "hits": len(report.hits)})
        return report.hits[0] if report.hits else None

    return _run_trials(g, s, trials, rng, visit, first_trial=first_trial)


def zero_triangle_via_global_listing(
    g: TripartiteWeightedGraph,
    s: int,
    global_listing_solver: GlobalListingSolver,
    trials: int,
    rng: RngStream,
    global_cap: Optional[int] = None,
    report_sink: Optional[Callable[[dict], None]] = None,
    first_trial: int = 0,
) -> tuple[bool, Optional[Triangle]]:
    """Same pipeline against a globally-capped listing solver."""
    cap = global_cap if global_cap is not None \
        else default_global_cap(g.part_sizes, s)

    def visit(trial, sheared, rs, triple, maps):
        report = build_subinstance(sheared, rs, triple)
        listed = tuple(global_listing_solver(report.graph, cap))
        hits = tuple(tri for tri in listed if _verified_hit(tri, maps))
        report = replace(report, listed=listed, hits=hits)
        if report_sink is not None:
            report_sink({"trial": trial, "triple": list(triple),
                         "edges_kept": report.graph.edge_count,
                         "pruned": len(report.pruned),
                         "listed": len(report.listed),
                         "hits": len(report.hits)})
        return report.hits[0] if report.hits else None

    return _run_trials(g, s, trials, rng, visit, first_trial=first_trial)


@dataclass(frozen=True)
class ClaimStatistics:
    """Empirical frequencies for the three per-trial events the analysis
    bounds: the planted triangle's vertices all survive pruning (f1), its
    edge's false-positive count stays within the per-edge bound (f2), and
    the subinstance's nonzero-triangle count stays within the global bound
    (f3)."""

    trials: int
    f1: float
    f2: float
    f3: float
    per_edge_bound: int
    global_bound: int


def claim_statistics(
    g: TripartiteWeightedGraph,
    planted: Triangle,
    s: int,
    trials: int,
    rng: RngStream,
    first_trial: int = 0,
) -> ClaimStatistics:
    """Measure, over independent randomizations, how often the planted zero
    triangle's subinstance behaves as the analysis promises."""
    maps = _original_weight_maps(g)
    if not _verified_hit(planted, maps):
        raise ValueError("planted triple is not a zero triangle of g")
    pa, pb, pc = planted
    na, nb, nc = g.part_sizes
    w_bound = max(1, g.max_abs_weight())
    per_edge_bound = 900 * nc // (s * s)
    global_bound = 8100 * na * nb * nc // (s ** 3)

    ok1 = ok2 = ok3 = 0
    for trial in range(first_trial, first_trial + trials):
        stream = rng.child("trial", trial)
        p = pick_prime(w_bound, stream.child("prime"))
        if s > p:
            raise ValueError(f"range count {s} exceeds prime {p}")
        gp = reduce_mod_p(g, p)
        rd = draw_randomization(g.part_sizes, p, stream.child("randomize"))
        sheared = randomize_weights(gp, rd)
        rs = split_ranges(p, s)

        w2_ab = {(u, v): w for u, v, w in sheared.edges_ab}
        w2_bc = {(u, v): w for u, v, w in sheared.edges_bc}
        w2_ca = {(u, v): w for u, v, w in sheared.edges_ca}
        i = rs.index_of(w2_ca[(pc, pa)])
        j = rs.index_of(w2_bc[(pb, pc)])
        k = rs.index_of(w2_ab[(pa, pb)])
        lo_i, hi_i = rs.ranges[i - 1]
        lo_j, hi_j = rs.ranges[j - 1]
        lo_k, hi_k = rs.ranges[k - 1]

        in_i = lambda w: lo_i <= w <= hi_i
        in_j = lambda w: lo_j <= w <= hi_j
        in_k = lambda w: lo_k <= w <= hi_k

        # f1: the six degree checks for the planted vertices.
        deg_a_b = sum(1 for (a, b), w in w2_ab.items() if a == pa and in_k(w))
        deg_b_a = sum(1 for (a, b), w in w2_ab.items() if b == pb and in_k(w))
        deg_a_c = sum(1 for (c, a), w in w2_ca.items() if a == pa and in_i(w))
        deg_c_a = sum(1 for (c, a), w in w2_ca.items() if c == pc and in_i(w))
        deg_b_c = sum(1 for (b, c), w in w2_bc.items() if b == pb and in_j(w))
        deg_c_b = sum(1 for (b, c), w in w2_bc.items() if c == pc and in_j(w))
        survives = (deg_a_b <= default_degree_cap(nb, s)
                    and deg_a_c <= default_degree_cap(nc, s)
                    and deg_b_a <= default_degree_cap(na, s)
                    and deg_b_c <= default_degree_cap(nc, s)
                    and deg_c_a <= default_degree_cap(na, s)
                    and deg_c_b <= default_degree_cap(nb, s))
        ok1 += survives

        # f2: false positives on the planted edge within the per-edge bound.
        w_ab, w_bc, w_ca = maps
        false_pos = 0
        for c2 in range(nc):
            if c2 == pc:
                continue
            wca = w2_ca.get((c2, pa))
            wbc = w2_bc.get((pb, c2))
            if wca is None or wbc is None or not (in_i(wca) and in_j(wbc)):
                continue
            orig = w_ab[(pa, pb)] + w_bc[(pb, c2)] + w_ca[(c2, pa)]
            if orig % p != 0:
                false_pos += 1
        ok2 += false_pos <= per_edge_bound

        # f3: nonzero triangles in the whole subinstance within the bound.
        mask_a = [0] * na
        mask_b = [0] * nb
        for (c2, a), w in w2_ca.items():
            if in_i(w):
                mask_a[a] |= 1 << c2
        for (b, c2), w in w2_bc.items():
            if in_j(w):
                mask_b[b] |= 1 << c2
        nonzero = 0
        for (a, b), w in w2_ab.items():
            if not in_k(w):
                continue
            common = mask_a[a] & mask_b[b]
            while common:
                c2 = (common & -common).bit_length() - 1
                common &= common - 1
                orig = w_ab[(a, b)] + w_bc[(b, c2)] + w_ca[(c2, a)]
                if orig % p != 0:
                    nonzero += 1
        ok3 += nonzero <= global_bound

    return ClaimStatistics(trials, ok1 / trials, ok2 / trials, ok3 / trials,
                           per_edge_bound, global_bound)
