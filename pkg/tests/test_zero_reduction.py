"""The randomized zero-triangle pipeline, piece by piece."""


import pytest

from fgtri import (RandomizationData, RngStream, TripartiteWeightedGraph,
                   build_subinstance, claim_statistics, default_degree_cap,
                   draw_randomization, enumerate_zero_triples, exact_to_zero,
                   exact_triangle_bf, generate_sparse_tripartite,
                   generate_tripartite, is_prime, pick_prime,
                   randomize_weights, reduce_mod_p, split_ranges,
                   triangle_list_bf, triangle_weight_sum,
                   zero_triangle_bf, zero_triangle_via_global_listing,
                   zero_triangle_via_listing)


def trial_division_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def bf_lister(graph, cap):
    return triangle_list_bf(graph, per_edge_cap=cap)


def bf_global_lister(graph, cap):
    lists = triangle_list_bf(graph, global_cap=cap)
    return [t for _e, ts in sorted(lists.items()) for t in ts]


# ------------------------------------------------------------ exact -> zero

def test_exact_to_zero_hand_case():
    g = TripartiteWeightedGraph((1, 1, 1), ((0, 0, 1),), ((0, 0, 2),),
                                ((0, 0, 2),))
    shifted = exact_to_zero(g, 5)
    assert shifted.edges_ab == ((0, 0, -4),)
    assert zero_triangle_bf(shifted) == (0, 0, 0)
    assert exact_to_zero(g, 0) == g


def test_exact_to_zero_round_trip_with_oracles():
    for seed in range(30):
        g = generate_sparse_tripartite((5, 5, 5), 60, 4, RngStream(seed))
        for target in (-3, 0, 2, 7):
            # Not just existence: the deterministic scan returns the same
            # witness on both routes.
            assert exact_triangle_bf(g, target) == \
                zero_triangle_bf(exact_to_zero(g, target))


# ------------------------------------------------------------ primes

def test_is_prime_matches_trial_division():
    for n in range(2000):
        assert is_prime(n) == trial_division_prime(n)


def test_pick_prime_range_and_determinism():
    p = pick_prime(4, RngStream(1))
    assert 400 <= p <= 3600 and trial_division_prime(p)
    q = pick_prime(1, RngStream(2))
    assert 100 <= q <= 700 and trial_division_prime(q)
    assert pick_prime(9, RngStream(3)) == pick_prime(9, RngStream(3))


# ------------------------------------------------------------ randomization

def fixed_randomization(g, p, x, offsets_value=0):
    na, nb, nc = g.part_sizes
    return RandomizationData(p, x, ((offsets_value,) * na,
                                    (offsets_value,) * nb,
                                    (offsets_value,) * nc))


def test_randomize_identity_parameters():
    g = reduce_mod_p(generate_sparse_tripartite((3, 3, 3), 80, 5,
                                                RngStream(5)), 101)
    same = randomize_weights(g, fixed_randomization(g, 101, 1))
    assert same == g


def test_randomize_zero_multiplier_kills_all_sums():
    g = reduce_mod_p(generate_sparse_tripartite((4, 4, 4), 80, 9,
                                              RngStream(6)), 103)
    flat = randomize_weights(g, draw_randomization(g.part_sizes, 103,
                                                   RngStream(7)))
    zeroed = randomize_weights(
        g, RandomizationData(103, 0, draw_randomization(
            g.part_sizes, 103, RngStream(8)).offsets))
    wab = {(a, b): w for a, b, w in zeroed.edges_ab}
    wbc = {(b, c): w for b, c, w in zeroed.edges_bc}
    wca = {(c, a): w for c, a, w in zeroed.edges_ca}
    for (a, b) in wab:
        for c in range(4):
            if (b, c) in wbc and (c, a) in wca:
                assert (wab[(a, b)] + wbc[(b, c)] + wca[(c, a)]) % 103 == 0
    assert flat != zeroed


def test_randomize_telescopes_every_triangle():
    for seed in range(15):
        p = pick_prime(9, RngStream(seed).child("p"))
        g = reduce_mod_p(
            generate_sparse_tripartite((4, 4, 4), 70, 9,
                                       RngStream(seed)), p)
        rd = draw_randomization(g.part_sizes, p, RngStream(seed).child("rd"))
        sheared = randomize_weights(g, rd)
        wab = {(a, b): w for a, b, w in g.edges_ab}
        wbc = {(b, c): w for b, c, w in g.edges_bc}
        wca = {(c, a): w for c, a, w in g.edges_ca}
        w2ab = {(a, b): w for a, b, w in sheared.edges_ab}
        w2bc = {(b, c): w for b, c, w in sheared.edges_bc}
        w2ca = {(c, a): w for c, a, w in sheared.edges_ca}
        for (a, b) in wab:
            for c in range(4):
                if (b, c) in wbc and (c, a) in wca:
                    before = (wab[(a, b)] + wbc[(b, c)] + wca[(c, a)]) % p
                    after = (w2ab[(a, b)] + w2bc[(b, c)] + w2ca[(c, a)]) % p
                    assert after == rd.multiplier * before % p


def test_randomization_data_validation():
    with pytest.raises(ValueError):
        RandomizationData(10, 0, ((), (), ()))  # not prime
    with pytest.raises(ValueError):
        RandomizationData(11, 11, ((), (), ()))  # residue out of range


# ------------------------------------------------------------ range split

def test_split_ranges_hand_cases():
    rs = split_ranges(11, 2)
    assert rs.ranges == ((0, 5), (6, 10))
    assert split_ranges(11, 1).ranges == ((0, 10),)
    singles = split_ranges(7, 7)
    assert singles.ranges == tuple((i, i) for i in range(7))
    with pytest.raises(ValueError):
        split_ranges(5, 6)


def test_range_index_lookup():
    rs = split_ranges(11, 3)  # sizes 4, 4, 3
    for residue in range(11):
        lo, hi = rs.ranges[rs.index_of(residue) - 1]
        assert lo <= residue <= hi


def brute_zero_triples(p, s):
    rs = split_ranges(p, s)
    found = set()
    for a in range(p):
        for b in range(p):
            c = (-a - b) % p
            found.add((rs.index_of(a), rs.index_of(b), rs.index_of(c)))
    return found


@pytest.mark.parametrize("p,s", [(11, 1), (11, 2), (13, 4), (29, 5), (53, 8),
                                 (17, 17), (31, 3)])
def test_enumerate_zero_triples_matches_brute_force(p, s):
    got = enumerate_zero_triples(split_ranges(p, s))
    assert len(set(got)) == len(got)
    assert set(got) == brute_zero_triples(p, s)


def test_triples_single_range():
    assert enumerate_zero_triples(split_ranges(101, 1)) == [(1, 1, 1)]


@pytest.mark.parametrize("s", [2, 3, 5, 8, 16, 33, 64])
def test_triples_sparsity(s):
    p = pick_prime(50, RngStream(s))
    triples = enumerate_zero_triples(split_ranges(p, s))
    assert len(triples) <= 5 * s * s
    per_pair = {}
    for i, j, k in triples:
        per_pair.setdefault((i, j), []).append(k)
    assert max(len(v) for v in per_pair.values()) <= 5


# ------------------------------------------------------------ subinstances

def sheared_instance(seed, sizes=(5, 5, 5), density=70, bound=8):
    g = generate_sparse_tripartite(sizes, density, bound, RngStream(seed))
    p = pick_prime(bound, RngStream(seed).child("p"))
    gp = reduce_mod_p(g, p)
    rd = draw_randomization(sizes, p, RngStream(seed).child("rd"))
    return g, randomize_weights(gp, rd), p


def test_subinstance_single_range_is_whole_graph():
    _g, sheared, p = sheared_instance(1)
    rs = split_ranges(p, 1)
    report = build_subinstance(sheared, rs, (1, 1, 1),
                               degree_cap_ab=10**9, degree_cap_ca=10**9,
                               degree_cap_bc=10**9)
    assert report.graph == sheared
    assert report.pruned == ()


def test_subinstance_partition_of_edges():
    # Per part-pair, each edge lands in the subinstances of exactly the
    # enumerated triples carrying its range index.
    _g, sheared, p = sheared_instance(2)
    rs = split_ranges(p, 3)
    triples = enumerate_zero_triples(rs)
    appearance = {("AB", e[0], e[1]): 0 for e in sheared.edges_ab}
    appearance.update({("BC", e[0], e[1]): 0 for e in sheared.edges_bc})
    appearance.update({("CA", e[0], e[1]): 0 for e in sheared.edges_ca})
    for triple in triples:
        rep = build_subinstance(sheared, rs, triple, 10**9, 10**9, 10**9)
        for a, b, _w in rep.graph.edges_ab:
            appearance[("AB", a, b)] += 1
        for b, c, _w in rep.graph.edges_bc:
            appearance[("BC", b, c)] += 1
        for c, a, _w in rep.graph.edges_ca:
            appearance[("CA", c, a)] += 1
    k_count = {}
    ij_count = {}
    i_count = {}
    for i, j, k in triples:
        k_count[k] = k_count.get(k, 0) + 1
        ij_count[j] = ij_count.get(j, 0) + 1
        i_count[i] = i_count.get(i, 0) + 1
    for a, b, w in sheared.edges_ab:
        assert appearance[("AB", a, b)] == k_count.get(rs.index_of(w), 0)
    for b, c, w in sheared.edges_bc:
        assert appearance[("BC", b, c)] == ij_count.get(rs.index_of(w), 0)
    for c, a, w in sheared.edges_ca:
        assert appearance[("CA", c, a)] == i_count.get(rs.index_of(w), 0)


def test_subinstance_covers_zero_triangles_exactly_once():
    for seed in range(10):
        g, sheared, p = sheared_instance(100 + seed)
        rs = split_ranges(p, 4)
        triples = enumerate_zero_triples(rs)
        w2ab = {(a, b): w for a, b, w in sheared.edges_ab}
        w2bc = {(b, c): w for b, c, w in sheared.edges_bc}
        w2ca = {(c, a): w for c, a, w in sheared.edges_ca}
        zero_tris = [
            (a, b, c)
            for (a, b) in w2ab for c in range(g.part_sizes[2])
            if (b, c) in w2bc and (c, a) in w2ca
            and (w2ab[(a, b)] + w2bc[(b, c)] + w2ca[(c, a)]) % p == 0
        ]
        for (a, b, c) in zero_tris:
            home = (rs.index_of(w2ca[(c, a)]), rs.index_of(w2bc[(b, c)]),
                    rs.index_of(w2ab[(a, b)]))
            assert home in triples
            count = 0
            for triple in triples:
                rep = build_subinstance(sheared, rs, triple,
                                        10**9, 10**9, 10**9)
                sab = {(x, y) for x, y, _ in rep.graph.edges_ab}
                sbc = {(x, y) for x, y, _ in rep.graph.edges_bc}
                sca = {(x, y) for x, y, _ in rep.graph.edges_ca}
                if (a, b) in sab and (b, c) in sbc and (c, a) in sca:
                    count += 1
            assert count == 1


def test_subinstance_degree_caps_enforced():
    # A star from one A-vertex to all of B; tiny cap removes it.
    edges_ab = tuple((0, b, 0) for b in range(6))
    g = TripartiteWeightedGraph((2, 6, 1), edges_ab, ((0, 0, 0),),
                                ((0, 0, 0), (0, 1, 0)), weight_modulus=7)
    rs = split_ranges(7, 1)
    rep = build_subinstance(g, rs, (1, 1, 1), degree_cap_ab=3,
                            degree_cap_ca=10, degree_cap_bc=10)
    assert ("A", 0) in rep.pruned
    assert all(a != 0 for a, _b, _w in rep.graph.edges_ab)
    assert all(a != 0 for _c, a, _w in rep.graph.edges_ca)
    # Survivors obey every cap.
    for part, idx in rep.pruned:
        assert part in "ABC"


def test_subinstance_default_caps_match_formula():
    assert default_degree_cap(16, 4) == 600
    _g, sheared, p = sheared_instance(3)
    rs = split_ranges(p, 2)
    rep = build_subinstance(sheared, rs, enumerate_zero_triples(rs)[0])
    deg = {}
    for a, b, _w in rep.graph.edges_ab:
        deg[("A", a, "B")] = deg.get(("A", a, "B"), 0) + 1
        deg[("B", b, "A")] = deg.get(("B", b, "A"), 0) + 1
    for b, c, _w in rep.graph.edges_bc:
        deg[("B", b, "C")] = deg.get(("B", b, "C"), 0) + 1
        deg[("C", c, "B")] = deg.get(("C", c, "B"), 0) + 1
    for c, a, _w in rep.graph.edges_ca:
        deg[("C", c, "A")] = deg.get(("C", c, "A"), 0) + 1
        deg[("A", a, "C")] = deg.get(("A", a, "C"), 0) + 1
    sizes = dict(zip("ABC", sheared.part_sizes))
    for (part, _idx, toward), count in deg.items():
        assert count <= default_degree_cap(sizes[toward], 2)


# ------------------------------------------------------------ pipelines

def test_pipeline_degenerate_parameters_match_brute_force():
    for seed in range(15):
        g = generate_sparse_tripartite((4, 4, 4), 70, 4, RngStream(seed))
        found, witness = zero_triangle_via_listing(
            g, 1, bf_lister, trials=1, rng=RngStream(seed).child("run"),
            per_edge_cap=10**9)
        assert found == (zero_triangle_bf(g) is not None)
        if found:
            assert triangle_weight_sum(g, witness) == 0


def test_pipeline_soundness_on_no_zero_instances():
    checked = 0
    seed = 0
    while checked < 30:
        seed += 1
        g = generate_sparse_tripartite((4, 4, 4), 80, 10**6, RngStream(seed))
        if zero_triangle_bf(g) is not None:
            continue
        checked += 1
        found, witness = zero_triangle_via_listing(
            g, 2, bf_lister, trials=3, rng=RngStream(seed).child("x"))
        assert found is False and witness is None


def test_pipeline_completeness_on_planted_instances():
    for seed in range(10):
        g, planted = generate_tripartite(24, 40, True, RngStream(seed))
        found, witness = zero_triangle_via_listing(
            g, 2, bf_lister, trials=30, rng=RngStream(seed).child("x"))
        assert found and triangle_weight_sum(g, witness) == 0


def test_global_pipeline_mirrors_per_edge_pipeline():
    for seed in range(8):
        g, planted = generate_tripartite(18, 30, True, RngStream(40 + seed))
        found, witness = zero_triangle_via_global_listing(
            g, 2, bf_global_lister, trials=30, rng=RngStream(seed).child("y"))
        assert found and triangle_weight_sum(g, witness) == 0


def test_pipeline_report_sink_records_subinstances():
    g, _ = generate_tripartite(12, 20, True, RngStream(3))
    records = []
    zero_triangle_via_listing(g, 2, bf_lister, trials=2,
                              rng=RngStream(4), report_sink=records.append)
    assert records
    for rec in records:
        assert set(rec) == {"trial", "triple", "edges_kept", "pruned",
                            "listed", "hits"}


def test_pipeline_chunked_trials_reproduce_sequential():
    g, _ = generate_tripartite(15, 10**4, True, RngStream(8))
    seq = zero_triangle_via_listing(g, 2, bf_lister, trials=6,
                                    rng=RngStream(9))
    part1 = zero_triangle_via_listing(g, 2, bf_lister, trials=3,
                                      rng=RngStream(9))
    part2 = zero_triangle_via_listing(g, 2, bf_lister, trials=3,
                                      rng=RngStream(9), first_trial=3)
    combined = part1 if part1[0] else part2
    assert combined == seq


# ------------------------------------------------------------ claims

def test_claim_statistics_single_range_never_prunes():
    g, planted = generate_tripartite(18, 25, True, RngStream(10))
    stats = claim_statistics(g, planted, 1, 50, RngStream(11))
    assert stats.f1 == 1.0


def test_claim_statistics_requires_a_real_zero_triangle():
    g, planted = generate_tripartite(9, 25, True, RngStream(12))
    bogus = ((planted[0] + 1) % 3, planted[1], planted[2])
    if triangle_weight_sum(g, bogus) == 0:
        pytest.skip("accidental second zero triangle")
    with pytest.raises(ValueError):
        claim_statistics(g, bogus, 2, 5, RngStream(13))


def test_claim_statistics_reports_bounds():
    g, planted = generate_tripartite(48, 60, True, RngStream(14))
    stats = claim_statistics(g, planted, 4, 25, RngStream(15))
    assert stats.per_edge_bound == 900 * 16 // 16
    assert stats.global_bound == 8100 * 16 ** 3 // 64
    assert 0.0 <= min(stats.f1, stats.f2, stats.f3)
    assert max(stats.f1, stats.f2, stats.f3) <= 1.0
