import random
from fractions import Fraction

import pytest

import epnet.linalg as linalg
import epnet.pairs as pairs_mod
from epnet.linalg import circular_minor, limiting_ground, rand_matrix, \
    rand_symmetric_zero_sum
from epnet.mutation import (
    AMBIGUOUS,
    LimitingVariable,
    build_initial,
    classify_solid,
    enumerate_plucker_clusters,
    enumerate_solid_clusters,
    frozen_cluster_pairs,
    initial_cluster,
    initial_seed,
    initial_vertices,
    limiting_classes,
    limiting_pairs,
    mutate_cm,
    mutate_lm,
    mutate_sym,
    p1_moves,
    p2_moves,
    reduce_to_canonical,
    slot_of,
    symmetrize,
)
from epnet.mutation import _grid_slots, _sym_samples
from epnet.pairs import Pair, is_solid, weakly_separated_pairs


def pr(n, p, q=()):
    return Pair(n, tuple(p), tuple(q))


# ---------------------------------------------------------------------------
# the polar grid and the initial structures


def test_initial_vertices_fill_the_grid():
    for n in range(3, 9):
        members = initial_vertices(n)
        assert set(members) == set(_grid_slots(n))
        assert len(members) == 2 * (n * (n - 1) // 2)
        for s, p in members.items():
            assert slot_of(p) == s
            D = pairs_mod.triple_of(p)[0]
            assert abs(D) <= 2
        cluster = initial_cluster(n)
        assert len(cluster) == n * (n - 1) // 2 + 1
        assert Pair(n) in cluster


def test_build_initial_stats():
    expected = {
        4: (13, 16, 9),
        5: (21, 30, 11),
        6: (31, 54, 13),
        7: (43, 70, 15),
        8: (57, 106, 17),
    }
    for n, (nv, na, nf) in expected.items():
        q = build_initial(n, "quiver")
        assert len(q.labels) == nv
        assert sum(q.arrows.values()) == na
        assert len(q.frozen) == nf
        assert q.symm_defect() == []
        g = build_initial(n, "Uprime")
        assert not g.directed
        assert q.undirected_edges() == g.edges


def test_frozen_cluster_n4():
    want = {pr(4, (1,), (3,)), pr(4, (2,), (4,)),
            pr(4, (1, 2), (4, 3)), pr(4, (2, 3), (1, 4)), Pair(4)}
    assert frozen_cluster_pairs(4) == frozenset(p.canonical() for p in want)


def test_limiting_classes_pins():
    assert limiting_classes(4) == frozenset()
    assert limiting_classes(5) == frozenset()
    assert limiting_classes(7) == frozenset()
    assert limiting_classes(6) == {pr(6, (3,), (6,)).canonical()}
    assert limiting_classes(8) == {pr(8, (4,), (8,)).canonical(),
                                   pr(8, (4, 5), (1, 8)).canonical()}


def test_limiting_chain():
    assert limiting_pairs(5) == ()
    assert limiting_pairs(7) == ()
    assert limiting_pairs(4) == (pr(4, (2,), (4,)),)
    assert limiting_pairs(6) == (pr(6, (3,), (6,)),
                                 pr(6, (3, 4), (1, 6)))
    # the size 1, 2, 3 chain at n=8; the top is the flip class of (812;654)
    chain = limiting_pairs(8)
    assert chain == (pr(8, (4,), (8,)), pr(8, (4, 5), (1, 8)),
                     pr(8, (8, 1, 2), (6, 5, 4)).canonical())
    assert chain[-1] in frozen_cluster_pairs(8)
    assert set(chain[:-1]) == set(limiting_classes(8))


def test_limiting_chain_members_are_marked_on_the_quiver():
    for n in (6, 8):
        q = build_initial(n, "quiver")
        got = {q.labels[v].canonical() for v in q.limiting}
        assert got == set(limiting_classes(n))


def test_quiver_neighborhood_of_the_size2_chain_pair():
    q = build_initial(8, "quiver")
    v = q.index(pr(8, (4, 5), (1, 8)))
    assert q.degree(v) == 6
    ins = {str(q.labels[u]) for u in q.arrows_in(v)}
    outs = {str(q.labels[w]) for w in q.arrows_out(v)}
    assert ins == {"(4,5,6;1,8,7|n=8)", "(4,5;2,1|n=8)", "(4;8|n=8)"}
    assert outs == {"(4,5,6;2,1,8|n=8)", "(4,5;8,7|n=8)", "(4;1|n=8)"}
    w = q.index(pr(8, (4,), (8,)))
    labels = {str(q.labels[u]) for u in q.neighbors(w)}
    assert labels == {"(4;7|n=8)", "(4;1|n=8)", "(4,5;8,7|n=8)",
                      "(4,5;1,8|n=8)"}


# ---------------------------------------------------------------------------
# seed mutation on the double cover


def test_mutate_cm_enters_the_partner_minor_and_is_involutive():
    s = initial_seed(5)
    x = pr(5, (1,), (3,))
    s2 = mutate_cm(s, x)
    v = s2.quiver.index(x)
    assert s2.idents[v] == pr(5, (5,), (4,))
    assert mutate_cm(s2, v) == s
    assert s2.trace == (v,)


def test_mutate_cm_random_involution_and_no_two_cycles():
    rng = random.Random("cm involution")
    for n in (4, 5, 6):
        s = initial_seed(n)
        mutable = [v for v in range(len(s.quiver.labels))
                   if v not in s.quiver.frozen]
        for _ in range(6):
            v = rng.choice(mutable)
            s2 = mutate_cm(s, v)
            assert mutate_cm(s2, v) == s
            s = s2
            for (a, b), m in s.quiver.arrows.items():
                if m:
                    assert not s.quiver.arrows.get((b, a), 0)


def test_mutate_cm_refuses_frozen():
    s = initial_seed(4)
    frozen = next(iter(s.quiver.frozen))
    with pytest.raises(ValueError):
        mutate_cm(s, frozen)


def test_identify_variable_roundtrip():
    s = initial_seed(5)
    for v, lab in enumerate(s.quiver.labels):
        assert s.idents[v] == lab
    s2 = mutate_cm(s, pr(5, (2,), (4,)))
    v = s2.quiver.index(pr(5, (2,), (4,)))
    got = s2.idents[v]
    assert got is not None and got is not AMBIGUOUS
    s3 = mutate_cm(s2, v)
    assert s3.idents[v] == pr(5, (2,), (4,))


# ---------------------------------------------------------------------------
# paired mutation and symmetrization


def test_mutate_sym_keeps_reversal_symmetry():
    rng = random.Random("sym walk")
    for n in (5, 6):
        s = initial_seed(n)
        for _ in range(3):
            mutable = [v for v in range(len(s.quiver.labels))
                       if v not in s.quiver.frozen
                       and s.quiver.c_image(v) != v
                       and s.quiver.c_image(v) not in s.quiver.neighbors(v)]
            v = rng.choice(mutable)
            s = mutate_sym(s, v)
            assert s.quiver.symm_defect() == []
            symmetrize(s)  # raises if any orbit disagrees


def test_symmetrize_initial_matches_cluster_values():
    for n in (4, 5, 6):
        s = initial_seed(n)
        got = set(symmetrize(s).values())
        want = {s.samples.sym_vector(p) for p in initial_cluster(n)}
        assert got == want


def test_paired_mutation_matches_direct_cluster_exchange():
    # mutating at (1;3)' and then at its mirror (3;1)' lands, after
    # symmetrization, on the cluster of the single exchange (1;3)->(4;5)
    s = initial_seed(5)
    s2 = mutate_sym(s, pr(5, (1,), (3,)))
    cl = mutate_lm(initial_cluster(5), "P1",
                   (pr(5, (1,), (3,)), pr(5, (4,), (5,))))
    assert set(symmetrize(s2).values()) == \
        {s2.samples.sym_vector(p) for p in cl}


def test_random_paired_runs_shadow_the_cluster_exchanges():
    rng = random.Random("isom shadow")
    for n in (5, 6):
        for _ in range(2):
            s = initial_seed(n)
            cl = initial_cluster(n)
            for _ in range(3):
                table = {}
                for x, y in p1_moves(cl):
                    table[x] = y
                sites = [v for v in range(len(s.quiver.labels))
                         if s.idents[v] is not None
                         and s.idents[v] is not AMBIGUOUS
                         and s.idents[v].canonical() in table
                         and s.quiver.c_image(v) != v
                         and s.quiver.c_image(v) not in s.quiver.neighbors(v)]
                if not sites:
                    break
                v = rng.choice(sites)
                x = s.idents[v].canonical()
                s = mutate_sym(s, v)
                got = s.idents[v]
                if got is None or got is AMBIGUOUS or \
                        got.canonical() != table[x]:
                    break  # left the shadowed exchange; nothing to compare
                cl = mutate_lm(cl, "P1", (x, table[x]))
                assert set(symmetrize(s).values()) == \
                    {s.samples.sym_vector(p) for p in cl}


# ---------------------------------------------------------------------------
# cluster-level exchanges


def test_p1_moves_on_the_initial_cluster_n5():
    moves = p1_moves(initial_cluster(5))
    assert [(str(a), str(b)) for a, b in moves] == [
        ("(1;3|n=5)", "(4;5|n=5)"),
        ("(1;4|n=5)", "(2;3|n=5)"),
        ("(2;4|n=5)", "(1;5|n=5)"),
        ("(2;5|n=5)", "(3;4|n=5)"),
        ("(3;5|n=5)", "(1;2|n=5)"),
    ]


def test_p1_exchange_identity_on_arbitrary_matrices():
    # (1;3)(5;4) = (1;4)(5;3) + (5,1;4,3) as plain minors, any matrix
    rng = random.Random("p1 identity")
    for _ in range(20):
        m = rand_matrix(rng, 5)
        cm = lambda p, q: circular_minor(m, pr(5, p, q))
        assert cm((1,), (3,)) * cm((5,), (4,)) == \
            cm((1,), (4,)) * cm((5,), (3,)) + cm((5, 1), (4, 3))


def test_mutate_lm_p1_roundtrip_and_errors():
    cl = initial_cluster(5)
    x, y = pr(5, (1,), (3,)), pr(5, (4,), (5,))
    cl2 = mutate_lm(cl, "P1", (x, y))
    assert y.canonical() in cl2 and x.canonical() not in cl2
    assert mutate_lm(cl2, "P1", (y, x)) == cl
    with pytest.raises(ValueError):
        mutate_lm(cl, "P1", (x, pr(5, (2,), (3,))))
    with pytest.raises(ValueError):
        mutate_lm(cl, "P3", (x, y))
    frozen = next(iter(frozen_cluster_pairs(5) - {Pair(5)}))
    assert all(a != frozen for a, _ in p1_moves(cl))


def test_p2_moves_fire_on_a_split_row_cluster():
    # rows (1,2,3) over columns (5,4) at n=5: removing the middle row can
    # trade with removing the outer rows and a column
    members = [pr(5, (2, 3), (5, 4)), pr(5, (1,), (4,)),
               pr(5, (1, 2), (5, 4)), pr(5, (3,), (4,)),
               pr(5, (1, 3), (5, 4)), Pair(5)]
    cluster = frozenset(p.canonical() for p in members)
    x = pr(5, (1, 3), (5, 4)).canonical()
    y = pr(5, (2,), (4,)).canonical()
    assert p2_moves(cluster) == [(x, y)]
    out = mutate_lm(cluster, "P2", (x, y))
    assert y in out and x not in out


def test_p2_identity_on_arbitrary_matrices():
    rng = random.Random("p2 identity")
    for _ in range(20):
        m = rand_matrix(rng, 5)
        cm = lambda p, q: circular_minor(m, pr(5, p, q))
        lhs = cm((1, 3), (5, 4)) * cm((2,), (4,))
        rhs = cm((2, 3), (5, 4)) * cm((1,), (4,)) + \
            cm((1, 2), (5, 4)) * cm((3,), (4,))
        assert lhs == rhs


def test_p2_scope_on_the_reachable_clusters():
    # a splitter block needs at least five vertices, so nothing at n=4
    for cl in enumerate_plucker_clusters(4, moves=("P1", "P2")):
        assert p2_moves(cl) == []
    # at n=5 the initial cluster has no splitter move (the companion
    # terms always leave the diametric family), but the P1-reachable
    # family does, and those moves bring in non-solid pairs
    assert p2_moves(initial_cluster(5)) == []
    live = [cl for cl in enumerate_plucker_clusters(5, moves=("P1",))
            if p2_moves(cl)]
    assert live
    entering = {y for cl in live for _, y in p2_moves(cl)}
    assert entering and all(not pairs_mod.is_solid(y) for y in entering)


def test_p1t_triple_relation():
    rng = random.Random("p1t windows")
    for n in (5, 6):
        for m in (rand_matrix(rng, n), rand_symmetric_zero_sum(rng, n)):
            cm = lambda p: circular_minor(m, p)
            tried = 0
            for (T2, k) in _grid_slots(n):
                for D in range(-n, n + 1):
                    try:
                        a = pairs_mod.pair_of_triple(D - 2, T2, k, n)
                        b = pairs_mod.pair_of_triple(D + 2, T2, k, n)
                        c1 = pairs_mod.pair_of_triple(
                            D, (T2 - 2) % (2 * n) + 1, k, n)
                        c2 = pairs_mod.pair_of_triple(
                            D, T2 % (2 * n) + 1, k, n)
                        d2 = pairs_mod.pair_of_triple(D, T2, k + 1, n)
                        d1v = Fraction(1) if k == 1 else \
                            cm(pairs_mod.pair_of_triple(D, T2, k - 1, n))
                    except ValueError:
                        continue
                    tried += 1
                    assert cm(a) * cm(b) == cm(c1) * cm(c2) + d1v * cm(d2)
            assert tried > 0


# ---------------------------------------------------------------------------
# limiting exchanges


def test_mutate_lm_limiting_size1_is_the_split_minor():
    for n in (6, 8):
        site = pr(n, (n // 2,), (n,))
        cl2 = mutate_lm(initial_cluster(n), "limiting", site)
        extra = [v for v in cl2 if isinstance(v, LimitingVariable)]
        assert len(extra) == 1 and extra[0].site == site.canonical()
        assert site.canonical() not in cl2
        split = pr(n, (n // 2, n // 2 + 1), (1, n - 1))
        assert not is_solid(split)
        want = tuple(circular_minor(m, split) for m in _sym_samples(n))
        assert extra[0].values == want


def test_mutate_lm_limiting_size2_is_not_a_minor():
    cl2 = mutate_lm(initial_cluster(8), "limiting", pr(8, (4, 5), (1, 8)))
    extra = next(v for v in cl2 if isinstance(v, LimitingVariable))
    ground, (b, c, d, e, f, g) = limiting_ground(8, 2)
    want = tuple(
        linalg.delta(m, ground, [b], [d, e]) * linalg.delta(m, ground, [c], [f, g])
        - linalg.delta(m, ground, [b], [f, g]) * linalg.delta(m, ground, [c], [d, e])
        for m in _sym_samples(8))
    assert extra.values == want
    # no circular pair matches the value on the symmetric channels
    for p in pairs_mod.enumerate_pairs(8):
        if p.is_empty:
            continue
        vec = tuple(circular_minor(m, p) for m in _sym_samples(8))
        assert vec != extra.values
        assert tuple(-x for x in vec) != extra.values


def test_mutate_lm_limiting_refusals():
    cl = initial_cluster(8)
    with pytest.raises(ValueError):  # frozen chain top
        mutate_lm(cl, "limiting", pr(8, (8, 1, 2), (6, 5, 4)))
    with pytest.raises(ValueError):  # not on the chain
        mutate_lm(cl, "limiting", pr(8, (4,), (1,)))
    moved = mutate_lm(cl, "P1", p1_moves(cl)[0])
    with pytest.raises(ValueError):  # not the initial cluster
        mutate_lm(moved, "limiting", pr(8, (4,), (8,)))
    after = mutate_lm(cl, "limiting", pr(8, (4,), (8,)))
    for fn in (p1_moves, p2_moves):
        with pytest.raises(ValueError):  # no exchanges past a limiting one
            fn(after)
    with pytest.raises(ValueError):
        mutate_lm(after, "limiting", pr(8, (4, 5), (1, 8)))
    assert limiting_pairs(5) == ()  # odd n has no chain at all


# ---------------------------------------------------------------------------
# solid clusters, classification, reduction


def test_classify_solid_accepts_the_initial_objects():
    for n in (4, 5, 6):
        assert classify_solid(initial_seed(n)) == (True, True, True)
        assert classify_solid(build_initial(n, "quiver")) == (True, True, True)
        assert classify_solid(initial_vertices(n)) == (True, True, True)


def test_classify_solid_rejects_non_solid_members():
    members = [p for p in initial_cluster(5) if not p.is_empty]
    bad = members[:-1] + [pr(5, (1, 3), (5, 4)), Pair(5)]
    assert classify_solid(bad) == (False, False, False)
    assert classify_solid(members) == (False, False, False)  # no empty pair


def _pushed_members(n, count):
    """Initial slot map with `count` slots exchanged out to |D| > 2."""
    members = dict(initial_vertices(n))
    pushed = 0
    for s in sorted(members):
        D, T2, k = pairs_mod.triple_of(members[s])
        for nd in (D - 4, D + 4):
            if abs(nd) <= 2 or abs(nd) + 2 * k > n:
                continue
            trial = dict(members)
            trial[s] = pairs_mod.pair_of_triple(nd, T2, k, n)
            if classify_solid(trial).solid_cluster:
                members = trial
                pushed += 1
                break
        if pushed == count:
            break
    assert pushed == count, "only %d of %d pushes possible" % (pushed, count)
    return members


def test_classify_solid_sees_asymmetric_clusters():
    members = _pushed_members(5, 1)
    flags = classify_solid(members)
    assert flags.solid_cluster and not flags.symmetric_solid_seed


def test_reduce_to_canonical_is_a_fixpoint_on_initial():
    for n in (4, 5, 6):
        trace, out = reduce_to_canonical(dict(initial_vertices(n)))
        assert trace == [] and out == dict(initial_vertices(n))
    s = initial_seed(5)
    trace, s2 = reduce_to_canonical(s)
    assert trace == [] and s2 == s


def test_reduce_to_canonical_pulls_back_a_push():
    # each pushed slot sits at |D| > 2, so the reduction must act there;
    # one exchange per pushed slot restores the diametric cluster
    for n in (5, 6):
        members = _pushed_members(n, 2)
        trace, out = reduce_to_canonical(members)
        assert len(trace) == 2
        assert out == dict(initial_vertices(n))
        assert max(abs(pairs_mod.triple_of(p)[0]) for p in out.values()) <= 2


def test_reduce_to_canonical_rejects_non_solid():
    members = dict(initial_vertices(5))
    s = min(members)
    members[s] = pr(5, (1, 3), (5, 4))
    with pytest.raises(ValueError):
        reduce_to_canonical(members)


def test_enumerate_solid_clusters_counts():
    assert len(enumerate_solid_clusters(4)) == 16
    assert len(enumerate_solid_clusters(4, symmetric=True)) == 4
    assert len(enumerate_solid_clusters(5)) == 123
    assert len(enumerate_solid_clusters(5, symmetric=True)) == 11
    assert len(enumerate_solid_clusters(6, symmetric=True)) == 124
    for mm in enumerate_solid_clusters(4):
        assert classify_solid(mm).solid_seed


def test_every_solid_cluster_is_exchange_reachable():
    # single-slot exchanges starting from the diametric cluster reach the
    # whole catalogue (and the symmetric ones under paired exchanges)
    for n, symmetric in ((4, False), (5, False), (4, True), (5, True)):
        want = {tuple(sorted(mm.items()))
                for mm in enumerate_solid_clusters(n, symmetric)}
        start = dict(initial_vertices(n))
        seen = {tuple(sorted(start.items()))}
        queue = [start]
        while queue:
            mm = queue.pop()
            for s in mm:
                D, T2, k = pairs_mod.triple_of(mm[s])
                nd = D - 4 if D > 0 else D + 4
                if abs(nd) + 2 * k > n:
                    continue
                m2 = dict(mm)
                m2[s] = pairs_mod.pair_of_triple(nd, T2, k, n)
                if symmetric:
                    ms = ((s[0] + n - 1) % (2 * n) + 1, s[1])
                    if ms != s:
                        Dm = pairs_mod.triple_of(m2[ms])[0]
                        if abs(-nd) + 2 * ms[1] <= n and Dm != -nd:
                            m2[ms] = pairs_mod.pair_of_triple(
                                -nd, ms[0], ms[1], n)
                flags = classify_solid(m2)
                if not flags.solid_cluster or \
                        (symmetric and not flags.symmetric_solid_seed):
                    continue
                key = tuple(sorted(m2.items()))
                if key not in seen:
                    seen.add(key)
                    queue.append(m2)
        assert seen == want


# ---------------------------------------------------------------------------
# reachable clusters and their invariants


def test_plucker_closure_n4():
    cls = enumerate_plucker_clusters(4, moves=("P1",))
    assert len(cls) == 4
    assert {len(c) for c in cls} == {7}
    assert enumerate_plucker_clusters(4, moves=("P1", "P2")) == cls
    for c in cls:
        assert Pair(4) in c
        assert frozen_cluster_pairs(4) <= c
        nonempty = [p for p in c if not p.is_empty]
        assert all(is_solid(p) for p in nonempty)
        for i, p in enumerate(nonempty):
            for q in nonempty[:i]:
                assert weakly_separated_pairs(p, q)


def test_plucker_closure_n5_and_n6_counts():
    cls = enumerate_plucker_clusters(5, moves=("P1",))
    assert len(cls) == 11
    assert {len(c) for c in cls} == {11}
    assert len(enumerate_plucker_clusters(6, moves=("P1",))) == 124


def test_plucker_closure_n5_with_splitter_moves():
    cls = enumerate_plucker_clusters(5, moves=("P1", "P2"))
    assert len(cls) == 36
    assert {len(c) for c in cls} == {11}
    assert cls > enumerate_plucker_clusters(5, moves=("P1",))
    mixed = [c for c in cls
             if any(not p.is_empty and not pairs_mod.is_solid(p) for p in c)]
    assert len(mixed) == 25
    for c in cls:
        members = sorted((p for p in c if not p.is_empty),
                         key=lambda p: (p.k, p.P, p.Q))
        for i, p in enumerate(members):
            for q in members[i + 1:]:
                assert pairs_mod.weakly_separated_pairs(p, q)


def test_plucker_closure_matches_symmetric_solid_clusters():
    for n in (4, 5):
        want = set()
        for mm in enumerate_solid_clusters(n, symmetric=True):
            want.add(frozenset(p.canonical() for p in mm.values())
                     | {Pair(n)})
        assert enumerate_plucker_clusters(n, moves=("P1",)) == want


def test_plucker_closure_guard():
    with pytest.raises(ValueError):
        enumerate_plucker_clusters(8, moves=("P1",))
    with pytest.raises(ValueError):
        enumerate_plucker_clusters(7, moves=("P1", "P2"))


def test_singleton_minors_all_appear():
    for n in (4, 5):
        seen = set()
        for c in enumerate_plucker_clusters(n, moves=("P1",)):
            for p in c:
                if p.k == 1:
                    seen.add((p.P[0], p.Q[0]))
                    seen.add((p.Q[0], p.P[0]))
        assert seen == {(i, j) for i in range(1, n + 1)
                        for j in range(1, n + 1) if i != j}


# ---------------------------------------------------------------------------
# the Laurent property, symbolically at n=4


class _Poly:
    """Laurent polynomials over the initial cluster variables of n=4.

    Monomials are exponent tuples (negative entries allowed), mapped to
    Fraction coefficients.
    """

    def __init__(self, terms):
        self.terms = {m: c for m, c in terms.items() if c}

    @classmethod
    def var(cls, i, k):
        e = [0] * k
        e[i] = 1
        return cls({tuple(e): Fraction(1)})

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return _Poly(out)

    def __mul__(self, other):
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return _Poly(out)

    def divide_exact(self, other):
        """self / other as Laurent polynomials; raises unless exact."""
        rem = dict(self.terms)
        den = dict(other.terms)
        lead = max(den)
        out = {}
        for _ in range(10000):
            if not rem:
                return _Poly(out)
            m = max(rem)
            q = tuple(a - b for a, b in zip(m, lead))
            c = rem[m] / den[lead]
            out[q] = out.get(q, Fraction(0)) + c
            for dm, dc in den.items():
                t = tuple(a + b for a, b in zip(q, dm))
                rem[t] = rem.get(t, Fraction(0)) - c * dc
                if not rem[t]:
                    del rem[t]
        raise AssertionError("division did not terminate; not Laurent")

    def __eq__(self, other):
        return self.terms == other.terms

    def __call__(self, point):
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                v *= x ** e
            total += v
        return total


def test_laurent_property_symbolically_n4():
    n = 4
    basis = sorted((p for p in initial_cluster(n) if not p.is_empty),
                   key=lambda p: (p.k, p.P, p.Q))
    nv = len(basis)
    one = _Poly({(0,) * nv: Fraction(1)})
    forms = {p: _Poly.var(i, nv) for i, p in enumerate(basis)}
    seen = {initial_cluster(n)}
    queue = [initial_cluster(n)]
    from epnet.mutation import _p1_move_table
    while queue:
        cl = queue.pop()
        for (x, y), terms in _p1_move_table(cl).items():
            Ls = [one if t.is_empty else forms[t.canonical()] for t in terms]
            L = (Ls[0] * Ls[1] + Ls[2] * Ls[3]).divide_exact(forms[x])
            if y in forms:
                assert forms[y] == L  # same variable from every route
            else:
                forms[y] = L
            nxt = (cl - {x}) | {y}
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    assert len(seen) == 4
    # every form is recovered numerically at symmetric matrices (where a
    # minor equals its flip) with no initial minor vanishing (the
    # exponents can be negative)
    samples = initial_seed(n).samples
    for m in (samples.matrices[ch] for ch in samples.SYM):
        point = [circular_minor(m, p) for p in basis]
        for p, L in forms.items():
            assert L(point) == circular_minor(m, p)
