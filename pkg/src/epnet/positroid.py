"""Electrical positroids: the axiom checker and boundary closure operations.

A set S of circular pairs on n boundary vertices is an electrical
positroid when it satisfies the eight axioms checked by check_axioms.
These sets are exactly the connection sets pi(G) of circular planar
networks, equivalently the supports of positive circular minors of
response matrices; is_positroid_realizable verifies that equivalence
extensionally at desk scale by cataloguing pi over all minors of the
well-connected network.

The boundary edge property (BEP) and boundary spike property (BSP)
describe closure of S under attaching a boundary edge {i, i+1} or a
boundary spike at i; bep_extension / bsp_extension perform the matching
one-pass completions (both reach their fixpoint in a single pass).
"""

import itertools
from functools import lru_cache

from .pairs import Pair, enumerate_pairs, enumerate_oriented, pair_from_sets
from . import network as _network


class PairSet:
    """A set of circular pairs sharing one boundary size n.

    Members are stored canonically; either orientation may be supplied
    and membership tests accept either orientation.
    """

    __slots__ = ("n", "members")

    def __init__(self, n, members=()):
        mem = set()
        for p in members:
            if not isinstance(p, Pair):
                raise ValueError("not a circular pair: %r" % (p,))
            if p.n != n:
                raise ValueError("pair %r has n=%d, expected n=%d" % (p, p.n, n))
            mem.add(p.canonical())
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "members", frozenset(mem))

    def __setattr__(self, name, value):
        raise AttributeError("PairSet is immutable")

    def __contains__(self, p):
        return isinstance(p, Pair) and p.n == self.n and p.canonical() in self.members

    def __iter__(self):
        return iter(sorted(self.members, key=lambda p: (p.k, p.P + p.Q)))

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        return (isinstance(other, PairSet) and self.n == other.n
                and self.members == other.members)

    def __hash__(self):
        return hash((self.n, self.members))

    def __repr__(self):
        return "PairSet(n=%d, %d pairs)" % (self.n, len(self.members))


def full_pair_set(n):
    """Every circular pair on n boundary vertices."""
    return PairSet(n, enumerate_pairs(n))


def connection_set(net):
    """pi(G) as a PairSet."""
    return PairSet(net.n, _network.connections(net))


def _check_index(i, n):
    if not isinstance(i, int) or not 1 <= i <= n:
        raise ValueError("boundary index %r out of range 1..%d" % (i, n))


def _drop(seq, positions):
    return tuple(x for t, x in enumerate(seq) if t not in positions)


# ---------------------------------------------------------------------------
# axiom instantiation tables
#
# Every axiom quantifies over circular pairs (or over the unbalanced
# (N+1, N) flattenings, for the exchange family 2a-2c) with designated
# removable entries.  Removing matched numbers of entries from both
# sides of a pair always yields a circular pair (a subsequence of a
# cyclic rotation of a sorted sequence is again one), so at a fixed n
# the whole quantification compiles to a finite table of membership
# implications over the canonical pair list.  The checker then runs on
# integer indices, which also makes exhaustive positroid enumeration
# affordable.

AXIOM_ORDER = ("4", "3", "1a", "1b", "1c", "2a", "2b", "2c")


@lru_cache(maxsize=None)
def _tables(n):
    pairs = tuple(sorted(enumerate_pairs(n), key=lambda p: (p.k, p.P + p.Q)))
    index = {p: i for i, p in enumerate(pairs)}

    def ref(P, Q):
        return index[Pair(n, tuple(P), tuple(Q)).canonical()]

    subset = []
    for p in pairs:
        for i in range(p.k):
            subset.append((index[p], i, ref(_drop(p.P, (i,)), _drop(p.Q, (i,)))))

    # square exchange: ground (P;Q), a = p_i, b = p_j (i < j),
    # c = q_k, d = q_l (k < l); the six relevant sub-pairs per choice.
    ax1 = []
    grounds = sorted((g for g in enumerate_oriented(n) if g.k >= 2),
                     key=lambda p: (p.k, p.P + p.Q))
    for g in grounds:
        for i, j in itertools.combinations(range(g.k), 2):
            for k, l in itertools.combinations(range(g.k), 2):
                ax1.append((g, g.P[i], g.P[j], g.Q[k], g.Q[l],
                            ref(_drop(g.P, (i,)), _drop(g.Q, (k,))),    # -a,-c
                            ref(_drop(g.P, (j,)), _drop(g.Q, (l,))),    # -b,-d
                            ref(_drop(g.P, (i,)), _drop(g.Q, (l,))),    # -a,-d
                            ref(_drop(g.P, (j,)), _drop(g.Q, (k,))),    # -b,-c
                            ref(_drop(g.P, (i, j)), _drop(g.Q, (k, l))),
                            index[g.canonical()]))

    # unbalanced exchange: ground has |P| = N+1, |Q| = N, flattened
    # P + reversed(Q) clockwise; a = p_i, b = p_j, c = p_k (i < j < k),
    # d = q_l.  Every such ground is a rotation of a sorted support of
    # odd size >= 5.
    ax2 = []
    for m in range(5, n + 1, 2):
        N = (m - 1) // 2
        for supp in itertools.combinations(range(1, n + 1), m):
            for s in range(m):
                flat = tuple(supp[(s + t) % m] for t in range(m))
                P, Q = flat[:N + 1], tuple(reversed(flat[N + 1:]))
                for i, j, k in itertools.combinations(range(N + 1), 3):
                    for l in range(N):
                        ax2.append((P, Q, P[i], P[j], P[k], Q[l],
                                    ref(_drop(P, (j,)), Q),                  # -b
                                    ref(_drop(P, (i, k)), _drop(Q, (l,))),   # -a-c,-d
                                    ref(_drop(P, (i,)), Q),                  # -a
                                    ref(_drop(P, (j, k)), _drop(Q, (l,))),   # -b-c,-d
                                    ref(_drop(P, (k,)), Q),                  # -c
                                    ref(_drop(P, (i, j)), _drop(Q, (l,)))))  # -a-b,-d

    return {"pairs": pairs, "index": index, "empty": index[Pair(n)],
            "subset": tuple(subset), "ax1": tuple(ax1), "ax2": tuple(ax2)}


def _fatal_witness(t, mem):
    """First failing fatal axiom over the index set mem, or None.

    Axioms are tried in AXIOM_ORDER; within one axiom, instantiations
    are tried in the deterministic table order.
    """
    pairs = t["pairs"]
    if t["empty"] not in mem:
        return {"axiom": "4", "premises": (), "missing": (pairs[t["empty"]],)}
    for gi, i, ci in t["subset"]:
        if gi in mem and ci not in mem:
            return {"axiom": "3", "ground": pairs[gi], "position": i + 1,
                    "premises": (pairs[gi],), "missing": (pairs[ci],)}
    for g, a, b, c, d, ac, bd, ad, bc, both, gnd in t["ax1"]:
        if ac in mem and bd in mem:
            if not ((ad in mem and bc in mem) or (both in mem and gnd in mem)):
                return {"axiom": "1a", "ground": g,
                        "removed": {"a": a, "b": b, "c": c, "d": d},
                        "premises": (pairs[ac], pairs[bd]),
                        "options": ((pairs[ad], pairs[bc]),
                                    (pairs[both], pairs[gnd])),
                        "missing": tuple(pairs[x] for x in (ad, bc, both, gnd)
                                         if x not in mem)}
    for g, a, b, c, d, ac, bd, ad, bc, both, gnd in t["ax1"]:
        if ad in mem and bc in mem and not (ac in mem and bd in mem):
            return {"axiom": "1b", "ground": g,
                    "removed": {"a": a, "b": b, "c": c, "d": d},
                    "premises": (pairs[ad], pairs[bc]),
                    "missing": tuple(pairs[x] for x in (ac, bd) if x not in mem)}
    for g, a, b, c, d, ac, bd, ad, bc, both, gnd in t["ax1"]:
        if both in mem and gnd in mem and not (ac in mem and bd in mem):
            return {"axiom": "1c", "ground": g,
                    "removed": {"a": a, "b": b, "c": c, "d": d},
                    "premises": (pairs[both], pairs[gnd]),
                    "missing": tuple(pairs[x] for x in (ac, bd) if x not in mem)}
    for P, Q, a, b, c, d, m_b, m_acd, m_a, m_bcd, m_c, m_abd in t["ax2"]:
        if m_b in mem and m_acd in mem:
            if not ((m_a in mem and m_bcd in mem) or (m_c in mem and m_abd in mem)):
                return {"axiom": "2a", "ground": (P, Q),
                        "removed": {"a": a, "b": b, "c": c, "d": d},
                        "premises": (pairs[m_b], pairs[m_acd]),
                        "options": ((pairs[m_a], pairs[m_bcd]),
                                    (pairs[m_c], pairs[m_abd])),
                        "missing": tuple(pairs[x] for x in (m_a, m_bcd, m_c, m_abd)
                                         if x not in mem)}
    for P, Q, a, b, c, d, m_b, m_acd, m_a, m_bcd, m_c, m_abd in t["ax2"]:
        if m_a in mem and m_bcd in mem and not (m_b in mem and m_acd in mem):
            return {"axiom": "2b", "ground": (P, Q),
                    "removed": {"a": a, "b": b, "c": c, "d": d},
                    "premises": (pairs[m_a], pairs[m_bcd]),
                    "missing": tuple(pairs[x] for x in (m_b, m_acd) if x not in mem)}
    for P, Q, a, b, c, d, m_b, m_acd, m_a, m_bcd, m_c, m_abd in t["ax2"]:
        if m_c in mem and m_abd in mem and not (m_b in mem and m_acd in mem):
            return {"axiom": "2c", "ground": (P, Q),
                    "removed": {"a": a, "b": b, "c": c, "d": d},
                    "premises": (pairs[m_c], pairs[m_abd]),
                    "missing": tuple(pairs[x] for x in (m_b, m_acd) if x not in mem)}
    return None


def _printed_2c_flags(t, mem, cap=25):
    pairs = t["pairs"]
    out, total = [], 0
    for P, Q, a, b, c, d, m_b, m_acd, m_a, m_bcd, m_c, m_abd in t["ax2"]:
        if m_c in mem and m_acd in mem and m_b not in mem:
            total += 1
            if len(out) < cap:
                out.append({"axiom": "2c-printed", "ground": (P, Q),
                            "removed": {"a": a, "b": b, "c": c, "d": d},
                            "premises": (pairs[m_c], pairs[m_acd]),
                            "missing": (pairs[m_b],)})
    return tuple(out), total


def check_axioms(S, report_printed_2c=True):
    """Exhaustively check the eight electrical positroid axioms on S.

    The fatal axioms, in checking order (AXIOM_ORDER):

      4   the empty pair belongs to S;
      3   subset: (P;Q) in S implies (P - p_i; Q - q_i) in S, removing
          the SAME position i from both sides;
      1a  for any circular pair (P;Q) and a = p_i, b = p_j (i < j),
          c = q_k, d = q_l (k < l): if (P-a;Q-c), (P-b;Q-d) in S then
          either (P-a;Q-d), (P-b;Q-c) in S, or (P-a-b;Q-c-d), (P;Q) in S;
      1b  converse of the first disjunct of 1a;
      1c  converse of the second disjunct of 1a;
      2a  for any flattened (P;Q) with |P| = |Q| + 1 and a = p_i,
          b = p_j, c = p_k (i < j < k), d = q_l: if (P-b;Q), (P-a-c;Q-d)
          in S then either (P-a;Q), (P-b-c;Q-d) in S, or (P-c;Q),
          (P-a-b;Q-d) in S;
      2b  (P-a;Q), (P-b-c;Q-d) in S implies (P-b;Q), (P-a-c;Q-d) in S;
      2c  (P-c;Q), (P-a-b;Q-d) in S implies (P-b;Q), (P-a-c;Q-d) in S.

    2c is enforced in the reading whose premise removes {a,b} (the
    exchange pattern matching 2a/2b).  The variant premise removing
    {a,c} instead is violated by genuine connection sets, so it is not
    fatal; instances where it fails are scanned separately and returned
    in flagged_2c (capped) with the full count in flagged_2c_count.

    Returns a report dict with keys ok, n, witness (None, or the first
    failure: axiom id, ground, removed labels, premises, missing
    conclusions -- replaying it against S reproduces the failure),
    flagged_2c, flagged_2c_count.
    """
    t = _tables(S.n)
    mem = frozenset(t["index"][p] for p in S.members)
    w = _fatal_witness(t, mem)
    rep = {"ok": w is None, "n": S.n, "witness": w,
           "flagged_2c": (), "flagged_2c_count": 0}
    if report_printed_2c:
        rep["flagged_2c"], rep["flagged_2c_count"] = _printed_2c_flags(t, mem)
    return rep


# ---------------------------------------------------------------------------
# boundary edge / boundary spike properties and extensions


def has_bep(S, i):
    """Whether S is closed under attaching the boundary edge {i, i+1}.

    True iff for every (P;Q) in S such that (P+i; Q+(i+1)) is a
    circular pair, that pair lies in S, and likewise for the flipped
    insertion (P+(i+1); Q+i).  Indices are mod n, so i = n pairs with 1.
    """
    n = S.n
    _check_index(i, n)
    j = i % n + 1
    for p in S.members:
        for A, B in ((set(p.P), set(p.Q)), (set(p.Q), set(p.P))):
            if i in A or i in B or j in A or j in B:
                continue
            cand = pair_from_sets(A | {i}, B | {j}, n)
            if cand is not None and cand not in S:
                return False
    return True


def has_bsp(S, i):
    """Whether S is closed under the boundary spike transplant at i.

    True iff for every (P;Q) in S avoiding i and every x, y with
    (P+x; Q+i) and (P+i; Q+y) both in S, the pair (P+x; Q+y) lies in S
    whenever it is a circular pair (x = y never is).
    """
    n = S.n
    _check_index(i, n)
    for p in S.members:
        for A, B in ((set(p.P), set(p.Q)), (set(p.Q), set(p.P))):
            supp = A | B
            if i in supp:
                continue
            xs, ys = [], []
            for x in range(1, n + 1):
                if x == i or x in supp:
                    continue
                px = pair_from_sets(A | {x}, B | {i}, n)
                if px is not None and px in S:
                    xs.append(x)
                py = pair_from_sets(A | {i}, B | {x}, n)
                if py is not None and py in S:
                    ys.append(x)
            for x in xs:
                for y in ys:
                    if x == y:
                        continue
                    cand = pair_from_sets(A | {x}, B | {y}, n)
                    if cand is not None and cand not in S:
                        return False
    return True


def bep_extension(S):
    """One-pass closure of S under the boundary edge {n, 1}.

    Each member (P;Q) with first labels 1 < p_1 < q_1 < n (on either
    orientation) contributes the pair on supports P + {1}, Q + {n} when
    that is a circular pair; the empty pair contributes (1;n).  Newly
    added pairs have 1 as their leading P-label, so they never seed
    further additions: one pass is the fixpoint, and the result has the
    (n,1)-BEP.
    """
    n = S.n
    out = set(S.members)
    for p in S.members:
        if p.is_empty:
            if n >= 2:
                out.add(Pair(n, (1,), (n,)).canonical())
            continue
        for P, Q in ((p.P, p.Q), (p.flip().P, p.flip().Q)):
            if 1 < P[0] < Q[0] < n:
                cand = pair_from_sets(set(P) | {1}, set(Q) | {n}, n)
                if cand is not None:
                    out.add(cand.canonical())
    return PairSet(n, out)


def bsp_extension(S):
    """One-pass closure of S under the boundary spike transplant at 1.

    Adds every circular pair (P+x; Q+y) such that (P+x; Q+1) and
    (P+1; Q+y) both lie in S, where (P;Q) runs over all circular pairs
    with 1, x not in P and 1, y not in Q.  Added pairs avoid the label
    1, while every premise contains it, so the premise pool never
    grows: one pass is the fixpoint, and the result has the 1-BSP.
    """
    n = S.n
    out = set(S.members)
    for g in enumerate_pairs(n, k_max=max((n - 2) // 2, 0)):
        for p in ((g,) if g.is_empty else (g, g.flip())):
            A, B = set(p.P), set(p.Q)
            supp = A | B
            if 1 in supp:
                continue
            xs, ys = [], []
            for x in range(2, n + 1):
                if x in supp:
                    continue
                px = pair_from_sets(A | {x}, B | {1}, n)
                if px is not None and px in S:
                    xs.append(x)
                py = pair_from_sets(A | {1}, B | {x}, n)
                if py is not None and py in S:
                    ys.append(x)
            for x in xs:
                for y in ys:
                    if x == y:
                        continue
                    cand = pair_from_sets(A | {x}, B | {y}, n)
                    if cand is not None:
                        out.add(cand.canonical())
    return PairSet(n, out)


# ---------------------------------------------------------------------------
# exhaustive enumeration and realizability


def enumerate_positroids(n):
    """All electrical positroids on n boundary vertices (n <= 5).

    Candidates are generated as matched-removal downsets -- axioms 3
    and 4 hold by construction -- and filtered through the remaining
    axioms; at n <= 5 every nonempty pair has size at most 2, so a
    downset is any union of {(;)}, single pairs B, and size-2 pairs
    whose two matched removals lie in B.  Returns a sorted tuple of
    PairSet.
    """
    if n > 5:
        raise ValueError("positroid enumeration supports n <= 5, got %d" % n)
    t = _tables(n)
    pairs = t["pairs"]
    assert all(p.k <= 2 for p in pairs)
    singles = [i for i, p in enumerate(pairs) if p.k == 1]
    doubles = [i for i, p in enumerate(pairs) if p.k == 2]
    kids = {}
    for gi, _, ci in t["subset"]:
        kids.setdefault(gi, set()).add(ci)
    results = []
    for bmask in range(1 << len(singles)):
        B = {singles[s] for s in range(len(singles)) if bmask >> s & 1}
        base = B | {t["empty"]}
        tops = [d for d in doubles if kids[d] <= B]
        for tmask in range(1 << len(tops)):
            cand = frozenset(base | {tops[s] for s in range(len(tops))
                                     if tmask >> s & 1})
            if _fatal_witness(t, cand) is None:
                results.append(cand)
    results.sort(key=lambda s: (len(s), sorted(s)))
    return tuple(PairSet(n, (pairs[i] for i in s)) for s in results)


def _simplified(net):
    """pi-preserving normal form: reduced simple unit graph, canonical names.

    Iterates the trivial reductions to a fixpoint: drop self-loops,
    collapse parallel edges, prune interior vertices with no path to
    the boundary, delete pendant interior edges, and contract away
    interior vertices of degree 2 (series reduction).  None of these
    change the connection set.  Conductances are reset to 1 and
    interior vertices renamed by a neighborhood-refinement rank so that
    differently-built copies of the same minor usually collide.
    """
    edges = {frozenset((u, v)) for u, v, _ in net.edges if u != v}
    while True:
        adj = {}
        for e in edges:
            u, v = tuple(e)
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        reach = {x for x in adj if isinstance(x, int)}
        frontier = list(reach)
        while frontier:
            for y in adj.get(frontier.pop(), ()):
                if y not in reach:
                    reach.add(y)
                    frontier.append(y)
        pruned = {e for e in edges if set(e) <= reach}
        changed = pruned != edges
        edges = pruned
        for v in sorted((x for x in reach if isinstance(x, str)), key=str):
            nbrs = adj.get(v, set()) & reach
            if len(nbrs) == 1:
                edges = {e for e in edges if v not in e}
                changed = True
                break
            if len(nbrs) == 2:
                a, b = sorted(nbrs, key=repr)
                edges = {e for e in edges if v not in e}
                if a != b:
                    edges.add(frozenset((a, b)))
                changed = True
                break
        if not changed:
            break
    adj = {}
    for e in edges:
        u, v = tuple(e)
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    interior = sorted({x for e in edges for x in e if isinstance(x, str)})
    color = {v: (("B", v) if isinstance(v, int) else ("I", 0)) for v in adj}
    for _ in range(3):
        color = {v: (color[v], tuple(sorted(color[w] for w in adj[v])))
                 for v in adj}
    rename = {v: "i%d" % (r + 1)
              for r, v in enumerate(sorted(interior, key=lambda v: (color[v], v)))}
    out = []
    for e in edges:
        u, v = tuple(e)
        out.append((rename.get(u, u), rename.get(v, v), 1))
    return _network.Network(net.n, sorted(rename.values()), sorted(out, key=repr))


def _net_key(net):
    return (net.n, frozenset(frozenset(e[:2]) for e in net.edges))


@lru_cache(maxsize=None)
def pi_family(n):
    """Every connection set pi(G) over minors of well_connected(n), n <= 5.

    Depth-first over single edge deletions and contractions starting
    from the well-connected network, which sits at the top of the minor
    order: every realizable connection set on n boundary vertices is
    pi of some such minor.  States are deduplicated by their reduced
    normal form; note that equality of connection sets alone is NOT a
    sound pruning key (reaching a class below may require walking to a
    different same-pi graph first).  Returns a frozenset of frozensets
    of canonical pairs.
    """
    if n > 5:
        raise ValueError("pi_family supports n <= 5, got %d" % n)
    start = _simplified(_network.well_connected(n))
    seen = {_net_key(start)}
    stack = [start]
    found = set()
    while stack:
        net = stack.pop()
        found.add(_network.connections(net))
        for e, (u, v, _) in enumerate(net.edges):
            steps = [_network.delete_edge(net, e)]
            if not (net.is_boundary(u) and net.is_boundary(v)):
                steps.append(_network.contract_edge(net, e))
            for nxt in steps:
                nxt = _simplified(nxt)
                key = _net_key(nxt)
                if key not in seen:
                    seen.add(key)
                    stack.append(nxt)
    return frozenset(found)


def is_positroid_realizable(S):
    """True iff S = pi(G) for some circular planar network (n <= 5)."""
    if S.n > 5:
        raise ValueError("realizability check supports n <= 5, got %d" % S.n)
    return frozenset(S.members) in pi_family(S.n)


if __name__ == "__main__":
    for n in (3, 4):
        pos = enumerate_positroids(n)
        fam = pi_family(n)
        print("n=%d: %d electrical positroids, %d realizable connection sets"
              % (n, len(pos), len(fam)))
        assert {frozenset(S.members) for S in pos} == fam
