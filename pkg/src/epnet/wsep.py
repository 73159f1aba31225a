"""Weak-separation analysis of circular pairs.

A collection of pairwise weakly separated circular pairs can have at
most C(n,2) members, and more sharply at most as many members as the
distinct boundary chords {p_i, q_i} its pairs use; Hall's theorem then
matches each member to one of its own chords injectively.  Maximal
collections are conjectured to coincide both with the reachable minor
clusters of the exchange algebra and with the minimal positivity tests
for response matrices.  This module enumerates maximal collections,
checks the cardinality bounds, constructs the chord matchings, searches
for positivity-test counterexamples by randomized falsification, and
bundles the whole cross-family comparison into a reproducible report.
"""

from collections import deque
from fractions import Fraction
import random
import time

from . import linalg
from .linalg import Matrix, circular_minor
from .mutation import (_p1_move_table, _p2_move_table, initial_cluster)
from .network import response_matrix, well_connected
from .pairs import Pair, edges_of, enumerate_pairs, weakly_separated_pairs

__all__ = [
    "compatibility_graph",
    "maximal_ws_collections",
    "check_strongbound",
    "hall_matching",
    "positivity_falsify",
    "cluster_paths",
    "diametric_expressions",
    "evaluate_expression",
    "ConjectureReport",
    "verify_conjecture",
]


def _pair_key(p):
    return (p.k, p.P, p.Q)


def _validated_members(collection):
    """Sorted nonempty members, or a ValueError naming a witness pair.

    The empty pair is weakly separated from everything and carries no
    chord, so it is dropped rather than counted.
    """
    members = sorted((p for p in collection if not p.is_empty), key=_pair_key)
    for i, x in enumerate(members):
        for y in members[:i]:
            if not weakly_separated_pairs(x, y):
                raise ValueError("not weakly separated: %r vs %r" % (x, y))
    return members


# ---------------------------------------------------------------------------
# maximal collections


def compatibility_graph(n):
    """All nonempty canonical pairs on n, with weak-separation adjacency.

    Returns (vertices, adjacency) where vertices is a sorted tuple and
    adjacency maps each vertex to the frozenset of distinct vertices it
    is weakly separated from.
    """
    verts = tuple(sorted((p for p in enumerate_pairs(n) if not p.is_empty),
                         key=_pair_key))
    adj = {v: set() for v in verts}
    for i, x in enumerate(verts):
        for y in verts[:i]:
            if weakly_separated_pairs(x, y):
                adj[x].add(y)
                adj[y].add(x)
    return verts, {v: frozenset(a) for v, a in adj.items()}


def _degeneracy_order(verts, adj):
    """Vertices ordered by repeatedly removing a minimum-degree vertex."""
    remaining = set(verts)
    deg = {v: len(adj[v]) for v in verts}
    order = []
    while remaining:
        v = min(remaining, key=lambda u: (deg[u], _pair_key(u)))
        order.append(v)
        remaining.discard(v)
        for u in adj[v]:
            if u in remaining:
                deg[u] -= 1
    return order


def _bron_kerbosch(R, P, X, adj, out):
    if not P and not X:
        out.append(frozenset(R))
        return
    pivot = max(P | X, key=lambda u: (len(adj[u] & P), _pair_key(u)))
    for v in sorted(P - adj[pivot], key=_pair_key):
        _bron_kerbosch(R | {v}, P & adj[v], X & adj[v], adj, out)
        P = P - {v}
        X = X | {v}


def maximal_ws_collections(n):
    """All maximal sets of pairwise weakly separated nonempty pairs.

    Maximal-clique enumeration on the compatibility graph, with
    degeneracy ordering and pivoting.  Every output has at most C(n,2)
    members.  Limited to n <= 6 (190 vertices).
    """
    if n > 6:
        raise ValueError("maximal-collection enumeration is limited to "
                         "n <= 6, got %d" % n)
    verts, adj = compatibility_graph(n)
    order = _degeneracy_order(verts, adj)
    index = {v: i for i, v in enumerate(order)}
    out = []
    for i, v in enumerate(order):
        later = {u for u in adj[v] if index[u] > i}
        earlier = {u for u in adj[v] if index[u] < i}
        _bron_kerbosch({v}, later, earlier, adj, out)
    return frozenset(out)


# ---------------------------------------------------------------------------
# cardinality bounds and chord matchings


def check_strongbound(collection):
    """Whether |C| <= |E| for E the union of the members' chord sets.

    Validates that the collection is pairwise weakly separated first
    (ValueError with a witness otherwise).  The bound is a theorem, so
    False signals a violation rather than an expected outcome.
    """
    members = _validated_members(collection)
    E = set()
    for p in members:
        E |= edges_of(p)
    return len(members) <= len(E)


def hall_matching(collection):
    """Injective assignment of each member to one of its own chords.

    Validates pairwise weak separation, then runs augmenting-path
    bipartite matching between members and chords.  Returns a dict
    mapping each nonempty member to a chord of its own chord set, or
    None when no complete matching exists (which would contradict the
    chord-count bound via Hall's condition).
    """
    members = _validated_members(collection)
    owner = {}

    def augment(p, blocked):
        for chord in sorted(edges_of(p), key=sorted):
            if chord in blocked:
                continue
            blocked.add(chord)
            if chord not in owner or augment(owner[chord], blocked):
                owner[chord] = p
                return True
        return False

    for p in members:
        if not augment(p, set()):
            return None
    return {p: chord for chord, p in owner.items()}


# ---------------------------------------------------------------------------
# positivity-test falsification


def _dense_fraction(rng):
    return Fraction(rng.randint(1, 9) * rng.choice((-1, 1)),
                    rng.randint(1, 9))


def _zero_sum_symmetric(n, off):
    rows = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in off.items():
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = v
    for i in range(n):
        rows[i][i] = -sum(rows[i])
    return Matrix(rows)


def positivity_falsify(collection, target, budget, seed=0):
    """Search for a matrix separating the target minor from a collection.

    Looks for a symmetric zero-row-sum matrix whose minors at every
    member of the collection are positive while the target's minor is
    <= 0.  Random restarts plus coordinate hill-climbing on the signs of
    the off-diagonal entries; budget counts matrices examined.  A found
    matrix PROVES the collection is not a positivity test; None is
    inconclusive.  Deterministic for fixed (collection, target, seed).
    """
    if target in collection:
        raise ValueError("target %r is a member of the collection"
                         % (target,))
    n = target.n
    constraints = sorted((p for p in collection if not p.is_empty),
                         key=_pair_key)
    rng = random.Random("falsify:%s:%s:%s"
                        % (seed, target, [str(p) for p in constraints]))
    coords = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    full = len(constraints) + 1

    def score(m):
        good = sum(1 for p in constraints if circular_minor(m, p) > 0)
        return good + (1 if circular_minor(m, target) <= 0 else 0)

    spent = 0
    while spent < budget:
        off = {c: _dense_fraction(rng) for c in coords}
        m = _zero_sum_symmetric(n, off)
        spent += 1
        best = score(m)
        if best == full:
            return m
        improved = True
        while improved and spent < budget:
            improved = False
            for c in coords:
                if spent >= budget:
                    break
                off[c] = -off[c]
                trial = _zero_sum_symmetric(n, off)
                spent += 1
                got = score(trial)
                if got > best:
                    best, m = got, trial
                    improved = True
                    if best == full:
                        return m
                else:
                    off[c] = -off[c]
    return None


# ---------------------------------------------------------------------------
# constructive positivity certificates


def cluster_paths(n, moves=("P1", "P2")):
    """Exchange path from the initial cluster to every reachable cluster.

    Breadth-first closure; returns a dict mapping each reachable cluster
    to a tuple of steps (leaving, entering, (t1, t2, t3, t4)) with
    leaving * entering = t1 * t2 + t3 * t4, all pairs canonical.
    """
    start = initial_cluster(n)
    paths = {start: ()}
    queue = deque([start])
    while queue:
        cl = queue.popleft()
        tables = []
        if "P1" in moves:
            tables.append(_p1_move_table(cl))
        if "P2" in moves:
            tables.append(_p2_move_table(cl))
        for table in tables:
            for (x, y), terms in sorted(table.items(),
                                        key=lambda kv: (_pair_key(kv[0][0]),
                                                        _pair_key(kv[0][1]))):
                nxt = (cl - {x}) | {y}
                if nxt not in paths:
                    paths[nxt] = paths[cl] + ((x, y, terms),)
                    queue.append(nxt)
    return paths


def diametric_expressions(n, path):
    """Subtraction-free expressions for the diametric minors.

    Given an exchange path (as produced by cluster_paths) leading to a
    cluster C, replays it backward: at each step the leaving variable x
    satisfies x = (t1*t2 + t3*t4) / y, an expression in variables
    already reduced to C.  Returns a dict mapping every nonempty
    diametric pair to an expression tree over the variables of C, built
    from ("var", pair), ("one",) leaves and "add"/"mul"/"div" nodes
    only — no subtraction anywhere.
    """
    final = initial_cluster(n)
    for x, y, _terms in path:
        final = (final - {x}) | {y}
    exprs = {}
    for p in final:
        exprs[p] = ("one",) if p.is_empty else ("var", p)
    for x, y, terms in reversed(path):
        if x in exprs:
            continue  # re-entered later; already a variable of C
        e1, e2, e3, e4 = (exprs[t] for t in terms)
        exprs[x] = ("div", ("add", ("mul", e1, e2), ("mul", e3, e4)),
                    exprs[y])
    return {p: exprs[p] for p in initial_cluster(n) if not p.is_empty}


def evaluate_expression(expr, values):
    """Evaluate an expression tree at a dict of variable values."""
    op = expr[0]
    if op == "one":
        return Fraction(1)
    if op == "var":
        return values[expr[1]]
    a = evaluate_expression(expr[1], values)
    b = evaluate_expression(expr[2], values)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError("unknown operator %r" % (op,))


def _certify_cluster(n, cluster, path, matrix):
    """Check the backward-replay positivity certificate for one cluster.

    Every diametric minor must be reproduced exactly by its
    subtraction-free expression over the cluster's minors, evaluated at
    a matrix with positive circular minors.  Returns an error string, or
    None on success.
    """
    exprs = diametric_expressions(n, path)
    values = {p: circular_minor(matrix, p) for p in cluster if not p.is_empty}
    if any(v <= 0 for v in values.values()):
        return "cluster minor not positive at the certificate matrix"
    for p, expr in sorted(exprs.items(), key=lambda kv: _pair_key(kv[0])):
        got = evaluate_expression(expr, values)
        want = circular_minor(matrix, p)
        if got != want:
            return "expression for %s evaluates to %s, minor is %s" \
                % (p, got, want)
        if got <= 0:
            return "diametric minor %s not positive" % (p,)
    return None


# ---------------------------------------------------------------------------
# the full cross-family comparison


class ConjectureReport:
    """Outcome of the three-way family comparison at one boundary size.

    Carries the counts of all objects involved, the set-level equality
    results (each asserted equality backed by an explicit empty
    difference), the list of failures (empty when everything holds), and
    the search parameters for reproducibility.
    """

    def __init__(self, n, counts, equalities, failures, seed, budget,
                 wall_time):
        self.n = n
        self.counts = dict(counts)
        self.equalities = dict(equalities)
        self.failures = list(failures)
        self.seed = seed
        self.budget = budget
        self.wall_time = wall_time

    @property
    def ok(self):
        return not self.failures and all(self.equalities.values())

    def as_dict(self):
        return {
            "n": self.n,
            "counts": dict(self.counts),
            "equalities": dict(self.equalities),
            "failures": list(self.failures),
            "seed": self.seed,
            "budget": self.budget,
            "wall_time": self.wall_time,
        }

    def __repr__(self):
        return "<report n=%d %s, %d failures>" % (
            self.n, "ok" if self.ok else "FAILED", len(self.failures))


def _sorted_clusters(clusters):
    return sorted(clusters, key=lambda c: sorted(str(p) for p in c))


def verify_conjecture(n, budget=10000, seed=0):
    """Compare maximal collections, reachable clusters, positivity tests.

    Three parts: (i) the family of maximal weakly separated collections
    equals the family of reachable clusters (with the empty pair set
    aside); (ii) every cluster is certified a positivity test
    constructively, by expressing each diametric minor subtraction-free
    in the cluster's minors via backward path replay; (iii) minimality
    evidence — for every cluster and every removed member, the
    falsification search finds a matrix within budget proving the
    remainder is not a positivity test.  Routine for n <= 5; n = 6 takes
    hours.
    """
    if n > 6:
        raise ValueError("conjecture verification is limited to n <= 6, "
                         "got %d" % n)
    t0 = time.monotonic()
    failures = []

    paths = cluster_paths(n)
    cluster_family = frozenset(cl - {Pair(n)} for cl in paths)
    collections = maximal_ws_collections(n)

    only_collections = collections - cluster_family
    only_clusters = cluster_family - collections
    families_equal = not only_collections and not only_clusters
    for c in _sorted_clusters(only_collections):
        failures.append("maximal collection is not a cluster: {%s}"
                        % ", ".join(sorted(str(p) for p in c)))
    for c in _sorted_clusters(only_clusters):
        failures.append("cluster is not a maximal collection: {%s}"
                        % ", ".join(sorted(str(p) for p in c)))

    size_bound = n * (n - 1) // 2
    bound_ok = all(len(c) <= size_bound for c in collections)
    if not bound_ok:
        failures.append("a maximal collection exceeds %d members"
                        % size_bound)

    certificate_matrix = response_matrix(well_connected(n))
    certified = 0
    for cl in _sorted_clusters(paths):
        err = _certify_cluster(n, cl, paths[cl], certificate_matrix)
        if err is None:
            certified += 1
        else:
            failures.append("positivity certificate failed for {%s}: %s"
                            % (", ".join(sorted(str(p) for p in cl)), err))

    falsify_calls = 0
    falsified = 0
    for cl in _sorted_clusters(paths):
        members = sorted((p for p in cl if not p.is_empty), key=_pair_key)
        for x in members:
            falsify_calls += 1
            found = positivity_falsify(frozenset(members) - {x}, x,
                                       budget, seed)
            if found is None:
                failures.append("no counterexample within budget for %s "
                                "removed from {%s}"
                                % (x, ", ".join(str(p) for p in members)))
            else:
                falsified += 1

    counts = {
        "pairs": sum(1 for p in enumerate_pairs(n) if not p.is_empty),
        "maximal_collections": len(collections),
        "clusters": len(paths),
        "certified_clusters": certified,
        "falsify_calls": falsify_calls,
        "falsified": falsified,
    }
    equalities = {
        "collections_equal_clusters": families_equal,
        "collections_within_size_bound": bound_ok,
        "all_clusters_certified": certified == len(paths),
        "all_removals_falsified": falsified == falsify_calls,
    }
    return ConjectureReport(n, counts, equalities, failures, seed, budget,
                            time.monotonic() - t0)


if __name__ == "__main__":
    for n in (4, 5):
        report = verify_conjecture(n, budget=10000)
        print(report)
        for key, val in sorted(report.counts.items()):
            print("  %s: %s" % (key, val))
