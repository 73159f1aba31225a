"""Circular planar electrical networks with exact conductances.

A Network has boundary vertices 1..n (clockwise around the disk),
interior vertices named by strings, and edges carrying positive rational
conductances; parallel edges and self-loops are allowed.  Planarity of
user-supplied networks is trusted, not certified -- response matrices
and connection sets are graph-theoretic -- while all generators here
produce planar networks by construction.

Provides the exact response matrix (Schur complement of the weighted
Laplacian), the connection set pi(G) by vertex-disjoint path search, the
local equivalences (loop/spike removal, series, parallel, Y-Delta both
ways), deletion/contraction, and a standard well-connected network whose
circular minors are all positive.
"""

import itertools
from fractions import Fraction
from functools import lru_cache

from .linalg import Matrix, circular_minor, rand_fraction
from .pairs import Pair, enumerate_pairs

__all__ = [
    "Network",
    "response_matrix",
    "connections",
    "verify_minor_connection",
    "local_move",
    "delete_edge",
    "contract_edge",
    "well_connected",
    "random_planar_network",
    "equivalent",
]


class Network:
    """Immutable electrical network on n boundary vertices."""

    __slots__ = ("n", "interior", "edges")

    def __init__(self, n, interior=(), edges=()):
        if not isinstance(n, int) or n < 1:
            raise ValueError("need at least one boundary vertex")
        interior = tuple(sorted(set(interior)))
        for v in interior:
            if not isinstance(v, str):
                raise ValueError("interior vertices are strings, got %r" % (v,))
        known = set(range(1, n + 1)) | set(interior)
        norm = []
        for u, v, g in edges:
            if u not in known or v not in known:
                raise ValueError("edge (%r,%r) has unknown endpoint" % (u, v))
            g = Fraction(g)
            if g <= 0:
                raise ValueError("conductance %s is not positive" % g)
            norm.append((u, v, g))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "interior", interior)
        object.__setattr__(self, "edges", tuple(norm))

    def __setattr__(self, name, value):
        raise AttributeError("Network is immutable")

    def is_boundary(self, v):
        return isinstance(v, int)

    @property
    def vertices(self):
        return tuple(range(1, self.n + 1)) + self.interior

    def adjacency(self):
        """vertex -> set of neighbors (self-loops and multiplicity dropped)."""
        adj = {v: set() for v in self.vertices}
        for u, v, _ in self.edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return adj

    def degree(self, v):
        """Edge-endpoint count at v; a self-loop contributes 2."""
        d = 0
        for u, w, _ in self.edges:
            d += (u == v) + (w == v)
        return d

    def incident(self, v):
        return [i for i, (u, w, _) in enumerate(self.edges) if v in (u, w)]

    def fresh_interior(self, base="w"):
        taken = set(self.interior)
        i = 0
        while "%s%d" % (base, i) in taken:
            i += 1
        return "%s%d" % (base, i)

    def __repr__(self):
        return ("Network(n=%d, %d interior, %d edges)"
                % (self.n, len(self.interior), len(self.edges)))


def _unreachable_interior(net):
    # interior vertices with no path to any boundary vertex
    adj = net.adjacency()
    seen = set(range(1, net.n + 1))
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return [v for v in net.interior if v not in seen]


def response_matrix(net):
    """Exact response matrix of the network on boundary vertices 1..n.

    Computed as the negated Schur complement of the weighted Laplacian:
    M = -(L_BB - L_BI L_II^{-1} L_IB), the sign convention under which
    every circular minor of a response matrix is nonnegative (the
    off-diagonal entries, the size-1 minors, are then >= 0).  Symmetric
    with zero row sums.  Requires every interior vertex to be connected
    to the boundary; otherwise the interior block is singular and the
    offending vertices are named.
    """
    bad = _unreachable_interior(net)
    if bad:
        raise ValueError("interior component %s is disconnected from the "
                         "boundary; response matrix undefined" % (bad,))
    order = list(range(1, net.n + 1)) + list(net.interior)
    idx = {v: i for i, v in enumerate(order)}
    N = len(order)
    L = [[Fraction(0)] * N for _ in range(N)]
    for u, v, g in net.edges:
        if u == v:
            continue
        i, j = idx[u], idx[v]
        L[i][i] += g
        L[j][j] += g
        L[i][j] -= g
        L[j][i] -= g
    n, m = net.n, len(net.interior)
    if m == 0:
        return Matrix([[-x for x in row[:n]] for row in L[:n]])
    # solve L_II X = L_IB by Gaussian elimination, then M = L_BB - L_BI X
    aug = [[L[n + i][n + j] for j in range(m)] + [L[n + i][j] for j in range(n)]
           for i in range(m)]
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("interior block unexpectedly singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pval = aug[col][col]
        aug[col] = [x / pval for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    X = [row[m:] for row in aug]  # m x n
    out = [[sum(L[i][n + t] * X[t][j] for t in range(m)) - L[i][j]
            for j in range(n)] for i in range(n)]
    return Matrix(out)


def _has_connection(net, pair, adj=None):
    if pair.is_empty:
        return True
    if adj is None:
        adj = net.adjacency()
    P, Q = pair.P, pair.Q
    k = pair.k
    used = set()

    def walk(i):
        if i == k:
            return True
        src, dst = P[i], Q[i]

        def dfs(v, on_path):
            for w in adj[v]:
                if w == dst:
                    if walk(i + 1):
                        return True
                elif not net.is_boundary(w) and w not in used and w not in on_path:
                    on_path.add(w)
                    used.add(w)
                    if dfs(w, on_path):
                        return True
                    on_path.discard(w)
                    used.discard(w)
            return False

        return dfs(src, set())

    return walk(0)


def connections(net):
    """pi(G): canonical circular pairs joined by vertex-disjoint paths.

    Paths for (P;Q) run p_i to q_i, pairwise vertex-disjoint, with no
    boundary vertices in their interiors.  Always contains the empty
    pair.  Exhaustive search; meant for small n.
    """
    adj = net.adjacency()
    return frozenset(p for p in enumerate_pairs(net.n)
                     if _has_connection(net, p, adj))


def verify_minor_connection(net):
    """Cross-check minors against connections on one network.

    Returns a report dict: all circular minors of the response matrix
    must be nonnegative, and the strictly positive ones must be exactly
    the connection set.
    """
    M = response_matrix(net)
    pi = connections(net)
    failures = []
    n_pos = 0
    for p in enumerate_pairs(net.n):
        val = circular_minor(M, p)
        if val > 0:
            n_pos += 1
        if val < 0:
            failures.append({"pair": p, "minor": val, "why": "negative minor"})
        elif (val > 0) != (p in pi):
            failures.append({"pair": p, "minor": val,
                             "why": "positivity disagrees with connection"})
    return {"ok": not failures, "n": net.n, "n_pairs": len(list(enumerate_pairs(net.n))),
            "n_positive": n_pos, "failures": failures}


def _edge_by_index(net, e):
    if not isinstance(e, int) or not 0 <= e < len(net.edges):
        raise ValueError("no edge with index %r" % (e,))
    return net.edges[e]


def delete_edge(net, e):
    """Remove edge e (by index); interior vertices left isolated are dropped."""
    _edge_by_index(net, e)
    edges = [ed for i, ed in enumerate(net.edges) if i != e]
    touched = {u for ed in edges for u in ed[:2]}
    interior = [v for v in net.interior if v in touched]
    return Network(net.n, interior, edges)


def contract_edge(net, e):
    """Contract edge e, identifying its endpoints.

    Boundary-boundary edges cannot be contracted.  A boundary-interior
    contraction keeps the boundary vertex; parallel copies of the
    contracted edge become self-loops.
    """
    u, v, _ = _edge_by_index(net, e)
    if net.is_boundary(u) and net.is_boundary(v):
        raise ValueError("cannot contract boundary-boundary edge (%s,%s)" % (u, v))
    if u == v:
        raise ValueError("cannot contract a self-loop")
    keep, gone = (u, v) if net.is_boundary(u) or not net.is_boundary(v) else (v, u)
    edges = []
    for i, (a, b, g) in enumerate(net.edges):
        if i == e:
            continue
        a = keep if a == gone else a
        b = keep if b == gone else b
        edges.append((a, b, g))
    touched = {x for ed in edges for x in ed[:2]}
    interior = [w for w in net.interior if w != gone and w in touched]
    return Network(net.n, interior, edges)


def local_move(net, move, site):
    """Apply one local equivalence; the response matrix is preserved.

    move / site:
      remove_loop   edge index of a self-loop
      remove_spike  interior vertex of degree 1
      series        interior vertex of degree 2 (its two edges merge:
                    g1 g2 / (g1 + g2))
      parallel      (e1, e2) edge indices with the same endpoints
                    (conductances add)
      y_delta       interior vertex of degree 3 with three distinct
                    neighbors; star edge pair products over the sum
                    replace it by a triangle
      delta_y       (e1, e2, e3) edge indices forming a triangle; a new
                    interior star vertex replaces it, each leg the sum
                    of pairwise products over the opposite triangle edge
    """
    if move == "remove_loop":
        u, v, _ = _edge_by_index(net, site)
        if u != v:
            raise ValueError("edge %d is not a self-loop" % site)
        return delete_edge(net, site)

    if move == "remove_spike":
        if site not in net.interior:
            raise ValueError("%r is not an interior vertex" % (site,))
        if net.degree(site) != 1:
            raise ValueError("vertex %r has degree %d, not a spike"
                             % (site, net.degree(site)))
        return delete_edge(net, net.incident(site)[0])

    if move == "series":
        if site not in net.interior:
            raise ValueError("%r is not an interior vertex" % (site,))
        inc = net.incident(site)
        if net.degree(site) != 2 or len(inc) != 2:
            raise ValueError("vertex %r is not in series position" % (site,))
        (a1, b1, g1), (a2, b2, g2) = net.edges[inc[0]], net.edges[inc[1]]
        a = a1 if b1 == site else b1
        b = a2 if b2 == site else b2
        edges = [ed for i, ed in enumerate(net.edges) if i not in inc]
        edges.append((a, b, g1 * g2 / (g1 + g2)))
        interior = [w for w in net.interior if w != site]
        return Network(net.n, interior, edges)

    if move == "parallel":
        e1, e2 = site
        u1, v1, g1 = _edge_by_index(net, e1)
        u2, v2, g2 = _edge_by_index(net, e2)
        if e1 == e2 or {u1, v1} != {u2, v2} or u1 == v1:
            raise ValueError("edges %r are not a parallel pair" % (site,))
        edges = [ed for i, ed in enumerate(net.edges) if i not in (e1, e2)]
        edges.append((u1, v1, g1 + g2))
        return Network(net.n, net.interior, edges)

    if move == "y_delta":
        if site not in net.interior:
            raise ValueError("%r is not an interior vertex" % (site,))
        inc = net.incident(site)
        if net.degree(site) != 3 or len(inc) != 3:
            raise ValueError("vertex %r is not a Y center" % (site,))
        legs = []
        for i in inc:
            u, v, g = net.edges[i]
            legs.append((u if v == site else v, g))
        if len({x for x, _ in legs}) != 3:
            raise ValueError("Y center %r has repeated neighbors" % (site,))
        (a, ga), (b, gb), (c, gc) = legs
        S = ga + gb + gc
        edges = [ed for i, ed in enumerate(net.edges) if i not in inc]
        edges += [(a, b, ga * gb / S), (a, c, ga * gc / S), (b, c, gb * gc / S)]
        interior = [w for w in net.interior if w != site]
        return Network(net.n, interior, edges)

    if move == "delta_y":
        e1, e2, e3 = site
        tri = [_edge_by_index(net, e) for e in (e1, e2, e3)]
        verts = {x for u, v, _ in tri for x in (u, v)}
        if len({e1, e2, e3}) != 3 or len(verts) != 3 or any(u == v for u, v, _ in tri):
            raise ValueError("edges %r do not form a triangle" % (site,))
        cond = {}
        for u, v, g in tri:
            key = frozenset((u, v))
            if key in cond:
                raise ValueError("edges %r do not form a triangle" % (site,))
            cond[key] = g
        a, b, c = sorted(verts, key=str)
        gab = cond[frozenset((a, b))]
        gbc = cond[frozenset((b, c))]
        gca = cond[frozenset((c, a))]
        T = gab * gbc + gbc * gca + gca * gab
        w = net.fresh_interior()
        edges = [ed for i, ed in enumerate(net.edges) if i not in (e1, e2, e3)]
        edges += [(a, w, T / gbc), (b, w, T / gca), (c, w, T / gab)]
        return Network(net.n, net.interior + (w,), edges)

    raise ValueError("unknown move %r" % (move,))


def equivalent(g1, g2):
    """Graph-level equivalence: identical connection sets."""
    if g1.n != g2.n:
        raise ValueError("different boundary sizes %d and %d" % (g1.n, g2.n))
    return connections(g1) == connections(g2)


# --- well-connected construction -------------------------------------------

def _boundary_points(n):
    # rational points in convex position, labels clockwise along the arc
    pts = {}
    for lab in range(1, n + 1):
        j = n + 1 - lab
        t = Fraction(j, 1) + Fraction(1, j + 2)
        den = 1 + t * t
        pts[lab] = ((1 - t * t) / den, 2 * t / den)
    return pts


def _segment_crossing(p1, p2, q1, q2):
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (q2[0] - q1[0], q2[1] - q1[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return None
    w = (q1[0] - p1[0], q1[1] - p1[1])
    s = (w[0] * d2[1] - w[1] * d2[0]) / den
    u = (w[0] * d1[1] - w[1] * d1[0]) / den
    if 0 < s < 1 and 0 < u < 1:
        return (p1[0] + s * d1[0], p1[1] + s * d1[1])
    return None


@lru_cache(maxsize=None)
def _chord_arrangement(n):
    """Subdivided complete-chord arrangement on n convex points.

    Every chord {i,j} is drawn; each of the C(n,4) interior crossings
    becomes an interior vertex splitting both chords.  Asserts that no
    three chords are concurrent (the deterministic point choice is
    irregular enough).
    """
    import math

    pts = _boundary_points(n)
    chords = list(itertools.combinations(range(1, n + 1), 2))
    hits = {}   # point -> list of (chord, parameter s along chord)
    for c1, c2 in itertools.combinations(chords, 2):
        p = _segment_crossing(pts[c1[0]], pts[c1[1]], pts[c2[0]], pts[c2[1]])
        if p is None:
            continue
        hits.setdefault(p, set()).update((c1, c2))
    assert len(hits) == math.comb(n, 4), "unexpected crossing count"
    assert all(len(cs) == 2 for cs in hits.values()), "three chords concurrent"
    names = {}
    for i, p in enumerate(sorted(hits)):
        names[p] = "x%d" % i
    edges = []
    for a, b in chords:
        pa, pb = pts[a], pts[b]
        d = (pb[0] - pa[0], pb[1] - pa[1])
        stops = [(Fraction(0), a), (Fraction(1), b)]
        for p, cs in hits.items():
            if (a, b) in cs:
                s = (((p[0] - pa[0]) * d[0] + (p[1] - pa[1]) * d[1])
                     / (d[0] * d[0] + d[1] * d[1]))
                stops.append((s, names[p]))
        stops.sort()
        for (_, u), (_, v) in zip(stops, stops[1:]):
            edges.append((u, v))
    return tuple(sorted(names.values())), tuple(edges)


@lru_cache(maxsize=None)
def _well_connected_verified(n):
    net = _materialize_well_connected(n, None)
    if n <= 6:
        rep = verify_minor_connection(net)
        assert rep["ok"] and rep["n_positive"] == rep["n_pairs"], \
            "well_connected(%d) failed its positivity scan" % n
    return net


def _materialize_well_connected(n, rng):
    interior, skeleton = _chord_arrangement(n)
    edges = [(u, v, Fraction(1) if rng is None else abs(rand_fraction(rng)) + 1)
             for u, v in skeleton]
    return Network(n, interior, edges)


def well_connected(n, rng=None):
    """A network on n boundary vertices with every circular minor positive.

    The full chord arrangement: all C(n,2) chords, subdivided at their
    C(n,4) crossings.  The chords of any circular pair (P;Q) are pairwise
    non-crossing, so tracing them gives vertex-disjoint connections:
    pi = all pairs.  Unit conductances by default (verified by full minor
    scan for n <= 6, cached); pass an rng for random positive ones.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if rng is None:
        return _well_connected_verified(n)
    return _materialize_well_connected(n, rng)


def random_planar_network(rng, n, max_interior=3, extra_ops=4):
    """A random circular planar network on n boundary vertices.

    Starts from the chord arrangement with random conductances and
    applies random edge deletions and contractions -- both preserve
    disk planarity -- until at most max_interior interior vertices
    remain, plus a few extra thinning steps.  Interior pieces that lose
    contact with the boundary are dropped so the response matrix is
    always defined.
    """
    net = well_connected(n, rng=rng)
    ops = 0
    while net.edges and (len(net.interior) > max_interior or ops < extra_ops):
        e = rng.randrange(len(net.edges))
        u, v, _ = net.edges[e]
        both_boundary = net.is_boundary(u) and net.is_boundary(v)
        if u != v and not both_boundary and rng.random() < 0.6:
            net = contract_edge(net, e)
        else:
            net = delete_edge(net, e)
        ops += 1
    bad = set(_unreachable_interior(net))
    if bad:
        edges = [e for e in net.edges if e[0] not in bad and e[1] not in bad]
        net = Network(net.n, [v for v in net.interior if v not in bad], edges)
    return net


if __name__ == "__main__":
    net = well_connected(4)
    print(net)
    M = response_matrix(net)
    for row in M.entries:
        print("  ", "  ".join(str(x) for x in row))
    print("connections:", len(connections(net)), "pairs (incl. empty)")
