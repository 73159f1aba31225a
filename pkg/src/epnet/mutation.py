"""Exchange graphs, quivers, and cluster mutation for circular minors.

The nonempty solid pairs on n vertices live on a polar grid: a pair with
coordinates (D, T2, k) (see pairs.triple_of) occupies the slot (T2, k) --
angular position T2 in 1..2n, radius k -- and the empty pair sits at the
center.  The diametric pairs fill every slot exactly once (at radius n/2
only the odd T2 slots exist), and that layout drives everything here:

- the initial exchange graph on the oriented diametric pairs plus the
  empty pair, with adjacency/diagonal/center edge rules;
- an alternating orientation of that graph (the initial quiver);
- exact seed mutation with values tracked at fixed rational sample
  matrices (three generic, three symmetric with zero row sums);
- three-term exchange moves on clusters of circular pairs, the splitter
  exchange at the special balanced vertices, and breadth-first closure
  of the reachable clusters.

Everything is exact (fractions.Fraction); nothing here floats.
"""

from fractions import Fraction
from functools import lru_cache
from collections import namedtuple
from itertools import combinations
import random

from . import linalg
from . import pairs as _pairs
from .pairs import Pair

__all__ = [
    "Quiver", "Seed", "SampleSet", "SolidSeedFlags", "AMBIGUOUS",
    "slot_of", "initial_vertices",
    "build_initial", "initial_seed", "mutate_cm", "mutate_sym",
    "symmetrize", "identify_variable",
    "initial_cluster", "p1_moves", "p2_moves", "mutate_lm",
    "LimitingVariable", "limiting_pairs", "limiting_classes",
    "classify_solid", "solid_seed_edges", "reduce_to_canonical",
    "enumerate_solid_clusters", "enumerate_plucker_clusters",
]


def _step(a, d, n):
    """Label d clockwise steps from a (labels 1..n)."""
    return (a - 1 + d) % n + 1


# ---------------------------------------------------------------------------
# slots


def slot_of(pair):
    """(T2, k) grid slot of a nonempty solid pair, with T2 in 1..2n."""
    D, T2, k = _pairs.triple_of(pair)
    return ((T2 - 1) % (2 * pair.n) + 1, k)


@lru_cache(maxsize=None)
def _slot_table(n):
    """slot -> sorted tuple of (D, oriented solid pair) candidates."""
    table = {}
    for p in _pairs.enumerate_solid(n, oriented=True):
        D = _pairs.triple_of(p)[0]
        table.setdefault(slot_of(p), []).append((D, p))
    return {s: tuple(sorted(v)) for s, v in table.items()}


@lru_cache(maxsize=None)
def _grid_slots(n):
    """All slots of the polar grid, sorted by (k, T2)."""
    out = []
    for k in range(1, n // 2 + 1):
        for T2 in range(1, 2 * n + 1):
            if 2 * k == n and T2 % 2 == 0:
                continue
            out.append((T2, k))
    return tuple(sorted(out, key=lambda s: (s[1], s[0])))


def initial_vertices(n):
    """Oriented diametric pairs keyed by slot; exactly one per grid slot."""
    members = {}
    for p in _pairs.enumerate_solid(n, oriented=True):
        if _pairs.classify(p)["diametric"]:
            s = slot_of(p)
            if s in members:
                raise AssertionError("slot %s doubly filled" % (s,))
            members[s] = p
    if set(members) != set(_grid_slots(n)):
        raise AssertionError("diametric pairs do not fill the grid at n=%d" % n)
    return members


# ---------------------------------------------------------------------------
# three-term exchange data


def p1_substitutions(x, member):
    """Exchange substitutions with the oriented pair x on the left side.

    A substitution extends x = (P;Q) by one row r and one column s into a
    ground pair; the exchange then reads

        x * partner = t1 * t2 + t3 * t4

    with t1 = (P; S-d), t2 = (R-b; Q), t3 = (P-b; Q-d), t4 = (R; S),
    partner = (R-b; S-d), where b, d are the far ends of the ground
    blocks.  Solid grounds only ever extend at the two block ends, so the
    candidates are the front extension (r = p1-1, s = q1+1) and the end
    extension (r = pk+1, s = qk-1).  Returns the candidates whose four
    companion terms all satisfy member(); each is a dict with keys
    t1, t2, t3, t4, ground, partner.
    """
    n, P, Q = x.n, x.P, x.Q
    if not P:
        return []
    sup = x.support
    out = []
    ends = (
        (_step(P[0], -1, n), _step(Q[0], +1, n), True),   # front
        (_step(P[-1], +1, n), _step(Q[-1], -1, n), False),  # end
    )
    for r, s, front in ends:
        if r == s or r in sup or s in sup:
            continue
        R = ((r,) + P) if front else (P + (r,))
        S = ((s,) + Q) if front else (Q + (s,))
        try:
            ground = Pair(n, R, S)
        except ValueError:
            continue
        if front:
            t1, t2 = Pair(n, P, S[:-1]), Pair(n, R[:-1], Q)
            t3 = Pair(n, P[:-1], Q[:-1])
            partner = Pair(n, R[:-1], S[:-1])
        else:
            t1, t2 = Pair(n, P, S[1:]), Pair(n, R[1:], Q)
            t3 = Pair(n, P[1:], Q[1:])
            partner = Pair(n, R[1:], S[1:])
        terms = {"t1": t1, "t2": t2, "t3": t3, "t4": ground,
                 "ground": ground, "partner": partner}
        if all(member(terms[t]) for t in ("t1", "t2", "t3", "t4")):
            out.append(terms)
    return out


def _diametric_member(n):
    members = frozenset(initial_vertices(n).values())
    flips = frozenset(p.flip() for p in members)
    ok = members | flips | {Pair(n)}
    return lambda t: t in ok


@lru_cache(maxsize=None)
def limiting_classes(n):
    """Canonical nonempty non-maximal pairs of the initial vertex set that
    admit no three-term exchange inside it.

    Empty for odd n.  At n=6 this is {(3;6)}; at n=8 the size 1 and 2
    chain {(4;8), (4,5;1,8)} below the frozen chain top.
    """
    member = _diametric_member(n)
    out = set()
    for p in initial_vertices(n).values():
        flags = _pairs.classify(p)
        if flags["maximal"]:
            continue
        if not p1_substitutions(p, member):
            out.add(p.canonical())
    return frozenset(out)


@lru_cache(maxsize=None)
def limiting_pairs(n):
    """The limiting chain of the initial seed graph, smallest size first.

    For even n these are the canonical forms of (n/2, .., n/2+s-1;
    s-1, .., 1, n) for s = 1 .. n/2-1; consecutive sizes are joined by
    the chain edges of the seed graph.  All of them lack a three-term
    exchange; the largest one is maximal (hence frozen), and the rest
    are exactly limiting_classes(n).  Empty for odd n.
    """
    if n % 2:
        return ()
    member = _diametric_member(n)
    out = []
    for s in range(1, n // 2):
        P = tuple(range(n // 2, n // 2 + s))
        Q = tuple(range(s - 1, 0, -1)) + (n,)
        p = Pair(n, P, Q).canonical()
        if p1_substitutions(p, member):
            raise AssertionError("chain pair %r has an exchange" % (p,))
        out.append(p)
    if set(out[:-1]) != set(limiting_classes(n)):
        raise AssertionError("chain disagrees with limiting_classes(%d)" % n)
    return tuple(out)


# ---------------------------------------------------------------------------
# seed-graph edge rules


def _adjacent_slots(s, n):
    T2, k = s
    out = [((T2 - 2) % (2 * n) + 1, k), (T2 % (2 * n) + 1, k),
           (T2, k - 1), (T2, k + 1)]
    return out


def solid_seed_edges(members, n):
    """Edge set of the seed graph of a solid cluster.

    members: dict slot -> oriented pair (the empty pair is implicit).
    Returns (edges, frozen_slots) where edges is a frozenset of frozensets
    of slots; the center carries the slot None.  Rules:

    - adjacent filled slots (same radius, angular step 1; same angle,
      radius step 1) are joined unless both pairs are maximal;
    - diagonally adjacent slots (angular and radial step 1) are joined
      when the two slots they both touch hold pairs whose D values
      differ by 4;
    - a radius-1 vertex of odd degree is joined to the center.
    """
    D = {s: _pairs.triple_of(p)[0] for s, p in members.items()}
    maximal = {s for s, p in members.items() if _pairs.classify(p)["maximal"]}
    edges = set()
    for s in members:
        T2, k = s
        for t in _adjacent_slots(s, n):
            if t in members and not (s in maximal and t in maximal):
                edges.add(frozenset((s, t)))
        # diagonals: both coordinates step by one
        for dT in (-1, 1):
            for dk in (-1, 1):
                t = ((T2 + dT - 1) % (2 * n) + 1, k + dk)
                if t not in members:
                    continue
                c1 = (t[0], k)
                c2 = (T2, t[1])
                if c1 in members and c2 in members and \
                        abs(D[c1] - D[c2]) == 4:
                    edges.add(frozenset((s, t)))
    degree = {s: 0 for s in members}
    for e in edges:
        for s in e:
            degree[s] += 1
    for s in members:
        if s[1] == 1 and degree[s] % 2 == 1:
            edges.add(frozenset((s, None)))
    return frozenset(edges), maximal


_BEARING = {(1, 0): 0, (1, 1): 1, (0, 1): 2, (-1, 1): 3,
            (-1, 0): 4, (-1, -1): 5, (0, -1): 6, (1, -1): 7}


def _bearing(s, t, n):
    """Cyclic position of the edge s->t among the eight grid directions."""
    if t is None:
        return _BEARING[(-1, 0)]
    dT = (t[0] - s[0]) % (2 * n)
    dT = dT if dT <= 1 else dT - 2 * n   # -1, 0 or 1
    dk = t[1] - s[1]
    return _BEARING[(dk, dT)]


def orient_alternating(members, edges, frozen_slots, n):
    """Alternating orientation of a seed graph; deterministic.

    Around every non-frozen vertex the incident edges, taken in the
    cyclic order of their grid bearings, must alternate in/out.  Each
    connected component of the induced constraint graph has exactly two
    solutions; the component anchored first (by sorted edge order) is
    oriented clockwise along circles and outward along rays, and a
    component whose mirror image (under the flip involution on slots) is
    already oriented is anchored compatibly with the reversal symmetry.
    Returns a set of (tail, head) slot pairs; raises ValueError when no
    alternating orientation exists.
    """
    nonfrozen = [s for s in members if s not in frozen_slots]
    incident = {}
    for e in edges:
        for s in e:
            if s is not None:
                incident.setdefault(s, []).append(e)
    for s in nonfrozen:
        if len(incident.get(s, ())) % 2:
            raise ValueError("vertex at slot %s has odd degree %d"
                             % (s, len(incident.get(s, ()))))

    def other(e, s):
        a, b = tuple(e)
        return b if a == s else a

    def ekey(e):
        return tuple(sorted((s if s is not None else (-1, -1)) for s in e))

    # orientation[e] = (tail, head)
    orientation = {}

    def default_dir(e):
        a, b = tuple(e)
        if a is None or b is None:     # center edge: outward
            s = b if a is None else a
            return (None, s)
        a, b = sorted((a, b))
        if a[1] != b[1]:       # radial or diagonal: outward
            return (a, b) if a[1] < b[1] else (b, a)
        # circle edge: clockwise (T2 increasing by one, cyclically)
        return (a, b) if (b[0] - a[0]) % (2 * n) == 1 else (b, a)

    def mirror_slot(s):
        if s is None:
            return None
        return ((s[0] + n - 1) % (2 * n) + 1, s[1])

    def mirror_edge(e):
        return frozenset(mirror_slot(s) for s in e)

    all_edges = sorted(edges, key=ekey)
    for seed_edge in all_edges:
        if seed_edge in orientation:
            continue
        me = mirror_edge(seed_edge)
        if me in orientation:
            mt, mh = orientation[me]
            start = (mirror_slot(mh), mirror_slot(mt))
        else:
            start = default_dir(seed_edge)
        orientation[seed_edge] = start
        queue = [seed_edge]
        while queue:
            e = queue.pop(0)
            for s in e:
                if s is None or s in frozen_slots:
                    continue
                ring = sorted(incident[s], key=lambda f: _bearing(s, other(f, s), n))
                i = ring.index(e)
                sense_e = orientation[e][1] == s   # True = in
                for j, f in enumerate(ring):
                    want_in = sense_e ^ ((j - i) % 2 == 1)
                    tail, head = (other(f, s), s) if want_in else (s, other(f, s))
                    if f in orientation:
                        if orientation[f] != (tail, head):
                            raise ValueError("no alternating orientation at %s" % (s,))
                    else:
                        orientation[f] = (tail, head)
                        queue.append(f)
    return orientation


# ---------------------------------------------------------------------------
# quivers


class Quiver:
    """A vertex-labeled exchange graph, directed (a quiver) or not.

    labels: tuple of Pair, one per vertex; index 0 is the empty pair for
    the built initial graphs.  frozen: frozenset of vertex indices.
    arrows: dict (tail, head) -> multiplicity when directed; edges:
    frozenset of frozenset index pairs when not.
    """

    def __init__(self, n, labels, frozen, arrows=None, edges=None,
                 limiting=frozenset()):
        self.n = n
        self.labels = tuple(labels)
        self.frozen = frozenset(frozen)
        self.directed = arrows is not None
        self.arrows = dict(arrows) if arrows is not None else None
        self.edges = frozenset(edges) if edges is not None else None
        self.limiting = frozenset(limiting)
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label):
        """Vertex index of an oriented or canonical Pair label."""
        if isinstance(label, int):
            return label
        if label in self._index:
            return self._index[label]
        if label.flip() in self._index:
            return self._index[label.flip()]
        raise KeyError("no vertex labeled %r" % (label,))

    def is_frozen(self, v):
        return self.index(v) in self.frozen

    def undirected_edges(self):
        if not self.directed:
            return self.edges
        return frozenset(frozenset(e) for e, m in self.arrows.items() if m)

    def degree(self, v):
        v = self.index(v)
        return sum(1 for e in self.undirected_edges() if v in e)

    def neighbors(self, v):
        v = self.index(v)
        out = set()
        for e in self.undirected_edges():
            if v in e:
                out |= e - {v}
        return out

    def arrows_in(self, v):
        v = self.index(v)
        return {t: m for (t, h), m in self.arrows.items() if h == v and m}

    def arrows_out(self, v):
        v = self.index(v)
        return {h: m for (t, h), m in self.arrows.items() if t == v and m}

    def mutate(self, v):
        """Standard quiver mutation at a non-frozen vertex.

        Composite arrows through v are added (skipping frozen-frozen
        pairs), the arrows at v are reversed, and opposite arrow pairs
        cancel.  Involutive.
        """
        if not self.directed:
            raise ValueError("cannot mutate an undirected graph")
        v = self.index(v)
        if v in self.frozen:
            raise ValueError("vertex %d is frozen" % v)
        new = dict(self.arrows)
        ins = self.arrows_in(v)
        outs = self.arrows_out(v)
        for u, mu in ins.items():
            for w, mw in outs.items():
                if u in self.frozen and w in self.frozen:
                    continue
                new[(u, w)] = new.get((u, w), 0) + mu * mw
        for u, mu in ins.items():
            del new[(u, v)]
            new[(v, u)] = new.get((v, u), 0) + mu
        for w, mw in outs.items():
            del new[(v, w)]
            new[(w, v)] = new.get((w, v), 0) + mw
        for (a, b) in [k for k in new if k[0] < k[1]]:
            fwd, rev = new.get((a, b), 0), new.get((b, a), 0)
            c = min(fwd, rev)
            if c:
                new[(a, b)] = fwd - c
                new[(b, a)] = rev - c
        new = {k: m for k, m in new.items() if m}
        return Quiver(self.n, self.labels, self.frozen, arrows=new,
                      limiting=self.limiting)

    def c_image(self, v):
        """The vertex carrying the flipped label (the row/column swap)."""
        v = self.index(v)
        lab = self.labels[v]
        return self._index[lab] if lab.is_empty else self._index[lab.flip()]

    def symm_defect(self):
        """Pairs (x, y) violating #arrows(x->y) == #arrows(c(y)->c(x))."""
        bad = []
        for (t, h), m in self.arrows.items():
            if m and self.arrows.get((self.c_image(h), self.c_image(t)), 0) != m:
                bad.append((t, h))
        return bad

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.n == other.n
                and self.labels == other.labels and self.frozen == other.frozen
                and self.directed == other.directed
                and (self.arrows or {}) == (other.arrows or {})
                and (self.edges or frozenset()) == (other.edges or frozenset()))

    def __repr__(self):
        kind = "quiver" if self.directed else "graph"
        ne = len(self.arrows) if self.directed else len(self.edges)
        return "<%s on %d vertices, %d %s, n=%d>" % (
            kind, len(self.labels), ne,
            "arrows" if self.directed else "edges", self.n)


def build_initial(n, mode="quiver"):
    """The initial exchange structure on the diametric pairs.

    mode "Uprime": the undirected seed graph on the oriented diametric
    pairs plus the empty pair (2*C(n,2)+1 vertices).  mode "U": its
    quotient under the flip identification (C(n,2)+1 vertices).  mode
    "quiver": the alternating orientation of the Uprime graph.

    Maximal pairs and the empty pair are frozen.  Every non-frozen
    vertex with a three-term exchange inside the vertex set has exactly
    its four exchange terms as neighbors (asserted); the vertices with
    no such exchange are recorded in .limiting.
    """
    if n < 4:
        raise ValueError("need n >= 4")
    if mode not in ("U", "Uprime", "quiver"):
        raise ValueError("mode must be U, Uprime or quiver")
    members = initial_vertices(n)
    edges, maximal = solid_seed_edges(members, n)
    member = _diametric_member(n)
    lim = limiting_classes(n)

    # cross-check the edge rules against the three-term exchanges
    for s, p in members.items():
        if s in maximal:
            continue
        subs = p1_substitutions(p, member)
        nbr = set()
        for e in edges:
            if s in e:
                nbr |= e - {s}
        if p.canonical() in lim:
            if subs:
                raise AssertionError("limiting vertex %r has an exchange" % (p,))
        else:
            if len(subs) != 1:
                raise AssertionError("vertex %r has %d exchanges, wanted 1"
                                     % (p, len(subs)))
            terms = subs[0]
            want = set()
            for t in ("t1", "t2", "t3", "t4"):
                q = terms[t]
                want.add(None if q.is_empty else slot_of(q))
            if nbr != want:
                raise AssertionError("edge rules disagree with the exchange "
                                     "at %r: %s vs %s" % (p, nbr, want))

    if mode == "U":
        classes = sorted({p.canonical() for p in members.values()},
                         key=lambda p: (p.k, p.P, p.Q))
        labels = [Pair(n)] + classes
        index = {None: 0}
        for s, p in members.items():
            index[s] = labels.index(p.canonical())
        qedges = {frozenset(index[s] for s in e) for e in edges}
        qedges = {e for e in qedges if len(e) == 2}
        frozen = {0} | {labels.index(p.canonical())
                        for s, p in members.items() if s in maximal}
        return Quiver(n, labels, frozen, edges=qedges,
                      limiting={labels.index(p) for p in lim})

    slots = sorted(members, key=lambda s: (s[1], s[0]))
    labels = [Pair(n)] + [members[s] for s in slots]
    index = {None: 0}
    index.update({s: i + 1 for i, s in enumerate(slots)})
    frozen = {0} | {index[s] for s in maximal}
    lim_idx = {index[s] for s, p in members.items() if p.canonical() in lim}
    if mode == "Uprime":
        qedges = {frozenset(index[s] for s in e) for e in edges}
        return Quiver(n, labels, frozen, edges=qedges, limiting=lim_idx)

    orientation = orient_alternating(members, edges, maximal | {None}, n)
    arrows = {}
    for e, (t, h) in orientation.items():
        arrows[(index[t], index[h])] = arrows.get((index[t], index[h]), 0) + 1
    q = Quiver(n, labels, frozen, arrows=arrows, limiting=lim_idx)
    bad = q.symm_defect()
    if bad:
        raise AssertionError("initial orientation breaks the reversal "
                             "symmetry at %s" % (bad[:3],))
    return q


# ---------------------------------------------------------------------------
# sample points and seeds


def _dense_fraction(rng):
    """Small random rational, never zero (zero entries make one-by-one
    minors vanish, which would force constant resampling)."""
    num = rng.randint(1, 9) * rng.choice((-1, 1))
    return Fraction(num, rng.randint(1, 9))


def _dense_matrix(rng, n):
    return linalg.Matrix([[_dense_fraction(rng) for _ in range(n)]
                          for _ in range(n)])


def _dense_symmetric_zero_sum(rng, n):
    a = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a[i][j] = a[j][i] = _dense_fraction(rng)
    for i in range(n):
        a[i][i] = -sum(a[i][j] for j in range(n) if j != i)
    return linalg.Matrix(a)


class SampleSet:
    """Fixed rational sample matrices for tracking variables by value.

    channels 0..2: generic square matrices; channels 3..5: symmetric with
    zero row sums.  Minor values are cached; identify() returns the
    oriented pair matching a value vector on every channel, None when no
    pair matches, or AMBIGUOUS if several do.
    """

    SYM = (3, 4, 5)

    def __init__(self, n, seed=0, attempt=0):
        self.n = n
        self.seed = seed
        self.attempt = attempt
        rng = random.Random("samples:%d:%d:%d" % (n, seed, attempt))
        self.matrices = tuple(
            [_dense_matrix(rng, n) for _ in range(3)]
            + [_dense_symmetric_zero_sum(rng, n) for _ in range(3)])
        self._minors = {}
        self._table = None

    def minor_vector(self, pair):
        if pair not in self._minors:
            self._minors[pair] = tuple(linalg.circular_minor(m, pair)
                                       for m in self.matrices)
        return self._minors[pair]

    def sym_vector(self, pair):
        return self.minor_vector(pair)[3:]

    def identify(self, values):
        values = tuple(values)
        if self._table is None:
            self._table = {}
            for p in _pairs.enumerate_pairs(self.n):
                for q in (p, p.flip()):
                    self._table.setdefault(self.minor_vector(q), []).append(q)
            self._table.setdefault(self.minor_vector(Pair(self.n)),
                                   []).append(Pair(self.n))
        hits = self._table.get(values, [])
        if not hits:
            return None
        if len(set(hits)) > 1:
            return AMBIGUOUS
        return hits[0]


class _Ambiguous:
    def __repr__(self):
        return "AMBIGUOUS"


AMBIGUOUS = _Ambiguous()


def identify_variable(values, samples):
    """The unique pair whose minors equal `values` on every channel.

    None means no circular pair matches (the value is not a minor);
    AMBIGUOUS means more than one does, which fixed generic samples make
    vanishingly unlikely.
    """
    return samples.identify(values)


class Seed:
    """A quiver with exact variable values at the sample matrices.

    values[v] is the value vector of vertex v; idents[v] is the pair the
    vector matches (None when the variable is not a circular minor).
    trace records the mutated vertex indices, so a seed can be replayed
    onto fresh samples if a sample point ever makes an exchange divide
    by zero.
    """

    def __init__(self, quiver, samples, values, idents, trace=()):
        self.quiver = quiver
        self.samples = samples
        self.values = tuple(values)
        self.idents = tuple(idents)
        self.trace = tuple(trace)

    @property
    def n(self):
        return self.quiver.n

    def value(self, v):
        return self.values[self.quiver.index(v)]

    def ident(self, v):
        return self.idents[self.quiver.index(v)]

    def __eq__(self, other):
        return (isinstance(other, Seed) and self.quiver == other.quiver
                and self.values == other.values)

    def cluster(self):
        """The identified pairs of the seed, canonical, as a frozenset;
        raises if any variable is not a minor."""
        out = set()
        for p in self.idents:
            if p is None or p is AMBIGUOUS:
                raise ValueError("seed contains a non-minor variable")
            out.add(p.canonical())
        return frozenset(out)


def initial_seed(n, seed=0, _attempt=0):
    """The initial seed: the alternating quiver with minor values.

    Sample sets are screened so that every initial value is nonzero on
    every channel (small random rationals hit zero too often otherwise);
    _attempt picks where the screening starts, so a caller recovering
    from a mid-run zero division can skip past the samples that failed.
    """
    q = build_initial(n, "quiver")
    for attempt in range(_attempt, _attempt + 64):
        samples = SampleSet(n, seed, attempt)
        values = tuple(samples.minor_vector(lab) for lab in q.labels)
        if all(x for vec in values for x in vec):
            return Seed(q, samples, values, q.labels)
    raise RuntimeError("no nondegenerate sample set found for n=%d" % n)


def mutate_cm(seed, v):
    """Exchange at a non-frozen vertex: standard quiver mutation with the
    new value computed exactly on every channel.  Involutive."""
    q = seed.quiver
    v = q.index(v)
    if v in q.frozen:
        raise ValueError("vertex %d is frozen" % v)
    for attempt in range(1, 9):
        try:
            return _mutate_cm_once(seed, v)
        except ZeroDivisionError:
            # replay the whole history onto fresh samples
            fresh = initial_seed(seed.n, seed.samples.seed,
                                 seed.samples.attempt + attempt)
            for w in seed.trace:
                fresh = _mutate_cm_once(fresh, w)
            seed = fresh
    raise ZeroDivisionError("exchange at vertex %d vanished on 8 sample sets" % v)


def _mutate_cm_once(seed, v):
    q = seed.quiver
    chans = range(len(seed.samples.matrices))
    one = Fraction(1)
    top = [one] * len(chans)
    bot = [one] * len(chans)
    for u, m in q.arrows_in(v).items():
        for t in chans:
            top[t] *= seed.values[u][t] ** m
    for w, m in q.arrows_out(v).items():
        for t in chans:
            bot[t] *= seed.values[w][t] ** m
    new_val = tuple((top[t] + bot[t]) / seed.values[v][t] for t in chans)
    values = list(seed.values)
    values[v] = new_val
    idents = list(seed.idents)
    idents[v] = seed.samples.identify(new_val)
    return Seed(q.mutate(v), seed.samples, values, idents,
                seed.trace + (v,))


def mutate_sym(seed, v):
    """Exchange at v, then at the vertex carrying the flipped label.

    Requires the two vertices to be non-adjacent (they always are along
    any run of such paired exchanges; adjacency would break the reversal
    symmetry, which is asserted after every call).
    """
    q = seed.quiver
    v = q.index(v)
    cv = q.c_image(v)
    if cv == v:
        raise ValueError("vertex %d is its own mirror" % v)
    if cv in q.neighbors(v):
        raise ValueError("mirror vertices %d and %d are adjacent" % (v, cv))
    out = mutate_cm(mutate_cm(seed, v), cv)
    bad = out.quiver.symm_defect()
    if bad:
        raise AssertionError("reversal symmetry lost at %s" % (bad[:3],))
    return out


def symmetrize(seed):
    """Merge mirror orbits at the symmetric channels.

    Returns a dict mapping frozenset {v, c(v)} of vertex indices to the
    common value vector at the symmetric sample channels; raises if the
    two members of an orbit disagree there (they never do along paired
    exchanges).
    """
    q = seed.quiver
    out = {}
    for v in range(len(q.labels)):
        cv = q.c_image(v)
        key = frozenset((v, cv))
        val = seed.values[v][3:]
        if key in out and out[key] != val:
            raise ValueError("orbit %s is not symmetric" % (sorted(key),))
        out[key] = val
    return out


# ---------------------------------------------------------------------------
# cluster-level exchanges


def initial_cluster(n):
    """The canonical diametric pairs plus the empty pair."""
    return frozenset(p.canonical() for p in initial_vertices(n).values()) \
        | {Pair(n)}


@lru_cache(maxsize=None)
def frozen_cluster_pairs(n):
    """Members every cluster keeps: maximal diametric pairs and empty."""
    out = {Pair(n)}
    for p in initial_cluster(n):
        if not p.is_empty and _pairs.classify(p)["maximal"]:
            out.add(p)
    return frozenset(out)


def _sub_minor(n, R, S, drop_rows, drop_cols):
    """Canonical pair left after deleting positions from ordered blocks."""
    rows = tuple(x for i, x in enumerate(R) if i not in drop_rows)
    cols = tuple(x for i, x in enumerate(S) if i not in drop_cols)
    return Pair(n, rows, cols).canonical()


def _p1_move_table(cluster):
    """(leaving, entering) -> (t1, t2, t3, t4), for every four-term move.

    Every cluster member (R;S) with at least two rows serves as the
    ground of the exchange identity: rows a above b and columns c left
    of d give

        (R-a;S-c) (R-b;S-d) = (R-a;S-d) (R-b;S-c) + (R-ab;S-cd) (R;S).

    A move takes one left factor out of the cluster and brings the other
    in from outside, with both right-hand products made of members.
    Frozen members never leave.
    """
    _only_pairs(cluster)
    n = next(iter(cluster)).n
    frozen = frozen_cluster_pairs(n)
    moves = {}
    for ground in sorted(cluster, key=lambda p: (p.k, p.P, p.Q)):
        if ground.k < 2:
            continue
        R, S = ground.P, ground.Q
        for ia, ib in combinations(range(ground.k), 2):
            for ic, id_ in combinations(range(ground.k), 2):
                t1 = _sub_minor(n, R, S, (ia,), (id_,))
                t2 = _sub_minor(n, R, S, (ib,), (ic,))
                if t1 not in cluster or t2 not in cluster:
                    continue
                t3 = _sub_minor(n, R, S, (ia, ib), (ic, id_))
                if t3 not in cluster:
                    continue
                lhs = (_sub_minor(n, R, S, (ia,), (ic,)),
                       _sub_minor(n, R, S, (ib,), (id_,)))
                for x, y in (lhs, lhs[::-1]):
                    if x in cluster and y not in cluster and x not in frozen:
                        moves.setdefault((x, y), (t1, t2, t3, ground))
    return moves


def p1_moves(cluster):
    """All four-term exchange moves on a cluster of canonical pairs.

    Returns a sorted list of (leaving, entering) canonical pairs; each is
    backed by an exchange identity whose four companion terms lie in the
    cluster.  Moves that would re-enter the cluster are dropped.
    """
    return sorted(_p1_move_table(cluster),
                  key=lambda m: (m[0].P, m[0].Q, m[1].P, m[1].Q))


def _p2_move_table(cluster):
    """(leaving, entering) -> (t1, t2, t3, t4), for every splitter move.

    The splitter identity lives on a block with one more row than
    columns.  Blocks are enumerated as clockwise sequences r_1 ...
    r_{k+1} s_k ... s_1 over every support of odd size >= 5; rows a, b,
    c in block order and a column d give

        (R-b;S) (R-ac;S-d) = (R-a;S) (R-bc;S-d) + (R-c;S) (R-ab;S-d).

    Moves then read as in the four-term table: right-hand terms inside
    the cluster, one left factor leaving (never frozen), the other
    entering from outside.
    """
    _only_pairs(cluster)
    n = next(iter(cluster)).n
    frozen = frozen_cluster_pairs(n)
    moves = {}
    for size in range(5, n + 1, 2):
        nrows = size // 2 + 1
        for sup in combinations(range(1, n + 1), size):
            for r in range(size):
                seq = sup[r:] + sup[:r]
                R = seq[:nrows]
                S = tuple(reversed(seq[nrows:]))
                for ia, ib, ic in combinations(range(nrows), 3):
                    t1 = _sub_minor(n, R, S, (ia,), ())
                    t3 = _sub_minor(n, R, S, (ic,), ())
                    if t1 not in cluster or t3 not in cluster:
                        continue
                    for id_ in range(nrows - 1):
                        t2 = _sub_minor(n, R, S, (ib, ic), (id_,))
                        t4 = _sub_minor(n, R, S, (ia, ib), (id_,))
                        if t2 not in cluster or t4 not in cluster:
                            continue
                        lhs = (_sub_minor(n, R, S, (ib,), ()),
                               _sub_minor(n, R, S, (ia, ic), (id_,)))
                        for x, y in (lhs, lhs[::-1]):
                            if x in cluster and y not in cluster \
                                    and x not in frozen:
                                moves.setdefault((x, y), (t1, t2, t3, t4))
    return moves


def p2_moves(cluster):
    """All splitter exchange moves on a cluster of canonical pairs.

    The splitter relation lives on a block with one more row than
    columns; rows a, b, c in clockwise block order and a column d give

        (R-b; S) * (R-ac; S-d) = (R-a; S) * (R-bc; S-d)
                                 + (R-c; S) * (R-ab; S-d)

    A member may leave as either left factor; the entering pair is the
    other one.  Returns sorted (leaving, entering) canonical pairs.
    """
    return sorted(_p2_move_table(cluster),
                  key=lambda m: (m[0].P, m[0].Q, m[1].P, m[1].Q))


@lru_cache(maxsize=None)
def _sym_samples(n):
    rng = random.Random("lm-samples:%d" % n)
    return tuple(linalg.rand_symmetric_zero_sum(rng, n) for _ in range(3))


class LimitingVariable:
    """Cluster variable entering at a limiting exchange.

    Not a circular pair; it is carried by its exact values at the shared
    symmetric sample matrices of its n.  Clusters containing one refuse
    further exchanges.
    """

    __slots__ = ("n", "site", "values")

    def __init__(self, n, site, values):
        self.n = n
        self.site = site
        self.values = tuple(values)

    def __eq__(self, other):
        return isinstance(other, LimitingVariable) and \
            (self.n, self.site, self.values) == \
            (other.n, other.site, other.values)

    def __hash__(self):
        return hash((self.n, self.site, self.values))

    def __repr__(self):
        return "LimitingVariable(%r)" % (self.site,)


def _only_pairs(cluster):
    if any(not isinstance(v, Pair) for v in cluster):
        raise ValueError("cluster contains a non-minor variable; exchanges "
                         "past a limiting one are not defined")
    return cluster


def _limiting_value(n, x):
    """Entering variable of the limiting exchange at chain pair x.

    Computed from the initial seed graph: the product of the in-neighbor
    values plus the product of the out-neighbor values, divided by the
    value at x, channel by channel on the symmetric sample matrices.
    For sizes 1 and 2 the result is checked against its closed form: the
    non-solid minor (n/2, n/2+1; 1, n-1) at size 1, and the ground-minor
    combination D{b,de} D{c,fg} - D{b,fg} D{c,de} at size 2.
    """
    q = build_initial(n, "quiver")
    v = q.index(x)
    vec = []
    for m in _sym_samples(n):
        def cm(u):
            return linalg.circular_minor(m, q.labels[u])
        top = Fraction(1)
        for u, mult in q.arrows_in(v).items():
            top *= cm(u) ** mult
        bot = Fraction(1)
        for w, mult in q.arrows_out(v).items():
            bot *= cm(w) ** mult
        vec.append((top + bot) / cm(v))
    vec = tuple(vec)
    ref = None
    if x.k == 1:
        split = Pair(n, (n // 2, n // 2 + 1), (1, n - 1))
        ref = tuple(linalg.circular_minor(m, split) for m in _sym_samples(n))
    elif x.k == 2:
        ground, (b, c, d, e, f, g) = linalg.limiting_ground(n, 2)
        ref = tuple(
            linalg.delta(m, ground, [b], [d, e])
            * linalg.delta(m, ground, [c], [f, g])
            - linalg.delta(m, ground, [b], [f, g])
            * linalg.delta(m, ground, [c], [d, e])
            for m in _sym_samples(n))
    if ref is not None and ref != vec:
        raise AssertionError("limiting value at %r missed its closed form"
                             % (x,))
    return LimitingVariable(n, x, vec)


def mutate_lm(cluster, move, site):
    """One exchange on a cluster of canonical circular pairs.

    move "P1"/"P2": site is (leaving, entering) as produced by p1_moves/
    p2_moves; the exchange identity is re-verified exactly at the
    symmetric sample matrices before the swap.  move "limiting": site is
    a non-frozen pair of the limiting chain and the cluster must be the
    initial one; the leaving pair is replaced by a LimitingVariable
    carrying the entering value, which is not a solid minor, so the
    resulting cluster refuses further exchanges.  Returns the new
    cluster as a frozenset.
    """
    _only_pairs(cluster)
    n = next(iter(cluster)).n
    if move in ("P1", "P2"):
        x, y = site
        x, y = x.canonical(), y.canonical()
        table = _p1_move_table(cluster) if move == "P1" \
            else _p2_move_table(cluster)
        if (x, y) not in table:
            raise ValueError("no %s exchange %r -> %r here" % (move, x, y))
        terms = table[(x, y)]
        for m in _sym_samples(n):
            cm = lambda p: linalg.circular_minor(m, p)
            lhs = cm(x) * cm(y)
            rhs = cm(terms[0]) * cm(terms[1]) + cm(terms[2]) * cm(terms[3])
            if lhs != rhs:
                raise AssertionError("exchange identity failed for %r -> %r"
                                     % (x, y))
        return (cluster - {x}) | {y}
    if move != "limiting":
        raise ValueError("move must be P1, P2 or limiting")
    x = site.canonical()
    if x not in limiting_classes(n):
        if x in limiting_pairs(n):
            raise ValueError("%r is frozen" % (x,))
        raise ValueError("%r is not a limiting pair" % (x,))
    if cluster != initial_cluster(n):
        raise ValueError("the limiting exchange is defined on the initial "
                         "cluster only")
    return (cluster - {x}) | {_limiting_value(n, x)}


# ---------------------------------------------------------------------------
# solid clusters and seeds


SolidSeedFlags = namedtuple("SolidSeedFlags",
                            "solid_cluster solid_seed symmetric_solid_seed")


def _as_oriented_members(obj):
    """Slot map of an oriented-cluster-like object, or None."""
    if isinstance(obj, Seed):
        pairsq = [p for p in obj.idents]
        if any(p is None or p is AMBIGUOUS for p in pairsq):
            return None, None
        obj = pairsq
    if isinstance(obj, Quiver):
        obj = obj.labels
    if isinstance(obj, dict):
        vals = list(obj.values())
        if not vals or not all(isinstance(p, Pair) for p in vals):
            return None, None
        obj = vals + [Pair(vals[0].n)]
    members = {}
    n = None
    empty_seen = False
    for p in obj:
        if not isinstance(p, Pair):
            return None, None
        n = p.n
        if p.is_empty:
            empty_seen = True
            continue
        if not _pairs.is_solid(p):
            return None, None
        s = slot_of(p)
        if s in members:
            return None, None
        members[s] = p
    if not empty_seen:
        return None, None
    return members, n


def classify_solid(obj, quiver=None):
    """SolidSeedFlags for a collection of oriented pairs, a Seed, or a
    Quiver.

    solid_cluster: 2*C(n,2)+1 members counting the empty pair, all solid,
    one per grid slot, every slot covered, and D differing by exactly 2
    across each filled adjacency.  solid_seed: additionally the seed
    graph of the members admits an alternating orientation, and when a
    quiver is supplied its edges and orientation match.  symmetric:
    additionally closed under the flip involution.
    """
    if isinstance(obj, Seed) and quiver is None:
        quiver = obj.quiver
    members, n = _as_oriented_members(obj)
    false = SolidSeedFlags(False, False, False)
    if members is None:
        return false
    if len(members) != 2 * (n * (n - 1) // 2):
        return false
    if set(members) != set(_grid_slots(n)):
        return false
    D = {s: _pairs.triple_of(p)[0] for s, p in members.items()}
    for s in members:
        for t in _adjacent_slots(s, n):
            if t in members and abs(D[s] - D[t]) != 2:
                return false
    edges, maximal = solid_seed_edges(members, n)
    try:
        orientation = orient_alternating(members, edges, maximal | {None}, n)
    except ValueError:
        return SolidSeedFlags(True, False, False)
    if quiver is not None:
        index = {}
        for i, lab in enumerate(quiver.labels):
            index[None if lab.is_empty else slot_of(lab)] = i
        want = {frozenset((index[a], index[b])) for a, b in
                (tuple(e) for e in edges)}
        if quiver.undirected_edges() != want:
            return SolidSeedFlags(True, False, False)
        if not _alternating_ok(quiver, members, index, n):
            return SolidSeedFlags(True, False, False)
    sym = all(p.flip() in members.values() for p in members.values())
    return SolidSeedFlags(True, True, sym)


def _alternating_ok(quiver, members, index, n):
    """Whether the quiver's arrows alternate around non-frozen vertices."""
    slot_by_index = {i: s for s, i in index.items()}
    for v in range(len(quiver.labels)):
        if v in quiver.frozen:
            continue
        s = slot_by_index[v]
        inc = []
        for (t, h), m in quiver.arrows.items():
            if m and v in (t, h):
                w = h if t == v else t
                inc.append((_bearing(s, slot_by_index[w], n), h == v))
        inc.sort()
        if len(inc) % 2:
            return False
        for i in range(len(inc)):
            if inc[i][1] == inc[(i + 1) % len(inc)][1]:
                return False
    return True


def reduce_to_canonical(obj):
    """Drive a solid seed back to all |D| <= 2 by four-term exchanges.

    Repeatedly exchanges at a vertex maximizing |D| (lexicographically
    least slot among the maxima; for a flip-closed cluster the mirror
    vertex is exchanged immediately after, keeping the run symmetric).
    Each step strictly decreases the total of |D| (asserted).  Returns
    (trace, final) where trace lists (slot, leaving, entering) and final
    matches the input type (slot map, or Seed when a Seed was given).
    """
    seed = obj if isinstance(obj, Seed) else None
    members, n = _as_oriented_members(obj)
    if members is None or not classify_solid(sorted(members.values(),
                                                    key=lambda p: (p.k, p.P, p.Q))
                                             + [Pair(n)]).solid_cluster:
        raise ValueError("not a solid cluster")
    members = dict(members)
    symmetric = all(p.flip() in members.values() for p in members.values())
    trace = []

    def dval(s):
        return _pairs.triple_of(members[s])[0]

    def exchange(s):
        old = members[s]
        D, T2, k = _pairs.triple_of(old)
        new = _pairs.pair_of_triple(D - 4 * (1 if D > 0 else -1), T2, k, n)
        members[s] = new
        trace.append((s, old, new))

    while True:
        worst = max(abs(dval(s)) for s in members)
        if worst <= 2:
            break
        total = sum(abs(dval(s)) for s in members)
        s = min(s for s in members if abs(dval(s)) == worst)
        batch = [s]
        if symmetric:
            ms = ((s[0] + n - 1) % (2 * n) + 1, s[1])
            if ms != s:
                batch.append(ms)
        for t in batch:
            exchange(t)
        assert sum(abs(dval(u)) for u in members) < total, \
            "total |D| did not decrease"

    if seed is not None:
        index = {None if lab.is_empty else slot_of(lab): i
                 for i, lab in enumerate(seed.quiver.labels)}
        for s, old, new in trace:
            seed = mutate_cm(seed, index[s])
            got = seed.ident(index[s])
            assert got is not None and got is not AMBIGUOUS and \
                got.canonical() == new.canonical(), \
                "exchange at %s entered %r, wanted %r" % (s, got, new)
        return trace, seed
    return trace, members


def enumerate_solid_clusters(n, symmetric=False):
    """All solid clusters (as slot maps) by backtracking over slots.

    A solid cluster picks one solid pair per grid slot with D stepping by
    exactly 2 across adjacent slots; symmetric=True keeps only the
    flip-closed ones.  Exponential in principle, fine for n <= 6.
    """
    slots = list(_grid_slots(n))
    cands = _slot_table(n)
    order = sorted(slots, key=lambda s: (s[1], s[0]))
    out = []
    assign = {}

    def ok(s, D):
        for t in _adjacent_slots(s, n):
            if t in assign and abs(assign[t][0] - D) != 2:
                return False
        if symmetric:
            ms = ((s[0] + n - 1) % (2 * n) + 1, s[1])
            if ms in assign and assign[ms][0] != -D:
                return False
        return True

    def rec(i):
        if i == len(order):
            out.append({s: p for s, (D, p) in assign.items()})
            return
        s = order[i]
        for D, p in cands[s]:
            if ok(s, D):
                assign[s] = (D, p)
                rec(i + 1)
                del assign[s]

    rec(0)
    return out


def enumerate_plucker_clusters(n, moves=("P1", "P2"), limit=None):
    """Breadth-first closure of the initial cluster under exchanges.

    moves is a subset of {"P1", "P2"}; clusters are frozensets of
    canonical pairs (the empty pair included).  limit caps the number of
    clusters explored (None = exhaust; raises if the cap is hit).
    """
    if n > 7 or (n > 6 and "P2" in moves):
        raise ValueError("closure enumeration is limited to n <= 6 "
                         "(P1 alone: n <= 7)")
    start = initial_cluster(n)
    seen = {start}
    queue = [start]
    while queue:
        cl = queue.pop()
        found = []
        if "P1" in moves:
            found.extend(p1_moves(cl))
        if "P2" in moves:
            found.extend(p2_moves(cl))
        for x, y in found:
            nxt = (cl - {x}) | {y}
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
                if limit is not None and len(seen) > limit:
                    raise RuntimeError("more than %d clusters" % limit)
    return frozenset(seen)


if __name__ == "__main__":
    for n in (4, 5, 6):
        q = build_initial(n, "quiver")
        print("n=%d: %r, frozen %d, limiting %s" % (
            n, q, len(q.frozen),
            sorted(str(q.labels[i]) for i in q.limiting) or "-"))
    s = initial_seed(5)
    s2 = mutate_cm(s, Pair(5, (1,), (3,)))
    v = s2.quiver.index(Pair(5, (1,), (3,)))
    print("mutate (1;3)' ->", s2.idents[v])
    print("back:", mutate_cm(s2, v) == s)
