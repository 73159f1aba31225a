"""Circular pairs on a labeled boundary circle.

Boundary vertices are labeled 1..n clockwise.  A circular pair (P;Q) is a
pair of disjoint ordered tuples of equal size k such that

    p1, ..., pk, qk, ..., q1

appear in clockwise order around the circle.  (P;Q) and (Q~;P~) -- both
tuples reversed, with roles swapped -- denote the same unordered pair; the
canonical representative is the one whose flattened tuple P+Q is
lexicographically smaller.

Everything in this module is pure combinatorics on labels: validity,
canonical forms, solidity statistics, the diametric / maximal / limiting
classification, (D, T, k) coordinates of solid pairs, boundary chords,
weak separation, and the consecutivity defect Phi that drives the minor
rewriting engine.
"""

import itertools
from functools import lru_cache

__all__ = [
    "Pair",
    "canonicalize",
    "arc_distance",
    "pair_from_sets",
    "enumerate_pairs",
    "enumerate_oriented",
    "enumerate_solid",
    "is_solid",
    "solid_stats",
    "classify",
    "generate_diametric",
    "triple_of",
    "pair_of_triple",
    "flip_triple",
    "correspond",
    "edges_of",
    "pair_of_edges",
    "weakly_separated_sets",
    "weakly_separated_pairs",
    "phi",
    "phi_components",
    "run_length",
]


def _cyclic_descents(seq):
    m = len(seq)
    return sum(1 for i in range(m) if seq[i] > seq[(i + 1) % m])


def _validate(n, P, Q):
    if not isinstance(n, int) or n < 1:
        raise ValueError("boundary size must be a positive integer, got %r" % (n,))
    if len(P) != len(Q):
        raise ValueError("size mismatch: |P|=%d but |Q|=%d" % (len(P), len(Q)))
    flat = P + tuple(reversed(Q))
    for x in flat:
        if not isinstance(x, int) or not 1 <= x <= n:
            raise ValueError("label %r out of range 1..%d" % (x, n))
    if len(set(flat)) != len(flat):
        seen, dups = set(), set()
        for x in flat:
            (dups if x in seen else seen).add(x)
        raise ValueError("repeated labels %s in (%s;%s)" % (sorted(dups), P, Q))
    if len(flat) >= 2 and _cyclic_descents(flat) != 1:
        raise ValueError(
            "labels %s are not in clockwise order for (%s;%s)" % (list(flat), P, Q)
        )


class Pair:
    """An oriented circular pair (P;Q) on n boundary vertices.

    Equality and hashing are on the exact orientation; use .canonical()
    (or the canonicalize() function) when flip-identified pairs are
    wanted.  Instances are immutable.
    """

    __slots__ = ("n", "P", "Q")

    def __init__(self, n, P=(), Q=(), _checked=False):
        P, Q = tuple(P), tuple(Q)
        if not _checked:
            _validate(n, P, Q)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)

    def __setattr__(self, name, value):
        raise AttributeError("Pair is immutable")

    @property
    def k(self):
        return len(self.P)

    @property
    def support(self):
        return frozenset(self.P) | frozenset(self.Q)

    def flip(self):
        """The other representative (Q~;P~) of the same unordered pair."""
        return Pair(self.n, tuple(reversed(self.Q)), tuple(reversed(self.P)),
                    _checked=True)

    def canonical(self):
        f = self.flip()
        return self if self.P + self.Q <= f.P + f.Q else f

    @property
    def is_canonical(self):
        f = self.flip()
        return self.P + self.Q <= f.P + f.Q

    @property
    def is_empty(self):
        return not self.P

    def __eq__(self, other):
        return (isinstance(other, Pair)
                and self.n == other.n and self.P == other.P and self.Q == other.Q)

    def __hash__(self):
        return hash((self.n, self.P, self.Q))

    def __repr__(self):
        p = ",".join(map(str, self.P))
        q = ",".join(map(str, self.Q))
        return "(%s;%s|n=%d)" % (p, q, self.n)


def canonicalize(P, Q, n):
    """Canonical representative of the circular pair (P;Q) on n vertices.

    Of (P;Q) and (Q~;P~) the one with lexicographically smaller flattened
    tuple P+Q is kept.  Idempotent.  Raises ValueError on overlapping
    P, Q or labels out of clockwise order.
    """
    return Pair(n, P, Q).canonical()


def arc_distance(a, b, n):
    """Number of boundary vertices from a clockwise to b, both inclusive.

    d(a,a) = 1 and d(a,b) + d(b,a) = n + 2 for a != b.
    """
    for x in (a, b):
        if not 1 <= x <= n:
            raise ValueError("label %r out of range 1..%d" % (x, n))
    return b - a + 1 if a <= b else n - a + b + 1


def _shift(a, steps, n):
    # label a moved `steps` vertices clockwise
    return (a - 1 + steps) % n + 1


def pair_from_sets(A, B, n):
    """The oriented pair (P;Q) with set(P) = A, set(Q) = B, if one exists.

    A circular pair with these supports exists iff |A| = |B|, the sets are
    disjoint, and A occupies a contiguous arc of the cyclic order induced
    on A | B; the two orders are then forced.  Returns None when there is
    no such pair.
    """
    A, B = frozenset(A), frozenset(B)
    if len(A) != len(B) or (A & B):
        return None
    k = len(A)
    if k == 0:
        return Pair(n)
    U = sorted(A | B)
    m = len(U)
    for s in range(m):
        window = [U[(s + i) % m] for i in range(k)]
        if all(x in A for x in window):
            rest = [U[(s + k + i) % m] for i in range(k)]
            return Pair(n, tuple(window), tuple(reversed(rest)), _checked=True)
    return None


def enumerate_pairs(n, k_max=None):
    """All canonical circular pairs of size <= k_max, including (;)."""
    if k_max is None:
        k_max = n // 2
    out = {Pair(n)}
    for k in range(1, k_max + 1):
        if 2 * k > n:
            break
        for U in itertools.combinations(range(1, n + 1), 2 * k):
            for s in range(2 * k):
                P = tuple(U[(s + i) % (2 * k)] for i in range(k))
                rest = tuple(U[(s + k + i) % (2 * k)] for i in range(k))
                out.add(Pair(n, P, tuple(reversed(rest)), _checked=True).canonical())
    return frozenset(out)


def enumerate_oriented(n, k_max=None):
    """All oriented circular pairs (both representatives; (;) once)."""
    out = set()
    for p in enumerate_pairs(n, k_max):
        out.add(p)
        out.add(p.flip())
    return frozenset(out)


def _is_run(seq, n):
    # consecutive clockwise run: each label follows its predecessor
    return all(seq[i + 1] == _shift(seq[i], 1, n) for i in range(len(seq) - 1))


def is_solid(pair):
    """True iff P and (q_k,...,q_1) are both consecutive clockwise runs.

    The empty pair is solid by convention.  Flip-invariant.
    """
    return _is_run(pair.P, pair.n) and _is_run(tuple(reversed(pair.Q)), pair.n)


def solid_stats(pair):
    """(d1, d2) = (d(p_k, q_k), d(q_1, p_1)) for a nonempty solid pair.

    Always d1 + d2 = n - 2k + 4 and d1, d2 >= 2.
    """
    if pair.is_empty:
        raise ValueError("solid_stats of the empty pair")
    if not is_solid(pair):
        raise ValueError("solid_stats of non-solid pair %r" % (pair,))
    n = pair.n
    return (arc_distance(pair.P[-1], pair.Q[-1], n),
            arc_distance(pair.Q[0], pair.P[0], n))


def classify(pair):
    """Flags {solid, picked, diametric, maximal, limiting} of a pair.

    All five notions are defined for solid pairs and evaluated
    flip-invariantly:

    - picked: d1 <= d2 and p1 <= n/2, or d1 >= d2 and q_k <= n/2 (either
      representative; the two clauses swap under the flip).
    - diametric: nonempty solid with |d1-d2| <= 1, or |d1-d2| = 2 and
      picked.
    - maximal: nonempty solid with 2k+2 > n, or 2k+2 = n and d1 = d2.
    - limiting: |d1-d2| = 2, picked, and the distinguished label 1 is
      p1 or q_k.  (Only possible for even n, since |d1-d2| and n have the
      same parity.)

    The empty pair is solid and nothing else.  Non-solid pairs get all
    flags False.
    """
    flags = {"solid": False, "picked": False, "diametric": False,
             "maximal": False, "limiting": False}
    if not is_solid(pair):
        return flags
    flags["solid"] = True
    if pair.is_empty:
        return flags
    n, k = pair.n, pair.k
    d1, d2 = solid_stats(pair)
    picked = ((d1 <= d2 and 2 * pair.P[0] <= n)
              or (d1 >= d2 and 2 * pair.Q[-1] <= n))
    diff = abs(d1 - d2)
    flags["picked"] = picked
    flags["diametric"] = diff <= 1 or (diff == 2 and picked)
    flags["maximal"] = 2 * k + 2 > n or (2 * k + 2 == n and d1 == d2)
    flags["limiting"] = (diff == 2 and picked
                         and (pair.P[0] == 1 or pair.Q[-1] == 1))
    return flags


def enumerate_solid(n, oriented=False):
    """All solid pairs on n vertices (canonical unless oriented=True).

    Direct construction: P is the run of k labels from p1, the reversed Q
    is the run of k labels starting d1 - 1 steps clockwise of p_k.
    """
    out = set()
    for k in range(1, n // 2 + 1):
        for p1 in range(1, n + 1):
            P = tuple(_shift(p1, i, n) for i in range(k))
            for d1 in range(2, n - 2 * k + 3):
                qk = _shift(P[-1], d1 - 1, n)
                Qrev = tuple(_shift(qk, i, n) for i in range(k))
                p = Pair(n, P, tuple(reversed(Qrev)), _checked=True)
                out.add(p if oriented else p.canonical())
    return frozenset(out)


def generate_diametric(n):
    """The diametric pairs on n vertices (canonical); always C(n,2) many."""
    if n < 3:
        raise ValueError("need n >= 3")
    return frozenset(p for p in enumerate_solid(n) if classify(p)["diametric"])


def triple_of(pair):
    """(D, T2, k) coordinates of an oriented nonempty solid pair.

    D = d1 - d2.  T is the midpoint of p1 and q1 on the circle, stored
    doubled as the integer T2 = 2T mod 2n to avoid half-integers:
    T2 = p1 + q1 (mod 2n) when p1 < q1, else p1 + q1 + n (mod 2n).
    A solid pair is uniquely determined by its triple.
    """
    d1, d2 = solid_stats(pair)
    p1, q1, n = pair.P[0], pair.Q[0], pair.n
    t2 = (p1 + q1) % (2 * n) if p1 < q1 else (p1 + q1 + n) % (2 * n)
    return (d1 - d2, t2, pair.k)


@lru_cache(maxsize=None)
def _triple_table(n):
    return {triple_of(p): p for p in enumerate_solid(n, oriented=True)}


def pair_of_triple(D, T2, k, n):
    """The oriented solid pair with coordinates (D, T2, k); inverse of triple_of."""
    if abs(D) + 2 * k > n:
        raise ValueError("no solid pair: |D| + 2k = %d exceeds n = %d"
                         % (abs(D) + 2 * k, n))
    try:
        return _triple_table(n)[(D, T2 % (2 * n), k)]
    except KeyError:
        raise ValueError("no solid pair on %d vertices has (D,T2,k)=(%d,%d,%d)"
                         % (n, D, T2, k)) from None


def flip_triple(triple, n):
    """Triple coordinates of the flipped pair: (D,T2,k) -> (-D, T2+n, k).

    The flip swaps d1 with d2 and moves the (p1,q1) midpoint to the
    antipodal slot, so T moves by n/2 (T2 by n mod 2n); it is not fixed.
    """
    D, T2, k = triple
    return (-D, (T2 + n) % (2 * n), k)


def correspond(pair):
    """The row/column swap c as an involution on oriented pairs.

    Swapping the row set and column set of the minor block and re-reading
    both in clockwise order lands on the flip representative (Q~;P~) --
    for size 1 this is literally (q1;p1).  On solid pairs the triple maps
    by flip_triple: D negates and T moves to the antipodal slot.
    """
    return pair.flip()


def edges_of(pair):
    """The boundary chords { {p_i, q_i} } of a circular pair.

    For a valid circular pair these chords are pairwise non-crossing.
    """
    return frozenset(frozenset((p, q)) for p, q in zip(pair.P, pair.Q))


def pair_of_edges(E, n):
    """The canonical circular pair whose chord set is E.

    Tries every rotation of the support; raises ValueError when no
    circular pair realizes E (crossing chords, or a non-crossing matching
    that no single pair produces, e.g. {12, 34, 56} on 6 vertices).
    """
    E = frozenset(frozenset(e) for e in E)
    if not E:
        return Pair(n)
    k = len(E)
    support = sorted(set().union(*E))
    if len(support) != 2 * k:
        raise ValueError("chords are not disjoint: %s" % (sorted(map(sorted, E)),))
    for s in range(2 * k):
        P = tuple(support[(s + i) % (2 * k)] for i in range(k))
        rest = tuple(support[(s + k + i) % (2 * k)] for i in range(k))
        cand = Pair(n, P, tuple(reversed(rest)), _checked=True)
        if edges_of(cand) == E:
            return cand.canonical()
    raise ValueError("no circular pair realizes chords %s"
                     % (sorted(map(sorted, E)),))


def weakly_separated_sets(A, B, n=None):
    """Weak separation of two label sets.

    A and B are weakly separated when there are no a, a' in A \\ B and
    b, b' in B \\ A with a < b < a' < b' or b < a < b' < a'.  Equivalently
    the sorted symmetric difference splits into at most three blocks of
    constant origin.
    """
    A, B = set(A), set(B)
    labels = [x in A for x in sorted(A ^ B)]
    blocks = 1 + sum(1 for u, v in zip(labels, labels[1:]) if u != v)
    return blocks <= 3 if labels else True


def weakly_separated_pairs(x, y):
    """Weak separation of circular pairs: P|R ws Q|S and P|S ws Q|R.

    Independent of the chosen representatives (the two conditions swap
    under either flip), and every pair is weakly separated from itself.
    """
    if x.n != y.n:
        raise ValueError("pairs on different boundary sizes")
    P, Q = set(x.P), set(x.Q)
    R, S = set(y.P), set(y.Q)
    return (weakly_separated_sets(P | R, Q | S)
            and weakly_separated_sets(P | S, Q | R))


def run_length(seq, n):
    """Length of the maximal initial consecutive clockwise run of seq."""
    c = 1
    while c < len(seq) and seq[c] == _shift(seq[c - 1], 1, n):
        c += 1
    return c


def _d34(seq, n):
    # d3/d4 of one side, applied to a clockwise reading of that side
    k = len(seq)
    c = run_length(seq, n)
    if c == k:
        return 0, 0
    return arc_distance(seq[c - 1], seq[c], n), arc_distance(seq[0], seq[-1], n)


def phi_components(pair):
    """(d3(P), d4(P), d3(Q), d4(Q)) of a nonempty pair.

    For P read clockwise: let c be the length of the maximal initial
    consecutive run; if c < k then d3 = d(p_c, p_{c+1}) and
    d4 = d(p_1, p_k), else both are 0.  For Q the same construction is
    applied to its clockwise reading (q_k, ..., q_1).
    """
    if pair.is_empty:
        raise ValueError("phi of the empty pair")
    d3p, d4p = _d34(pair.P, pair.n)
    d3q, d4q = _d34(tuple(reversed(pair.Q)), pair.n)
    return d3p, d4p, d3q, d4q


def phi(pair):
    """Consecutivity defect; zero exactly on solid pairs, flip-invariant."""
    return sum(phi_components(pair))


if __name__ == "__main__":
    for n in (4, 5):
        D = sorted((p.P, p.Q) for p in generate_diametric(n))
        print("diametric pairs on %d vertices (%d):" % (n, len(D)))
        for P, Q in D:
            print("   (%s;%s)" % (",".join(map(str, P)), ",".join(map(str, Q))))
