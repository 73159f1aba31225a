"""Subtraction-free expressions for circular minors over diametric minors.

Every circular minor of a symmetric n x n matrix equals a positive
rational expression -- built with +, * and / only -- in the C(n,2)
diametric minors.  rewrite_minor constructs that expression as a
memoized DAG by a two-phase recursion:

* a non-solid pair is expanded along the unbalanced three-term exchange
  relation at the first break of its clockwise row run (flipping first
  when the row side is already consecutive); every subterm has strictly
  smaller total side span, so this phase bottoms out at solid pairs;
* a solid pair whose gap statistics d1, d2 are out of balance is
  extended by one fresh label on each side into the wider gap and
  expanded along the square exchange relation; |d1 - d2| drops by two
  per level until every subterm is diametric.

Leaves are diametric pairs plus the empty pair (whose minor is 1), so
evaluating the DAG on a matrix whose diametric minors are all positive
never leaves the positive reals: positivity of the diametric minors
certifies positivity of every circular minor.
"""

from functools import lru_cache

from .linalg import circular_minor
from .pairs import Pair, classify, run_length, solid_stats


def _step(a, d, n):
    return (a - 1 + d) % n + 1


class Expr:
    """Immutable expression node.

    op is one of "minor", "add", "mul", "div".  For a "minor" leaf,
    args is a 1-tuple holding the circular pair; otherwise args holds
    the two operand nodes.  Shared subexpressions are shared nodes, so
    an expression is in general a DAG rather than a tree.
    """

    __slots__ = ("op", "args")

    def __init__(self, op, args):
        if op not in ("minor", "add", "mul", "div"):
            raise ValueError("unknown operator %r" % (op,))
        args = tuple(args)
        if op == "minor":
            if len(args) != 1 or not isinstance(args[0], Pair):
                raise ValueError("minor leaf needs exactly one circular pair")
        elif len(args) != 2 or not all(isinstance(a, Expr) for a in args):
            raise ValueError("%s node needs two operand nodes" % op)
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "args", args)

    def __setattr__(self, name, value):
        raise AttributeError("Expr is immutable")

    @property
    def is_leaf(self):
        return self.op == "minor"

    @property
    def pair(self):
        if self.op != "minor":
            raise ValueError("only minor leaves carry a pair")
        return self.args[0]

    def __repr__(self):
        if self.is_leaf:
            return "Expr(minor %r)" % (self.pair,)
        return "Expr(%s, %d nodes)" % (self.op, len(expr_nodes(self)))


def _solid_rule(pair):
    """Exchange step for a solid, non-diametric pair.

    Extends the pair by one label on each side into the wider of its
    two gaps and solves the square exchange relation for the original
    minor: returns (t1, t2), (t3, t4), div meaning

        minor(pair) = (minor(t1) minor(t2) + minor(t3) minor(t4)) / minor(div)

    Every returned pair is solid with gap imbalance smaller by two
    (except, at imbalance two, the divisor, which lands on the picked
    partner and is therefore itself diametric).
    """
    n = pair.n
    P, Q = pair.P, pair.Q
    d1, d2 = solid_stats(pair)
    if d2 > d1:
        # widen at the front: p0 just before p1, q0 just after q1
        DP = (_step(P[0], -1, n),) + P
        DQ = (_step(Q[0], 1, n),) + Q
        t1, t2 = Pair(n, P, DQ[:-1]), Pair(n, DP[:-1], Q)
        div = Pair(n, DP[:-1], DQ[:-1])
    else:
        # widen at the back: after p_k, before q_k
        DP = P + (_step(P[-1], 1, n),)
        DQ = Q + (_step(Q[-1], -1, n),)
        t1, t2 = Pair(n, DP[1:], Q), Pair(n, P, DQ[1:])
        div = Pair(n, DP[1:], DQ[1:])
    t3, t4 = Pair(n, P[:-1] if d2 > d1 else P[1:], Q[:-1] if d2 > d1 else Q[1:]), \
        Pair(n, DP, DQ)
    if abs(d1 - d2) == 2 and not classify(div)["diametric"]:
        raise AssertionError("divisor %r escaped the diametric set" % (div,))
    return (t1, t2), (t3, t4), div


def _split_rule(pair):
    """Exchange step for a non-solid pair.

    Inserts the label after the first break of the clockwise row run
    (flipping first if the row side has no break) and solves the
    unbalanced three-term exchange relation for the original minor;
    same return convention as _solid_rule.  All five returned pairs
    have strictly smaller total side span.
    """
    n = pair.n
    p = pair if run_length(pair.P, n) < pair.k else pair.flip()
    P, Q = p.P, p.Q
    c = run_length(P, n)
    DP = P[:c] + (_step(P[c - 1], 1, n),) + P[c:]
    t1, t2 = Pair(n, DP[1:], Q), Pair(n, P[:-1], Q[:-1])
    t3, t4 = Pair(n, DP[:-1], Q), Pair(n, P[1:], Q[:-1])
    div = Pair(n, DP[1:-1], Q[:-1])
    return (t1, t2), (t3, t4), div


@lru_cache(maxsize=None)
def _node(pair):
    flags = classify(pair)
    if pair.is_empty or flags["diametric"]:
        return Expr("minor", (pair,))
    rule = _solid_rule if flags["solid"] else _split_rule
    (t1, t2), (t3, t4), div = rule(pair)
    num = Expr("add", (
        Expr("mul", (_node(t1.canonical()), _node(t2.canonical()))),
        Expr("mul", (_node(t3.canonical()), _node(t4.canonical())))))
    return Expr("div", (num, _node(div.canonical())))


def rewrite_minor(pair):
    """Subtraction-free expression for the minor of any circular pair.

    The result's leaves are diametric pairs (and possibly the empty
    pair); a diametric or empty input returns a single leaf.  Nodes are
    cached per canonical pair, so repeated calls share structure.
    """
    return _node(pair.canonical())


def evaluate(expr, m):
    """Value of expr on the matrix m, reading leaves as circular minors."""
    cache = {}

    def go(e):
        got = cache.get(id(e))
        if got is not None:
            return got
        if e.op == "minor":
            val = circular_minor(m, e.pair)
        else:
            x, y = go(e.args[0]), go(e.args[1])
            val = x + y if e.op == "add" else x * y if e.op == "mul" else x / y
        cache[id(e)] = val
        return val

    return go(expr)


def expr_nodes(expr):
    """Every distinct node reachable from expr (DAG order, root first)."""
    seen, order, stack = set(), [], [expr]
    while stack:
        e = stack.pop()
        if id(e) in seen:
            continue
        seen.add(id(e))
        order.append(e)
        if not e.is_leaf:
            stack.extend(e.args)
    return order


def expr_leaves(expr):
    """The set of circular pairs appearing as leaves of expr."""
    return frozenset(e.pair for e in expr_nodes(expr) if e.is_leaf)


def operation_counts(expr):
    """Distinct-node counts per operator: {"minor": ..., "add": ...}."""
    out = {"minor": 0, "add": 0, "mul": 0, "div": 0}
    for e in expr_nodes(expr):
        out[e.op] += 1
    return out


def render(expr):
    """ASCII rendering with leaves as [P;Q] and operators +, *, /.

    Reading * and / left to right at equal precedence reproduces the
    value; additions are parenthesized wherever required.
    """
    def go(e):
        if e.is_leaf:
            p = e.pair
            return "[%s;%s]" % (",".join(map(str, p.P)), ",".join(map(str, p.Q)))
        a, b = e.args
        if e.op == "add":
            return "%s + %s" % (go(a), go(b))
        sa, sb = go(a), go(b)
        if a.op == "add":
            sa = "(%s)" % sa
        if e.op == "mul":
            if b.op == "add":
                sb = "(%s)" % sb
            return "%s*%s" % (sa, sb)
        if not b.is_leaf:
            sb = "(%s)" % sb
        return "%s/%s" % (sa, sb)

    return go(expr)


if __name__ == "__main__":
    import random
    from .linalg import circular_minor as direct
    from .network import response_matrix, well_connected
    from .pairs import enumerate_pairs

    rng = random.Random(0)
    for n in (5, 6):
        m = response_matrix(well_connected(n, rng))
        worst = 0
        for p in enumerate_pairs(n):
            e = rewrite_minor(p)
            assert evaluate(e, m) == direct(m, p)
            worst = max(worst, len(expr_nodes(e)))
        print("n=%d: all %d minors match; largest DAG has %d nodes"
              % (n, len(enumerate_pairs(n)), worst))
    print(render(rewrite_minor(Pair(6, (1, 3), (5, 4)))))
