"""Shared test oracles, independent of the implementation paths they check."""

from itertools import combinations

from promise_cc.automata import Dfa
from promise_cc.bitcore import BitString


def all_words(n):
    return [BitString.from_int(v, n) for v in range(1 << n)]


def weight_masks(n, k):
    """All integers of length-n bit patterns with exactly k ones."""
    return [sum(1 << p for p in c) for c in combinations(range(n), k)]


def eqk_promise_pairs(n, k):
    """Constructive enumeration: diagonal yes-pairs, distance-k no-pairs."""
    flips = weight_masks(n, k)
    for xv in range(1 << n):
        x = BitString.from_int(xv, n)
        yield x, x, True
        for e in flips:
            yield x, BitString.from_int(xv ^ e, n), False


def disjk_promise_pairs(n, k):
    """Constructive enumeration: disjoint yes-pairs, overlap-k no-pairs."""
    full = (1 << n) - 1
    for xv in range(1 << n):
        x = BitString.from_int(xv, n)
        comp = full ^ xv
        yv = comp
        while True:
            yield x, BitString.from_int(yv, n), True
            if yv == 0:
                break
            yv = (yv - 1) & comp
    for core in weight_masks(n, k):
        free = [p for p in range(n) if not (core >> p) & 1]
        for assign in range(3 ** len(free)):
            xv, yv, a = core, core, assign
            for p in free:
                a, side = divmod(a, 3)
                if side == 1:
                    xv |= 1 << p
                elif side == 2:
                    yv |= 1 << p
            yield BitString.from_int(xv, n), BitString.from_int(yv, n), False


def naive_max_family(n, forbidden, universe=None):
    """Textbook exact maximum-independent-set recursion on the conflict graph.

    Branches on a maximum-degree vertex; a remainder of maximum degree <= 1
    (isolated vertices plus a matching) is counted directly.  Independent of
    the coloring branch-and-bound used by the package.
    """
    words = list(range(1 << n)) if universe is None else sorted(universe)
    conf = []
    for i, w in enumerate(words):
        m = 0
        for j, u in enumerate(words):
            if i != j and (w & u).bit_count() == forbidden:
                m |= 1 << j
        conf.append(m)

    def mis(p):
        if p == 0:
            return 0
        best_v, best_deg = -1, -1
        m = p
        while m:
            lsb = m & -m
            v = lsb.bit_length() - 1
            deg = (conf[v] & p).bit_count()
            if deg > best_deg:
                best_v, best_deg = v, deg
            m ^= lsb
        if best_deg == 0:
            return p.bit_count()
        if best_deg == 1:
            edges = 0
            m, seen = p, 0
            while m:
                lsb = m & -m
                v = lsb.bit_length() - 1
                m ^= lsb
                if lsb & seen:
                    continue
                nb = conf[v] & p
                if nb:
                    edges += 1
                    seen |= nb | lsb
            return p.bit_count() - edges
        take = 1 + mis(p & ~(conf[best_v] | (1 << best_v)))
        skip = mis(p & ~(1 << best_v))
        return max(take, skip)

    return mis((1 << len(words)) - 1)


def memorizing_dfa(n):
    """DFA that records x, counts the overlap while reading y, then coasts.

    Solves the x#y#x disjointness words by construction; exponentially many
    states, which is exactly what the reduction is meant to expose.
    """
    states = []
    trans = {}
    dead = "dead"

    def add(state):
        states.append(state)
        return state

    add(dead)
    for sym in "01#":
        trans[(dead, sym)] = dead
    # read x bit by bit
    prefixes = [""]
    for length in range(n + 1):
        new = []
        for p in prefixes:
            add(("r", p))
            if length < n:
                for b in "01":
                    trans[(("r", p), b)] = ("r", p + b)
                    new.append(p + b)
                trans[(("r", p), "#")] = dead
            else:
                trans[(("r", p), "0")] = dead
                trans[(("r", p), "1")] = dead
                trans[(("r", p), "#")] = ("y", p, 0, 0)
        prefixes = new
    # read y, tracking position and overlap count
    for xv in range(1 << n):
        xs = format(xv, f"0{n}b")
        for j in range(n + 1):
            for m in range(j + 1):
                s = add(("y", xs, j, m))
                if j < n:
                    for b in "01":
                        m2 = m + (1 if b == "1" and xs[j] == "1" else 0)
                        trans[(s, b)] = ("y", xs, j + 1, m2)
                    trans[(s, "#")] = dead
                else:
                    trans[(s, "0")] = dead
                    trans[(s, "1")] = dead
                    trans[(s, "#")] = ("t", m == 0, 0)
    # coast over the trailing copy of x
    for verdict in (False, True):
        for i in range(n + 1):
            s = add(("t", verdict, i))
            nxt = ("t", verdict, i + 1) if i < n else dead
            trans[(s, "0")] = nxt
            trans[(s, "1")] = nxt
            trans[(s, "#")] = dead
    return Dfa(
        states=tuple(states),
        alphabet=("0", "1", "#"),
        transition=trans,
        start=("r", ""),
        accepting=frozenset({("t", True, n)}),
    )
