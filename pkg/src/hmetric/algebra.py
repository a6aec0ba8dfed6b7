"""Finite involutive Heyting algebras: the value sets of generalized metrics.

Elements are integer ids ``0..n-1`` with string labels. Every algebra carries
dense tables for the order, the monoid operation and the involution; joins,
meets and residuals are derived once at construction (residuals lazily).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

from .errors import HMetricError

FAMILY_CHECK_LIMIT = 12


@dataclass
class LawReport:
    passed: bool = True
    violations: list = field(default_factory=list)

    def add(self, law, witness):
        self.violations.append((law, tuple(witness)))
        self.passed = False

    def laws(self):
        return [law for law, _ in self.violations]


class FiniteAlgebra:
    """A finite ordered monoid with an involution, given by tables.

    ``leq[p][q]`` is the order, ``oplus[p][q]`` the monoid operation and
    ``inv[p]`` the involution. ``zero`` and ``one`` default to the first
    and last element.
    """

    finite = True

    def __init__(self, name, labels, leq, oplus, inv, zero=0, one=None):
        self.name = name
        self.labels = tuple(labels)
        self.n = n = len(self.labels)
        if n == 0:
            raise HMetricError("an algebra needs at least one element")
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != n:
            raise HMetricError("duplicate element labels")
        self._le = [[bool(leq[p][q]) for q in range(n)] for p in range(n)]
        self._op = [[int(oplus[p][q]) for q in range(n)] for p in range(n)]
        self._inv = [int(inv[p]) for p in range(n)]
        self.zero = zero
        self.one = n - 1 if one is None else one
        down = [sum(self._le[q][p] for q in range(n)) for p in range(n)]
        self.topo = tuple(sorted(range(n), key=lambda p: (down[p], p)))
        self._join = [[self._bound(p, q, upper=True) for q in range(n)] for p in range(n)]
        self._meet = [[self._bound(p, q, upper=False) for q in range(n)] for p in range(n)]

    def _bound(self, p, q, upper):
        le = self._le
        if upper:
            cands = [r for r in range(self.n) if le[p][r] and le[q][r]]
            best = [r for r in cands if all(le[r][s] for s in cands)]
        else:
            cands = [r for r in range(self.n) if le[r][p] and le[r][q]]
            best = [r for r in cands if all(le[s][r] for s in cands)]
        return best[0] if len(best) == 1 else -1

    def __repr__(self):
        return f"FiniteAlgebra({self.name!r}, {self.n} elements)"

    # element naming
    def elem(self, token):
        if isinstance(token, (int, np.integer)) and not isinstance(token, bool):
            if 0 <= token < self.n:
                return int(token)
            raise HMetricError(f"element id {token} out of range for {self.name}")
        tok = str(token).strip().replace("−", "-").replace("∞", "inf")
        if tok in self._index:
            return self._index[tok]
        raise HMetricError(f"unknown element {token!r} of algebra {self.name}")

    def label(self, p):
        return self.labels[p]

    @property
    def elements(self):
        return range(self.n)

    # operations
    def leq(self, p, q):
        return self._le[p][q]

    def oplus(self, p, q):
        return self._op[p][q]

    def inv(self, p):
        return self._inv[p]

    def join(self, p, q):
        r = self._join[p][q]
        if r < 0:
            raise HMetricError(f"{self.label(p)} and {self.label(q)} have no join")
        return r

    def meet(self, p, q):
        r = self._meet[p][q]
        if r < 0:
            raise HMetricError(f"{self.label(p)} and {self.label(q)} have no meet")
        return r

    def join_all(self, items):
        acc = self.zero
        for p in items:
            acc = self.join(acc, p)
        return acc

    def meet_all(self, items):
        acc = self.one
        for p in items:
            acc = self.meet(acc, p)
        return acc

    def least(self, candidates):
        """The least element of ``candidates`` (scanned in topological order)."""
        cs = set(candidates)
        for r in self.topo:
            if r in cs and all(self._le[r][s] for s in cs):
                return r
        raise HMetricError(f"no least element in {sorted(self.label(c) for c in cs)}")

    @cached_property
    def _res_left(self):
        n, le, op = self.n, self._le, self._op
        return [[self.least(r for r in range(n) if le[v][op[r][g]]) for g in range(n)]
                for v in range(n)]

    @cached_property
    def _res_right(self):
        n, le, op = self.n, self._le, self._op
        return [[self.least(r for r in range(n) if le[v][op[g][r]]) for g in range(n)]
                for v in range(n)]

    def residual_left(self, v, g):
        """Least ``r`` with ``v <= r + g``."""
        return self._res_left[v][g]

    def residual_right(self, v, g):
        """Least ``r`` with ``v <= g + r``."""
        return self._res_right[v][g]

    def distance(self, p, q):
        return self._dist[p][q]

    @cached_property
    def _dist(self):
        iv = self._inv
        return [[self.join(self.residual_left(iv[p], iv[q]), self.residual_right(q, p))
                 for q in range(self.n)] for p in range(self.n)]

    # numpy views for the kernels
    @cached_property
    def leq_array(self):
        return np.array(self._le, dtype=np.int32)

    @cached_property
    def oplus_array(self):
        return np.array(self._op, dtype=np.int32)

    @cached_property
    def inv_array(self):
        return np.array(self._inv, dtype=np.int32)

    @cached_property
    def meet_array(self):
        return np.array(self._meet, dtype=np.int32)

    def dump(self):
        """Serialize to the line-based algebra file format."""
        lines = [f"algebra {self.name}", "elements " + " ".join(self.labels)]
        for p in range(self.n):
            for q in range(self.n):
                if p != q and self._le[p][q] and not any(
                        r not in (p, q) and self._le[p][r] and self._le[r][q]
                        for r in range(self.n)):
                    lines.append(f"cover {self.labels[p]} {self.labels[q]}")
        for p in range(self.n):
            for q in range(self.n):
                lines.append(f"op {self.labels[p]} {self.labels[q]} {self.labels[self._op[p][q]]}")
        for p in range(self.n):
            lines.append(f"inv {self.labels[p]} {self.labels[self._inv[p]]}")
        return "\n".join(lines) + "\n"


def value_distance(alg, p, q):
    """The least ``r`` with ``p <= q + inv r`` and ``q <= p + r``."""
    return alg.join(alg.residual_left(alg.inv(p), alg.inv(q)), alg.residual_right(q, p))


def residual_left(alg, v, g):
    return alg.residual_left(v, g)


def residual_right(alg, v, g):
    return alg.residual_right(v, g)


def inaccessible_set(alg):
    """Elements ``v`` admitting no ``r`` with ``v`` not below ``r`` but below ``r + inv r``."""
    out = []
    for v in alg.elements:
        if not any(not alg.leq(v, r) and alg.leq(v, alg.oplus(r, alg.inv(r)))
                   for r in alg.elements):
            out.append(v)
    return out


# law checking

def validate_laws(alg, family_limit=FAMILY_CHECK_LIMIT):
    """Check every axiom exhaustively and report one witness per violated law."""
    rep = LawReport()
    n, E = alg.n, range(alg.n)
    le, op, iv = alg._le, alg._op, alg._inv
    lab = alg.labels

    def first(law, gen):
        for w in gen:
            rep.add(law, [lab[x] for x in w])
            return

    first("order/reflexive", ((p,) for p in E if not le[p][p]))
    first("order/antisymmetric", ((p, q) for p in E for q in E
                                   if p != q and le[p][q] and le[q][p]))
    first("order/transitive", ((p, q, r) for p in E for q in E for r in E
                                if le[p][q] and le[q][r] and not le[p][r]))
    first("lattice/join", ((p, q) for p in E for q in E if alg._join[p][q] < 0))
    first("lattice/meet", ((p, q) for p in E for q in E if alg._meet[p][q] < 0))
    first("bounds/zero-least", ((p,) for p in E if not le[alg.zero][p]))
    first("bounds/one-greatest", ((p,) for p in E if not le[p][alg.one]))
    first("monoid/neutral", ((p,) for p in E
                             if op[alg.zero][p] != p or op[p][alg.zero] != p))
    first("monoid/associativity", ((p, q, r) for p in E for q in E for r in E
                                   if op[op[p][q]][r] != op[p][op[q][r]]))
    first("monoid/monotone", ((p, q, r) for p in E for q in E if le[p][q] for r in E
                              if not (le[op[p][r]][op[q][r]] and le[op[r][p]][op[r][q]])))
    first("involution/involutive", ((p,) for p in E if iv[iv[p]] != p))
    first("involution/order", ((p, q) for p in E for q in E if le[p][q] and not le[iv[p]][iv[q]]))
    first("involution/reverses", ((p, q) for p in E for q in E
                                  if iv[op[p][q]] != op[iv[q]][iv[p]]))
    first("distributivity/empty", ((q,) for q in E
                                   if op[alg.one][q] != alg.one or op[q][alg.one] != alg.one))
    mt = alg._meet
    if not any(law == "lattice/meet" for law in rep.laws()):
        first("distributivity/binary-left", ((p, r, q) for p in E for r in E for q in E
                                             if op[mt[p][r]][q] != mt[op[p][q]][op[r][q]]))
        first("distributivity/binary-right", ((p, r, q) for p in E for r in E for q in E
                                              if op[q][mt[p][r]] != mt[op[q][p]][op[q][r]]))
        if n <= family_limit:
            first("distributivity/families", _family_violations(alg))
    return rep


def _family_violations(alg):
    """Subsets ``S`` and ``q`` with ``meet(S) + q != meet(s + q)`` on either side."""
    n, op, mt, one = alg.n, alg._op, alg._meet, alg.one
    size = 1 << n
    meets = [one] * size
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        meets[mask] = mt[meets[mask & (mask - 1)]][low]
    for q in range(n):
        for side in (0, 1):
            acc = [one] * size
            for mask in range(1, size):
                low = (mask & -mask).bit_length() - 1
                term = op[low][q] if side == 0 else op[q][low]
                acc[mask] = mt[acc[mask & (mask - 1)]][term]
                lhs = op[meets[mask]][q] if side == 0 else op[q][meets[mask]]
                if lhs != acc[mask]:
                    yield tuple(p for p in range(n) if mask >> p & 1) + (q,)
            if (op[one][q] if side == 0 else op[q][one]) != one:
                yield (q,)


# built-in instances

def from_functions(name, labels, leq, oplus, inv):
    n = len(labels)
    return FiniteAlgebra(
        name, labels,
        [[leq(labels[p], labels[q]) for q in range(n)] for p in range(n)],
        [[labels.index(oplus(labels[p], labels[q])) for q in range(n)] for p in range(n)],
        [labels.index(inv(labels[p])) for p in range(n)])


def graph3():
    vals = {"0": 0, "1/2": 1, "1": 2}
    labels = list(vals)
    return from_functions(
        "graph3", labels,
        lambda a, b: vals[a] <= vals[b],
        lambda a, b: labels[min(vals[a] + vals[b], 2)],
        lambda a: a)


def digraph5():
    labels = ["0", "1/2", "+", "-", "1"]
    rank = {"0": 0, "1/2": 1, "+": 2, "-": 2, "1": 3}

    def leq(a, b):
        return a == b or rank[a] < rank[b]

    def oplus(a, b):
        if a == "0":
            return b
        if b == "0":
            return a
        return "1"

    return from_functions("digraph5", labels, leq, oplus,
                          lambda a: {"+": "-", "-": "+"}.get(a, a))


def poset4():
    labels = ["0", "+", "-", "1"]

    def leq(a, b):
        return a == b or a == "0" or b == "1"

    def join(a, b):
        if leq(a, b):
            return b
        if leq(b, a):
            return a
        return "1"

    return from_functions("poset4", labels, leq, join,
                          lambda a: {"+": "-", "-": "+"}.get(a, a))


def nat(k):
    if k < 2:
        raise HMetricError("nat(k) needs k >= 2")
    labels = [str(i) for i in range(k + 1)] + ["inf"]
    val = {lab: (i if lab != "inf" else k + 1) for i, lab in enumerate(labels)}

    def oplus(a, b):
        s = val[a] + val[b]
        return labels[s] if s <= k else "inf"

    return from_functions(f"nat({k})", labels, lambda a, b: val[a] <= val[b], oplus,
                          lambda a: a)


def fence_pairs(k):
    """Finite fence distances kept by the truncation at ``k``.

    A pair survives when its shorter fence has length at most ``k``; the
    other component may then be ``k + 1``. Everything else is the top.
    """
    pairs = [(n, m) for n in range(1, k + 2) for m in range(1, k + 2)
             if abs(n - m) <= 1 and (n, m) != (1, 1) and min(n, m) <= k]
    return [(0, 0)] + sorted(pairs, key=lambda p: (p[0] + p[1], p[0]))


def _fence_normal(up, down, k):
    up, down = min(up, down + 1), min(down, up + 1)
    if min(up, down) > k:
        return None
    return (up, down)


def fence_sum(a, b, k):
    """Sum of fence distances ``(n, m)``; ``None`` stands for the top.

    A pair records the shortest up-fence (word ``+-+...`` of length n) and
    down-fence (``-+-...`` of length m). Concatenating alternating words
    merges the junction letters when they agree, so the up part of the sum
    continues with the up or down part of ``b`` depending on the parity of n.
    """
    if a is None or b is None:
        return None
    if a == (0, 0):
        return b
    if b == (0, 0):
        return a
    n, m = a
    n2, m2 = b
    up = n + n2 - 1 if n % 2 else n + m2 - 1
    down = m + m2 - 1 if m % 2 else m + n2 - 1
    return _fence_normal(up, down, k)


def fence_inv(a, k):
    """Reverse a fence distance.

    Reading an alternating word backwards with the letters swapped keeps an
    even-length word in its family and moves an odd-length one to the other.
    """
    if a is None or a == (0, 0):
        return a
    n, m = a
    big = 2 * k + 4
    up = min([n] * (n % 2 == 0) + [m] * (m % 2 == 1) + [big])
    down = min([n] * (n % 2 == 1) + [m] * (m % 2 == 0) + [big])
    return _fence_normal(up, down, k)


def fence(k):
    if k < 2:
        raise HMetricError("fence(k) needs k >= 2")
    pairs = fence_pairs(k) + [None]
    labels = ["inf" if p is None else f"({p[0]},{p[1]})" for p in pairs]
    idx = {p: i for i, p in enumerate(pairs)}
    n = len(pairs)

    def leq(a, b):
        if b is None:
            return True
        if a is None:
            return False
        return a[0] <= b[0] and a[1] <= b[1]

    return FiniteAlgebra(
        f"fence({k})", labels,
        [[leq(pairs[p], pairs[q]) for q in range(n)] for p in range(n)],
        [[idx[fence_sum(pairs[p], pairs[q], k)] for q in range(n)] for p in range(n)],
        [idx[fence_inv(p, k)] for p in pairs])


def divisors(n):
    divs = sorted((d for d in range(1, n + 1) if n % d == 0), reverse=True)
    if n < 2 or len(divs) < 2:
        raise HMetricError("divisors(n) needs n >= 2")
    labels = [str(d) for d in divs]
    return from_functions(
        f"divisors({n})", labels,
        lambda a, b: int(a) % int(b) == 0,
        lambda a, b: str(gcd(int(a), int(b))),
        lambda a: a)


BUILTINS = {
    "graph3": (graph3, 0),
    "digraph5": (digraph5, 0),
    "poset4": (poset4, 0),
    "nat": (nat, 1),
    "fence": (fence, 1),
    "divisors": (divisors, 1),
}


def make_builtin(name, params=()):
    if name not in BUILTINS:
        raise HMetricError(f"unknown built-in algebra {name!r}")
    ctor, arity = BUILTINS[name]
    if len(params) != arity:
        raise HMetricError(f"{name} takes {arity} parameter(s), got {len(params)}")
    return ctor(*params)


_SPEC = re.compile(r"^\s*([a-z0-9]+)\s*(?:[(:]\s*(\d+)\s*\)?)?\s*$")


def builtin_from_spec(text):
    """Parse ``poset4``, ``nat(6)`` or ``nat:6``."""
    m = _SPEC.match(text)
    if not m:
        raise HMetricError(f"bad algebra selector {text!r}")
    params = [int(m.group(2))] if m.group(2) else []
    return make_builtin(m.group(1), params)
