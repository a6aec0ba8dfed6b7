"""Words, the Higman subword order and the algebra of final segments.

A final segment of ``Λ*`` is stored as the antichain of its minimal words.
Words are Python strings whose characters are letters, so letters are
single characters. The algebra order is reverse inclusion: ``Λ* = ↑{□}`` is
the zero and the empty set is the top.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from . import kernels
from .errors import HMetricError, ParseError


class Alphabet:
    """Letters with an involution and an optional partial order.

    ``order`` lists pairs ``(a, b)`` meaning ``a <= b``; it is closed
    reflexively and transitively. The involution must preserve it.
    """

    def __init__(self, letters, inv=None, order=()):
        self.letters = tuple(letters)
        if any(len(c) != 1 for c in self.letters) or len(set(self.letters)) != len(self.letters):
            raise HMetricError("letters must be distinct single characters")
        if "^" in self.letters or any(c in ",{} " for c in self.letters):
            raise HMetricError("reserved character used as a letter")
        self.index = {c: i for i, c in enumerate(self.letters)}
        self.inv = dict(inv) if inv else {c: c for c in self.letters}
        for c in self.letters:
            if self.inv.get(c) not in self.index or self.inv[self.inv[c]] != c:
                raise HMetricError(f"letter involution is not an involution at {c!r}")
        le = {(c, c) for c in self.letters} | {tuple(p) for p in order}
        changed = True
        while changed:
            changed = False
            for a, b in list(le):
                for c, d in list(le):
                    if b == c and (a, d) not in le:
                        le.add((a, d))
                        changed = True
        for a, b in le:
            if a != b and (b, a) in le:
                raise HMetricError(f"letter order is not antisymmetric at {a!r}, {b!r}")
            if (self.inv[a], self.inv[b]) not in le:
                raise HMetricError("the letter involution must preserve the letter order")
        self.discrete = all(a == b for a, b in le)
        self.above = None if self.discrete else {
            c: frozenset(b for a, b in le if a == c) for c in self.letters}
        self._le = le
        self._dfa_cache = {}

    def __repr__(self):
        return f"Alphabet({''.join(self.letters)!r})"

    def __eq__(self, other):
        return (isinstance(other, Alphabet) and self.letters == other.letters
                and self.inv == other.inv and self._le == other._le)

    def __hash__(self):
        return hash(self.letters)

    def letter_leq(self, a, b):
        return (a, b) in self._le

    def key(self, word):
        return (len(word), tuple(self.index[c] for c in word))

    def upper_bounds(self, a, b):
        """Minimal letters above both ``a`` and ``b``."""
        ups = [c for c in self.letters if self.letter_leq(a, c) and self.letter_leq(b, c)]
        return [c for c in ups if not any(d != c and self.letter_leq(d, c) for d in ups)]

    def check_word(self, word):
        for c in word:
            if c not in self.index:
                raise HMetricError(f"letter {c!r} not in alphabet {''.join(self.letters)}")
        return word

    def words(self, max_len):
        """All words of length ``<= max_len`` in canonical order."""
        layer = [""]
        out = [""]
        for _ in range(max_len):
            layer = [w + c for w in layer for c in self.letters]
            out.extend(layer)
        return out

    def declaration(self):
        pairs = []
        for c in self.letters:
            d = self.inv[c]
            if self.index[c] <= self.index[d]:
                pairs.append(f"{c} {d}")
        return f"alphabet {' '.join(self.letters)} ; inv " + " ".join(pairs)


def zigzag_alphabet():
    return _ZIGZAG


_ZIGZAG = Alphabet("+-", {"+": "-", "-": "+"})


def parse_alphabet(text):
    """Parse ``alphabet + - ; inv + -`` (each inv pair swaps two letters)."""
    body = text.strip()
    if body.startswith("alphabet"):
        body = body[len("alphabet"):]
    parts = [p.strip() for p in body.split(";")]
    letters = parts[0].split()
    inv = {c: c for c in letters}
    order = []
    for part in parts[1:]:
        toks = part.split()
        if not toks:
            continue
        if toks[0] == "inv":
            rest = toks[1:]
            if len(rest) % 2:
                raise ParseError("inv needs letter pairs")
            for a, b in zip(rest[::2], rest[1::2]):
                inv[a], inv[b] = b, a
        elif toks[0] == "order":
            rest = toks[1:]
            if len(rest) % 2:
                raise ParseError("order needs letter pairs")
            order.extend(zip(rest[::2], rest[1::2]))
        else:
            raise ParseError(f"unknown alphabet clause {toks[0]!r}")
    if letters == ["+", "-"] and inv == {"+": "-", "-": "+"} and not order:
        return _ZIGZAG
    return Alphabet(letters, inv, order)


@dataclass(frozen=True)
class Antichain:
    """Canonical basis of a final segment. Build through ``antichain_normalize``."""

    basis: tuple = ()

    def is_empty(self):
        return not self.basis

    def is_full(self):
        return self.basis == ("",)

    def __str__(self):
        return render(self)


FULL = Antichain(("",))
EMPTY = Antichain(())


def render(A):
    if not A.basis:
        return "{}"
    return "{ " + " , ".join(w if w else "^" for w in A.basis) + " }"


def parse_antichain(text, alph=None):
    """Parse ``{ +-+ , ++ }``; ``{}`` is the empty set and ``^`` the empty word."""
    alph = alph or _ZIGZAG
    s = text.strip()
    if "=" in s.split("{")[0]:
        s = s.split("=", 1)[1].strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ParseError(f"antichain literal must be braced: {text!r}")
    inner = s[1:-1].strip()
    if not inner:
        return EMPTY
    words = []
    for tok in inner.split(","):
        w = tok.strip().replace(" ", "").replace("−", "-")
        if w == "^":
            w = ""
        elif not w:
            raise ParseError(f"empty word in antichain literal {text!r} (use ^)")
        alph.check_word(w)
        words.append(w)
    return antichain_normalize(alph, words)


# order and normal form

def subword_leq(alph, u, v):
    """Higman order: ``u`` embeds letterwise (respecting letter order) into ``v``."""
    return kernels.subword_leq(u, v, alph.above)


def antichain_normalize(alph, words):
    ws = sorted(set(words), key=alph.key)
    keep = []
    for w in ws:
        if not any(subword_leq(alph, u, w) for u in keep):
            keep.append(w)
    if not alph.discrete:
        keep = [w for w in keep if not any(u != w and subword_leq(alph, u, w) for u in keep)]
    return Antichain(tuple(keep))


def contains(alph, A, word):
    """Membership of ``word`` in the final segment ``↑A``."""
    return any(subword_leq(alph, b, word) for b in A.basis)


def segment_leq(alph, P, Q):
    """Algebra order ``P <= Q``, that is ``↑Q ⊆ ↑P``."""
    return all(contains(alph, P, q) for q in Q.basis)


# algebra operations

def up_concat(alph, A, B):
    return antichain_normalize(alph, [a + b for a in A.basis for b in B.basis])


def up_meet(alph, A, B):
    """Algebra meet: the union of the two final segments."""
    return antichain_normalize(alph, A.basis + B.basis)


def up_join(alph, A, B):
    """Algebra join: the intersection, spanned by minimal common superwords."""
    words = []
    for a in A.basis:
        for b in B.basis:
            words.extend(common_superwords(alph, a, b))
    return antichain_normalize(alph, words)


def common_superwords(alph, a, b):
    """Minimal words above both ``a`` and ``b`` (merges sharing comparable letters)."""

    @lru_cache(maxsize=None)
    def merges(i, j):
        if i == len(a):
            return (b[j:],)
        if j == len(b):
            return (a[i:],)
        out = [a[i] + w for w in merges(i + 1, j)]
        out += [b[j] + w for w in merges(i, j + 1)]
        for c in alph.upper_bounds(a[i], b[j]):
            out += [c + w for w in merges(i + 1, j + 1)]
        return antichain_normalize(alph, out).basis

    return merges(0, 0)


def involve(alph, A):
    inv = alph.inv
    return antichain_normalize(alph, ["".join(inv[c] for c in reversed(w)) for w in A.basis])


def residual(alph, V, G, side="left"):
    """Left: least ``R`` with ``V <= R + G``, i.e. ``{u : u g ∈ V for g in G}``.

    Right: least ``R`` with ``V <= G + R``, obtained through the involution.
    """
    if side == "right":
        return involve(alph, residual(alph, involve(alph, V), involve(alph, G), "left"))
    if side != "left":
        raise HMetricError(f"side must be left or right, not {side!r}")
    if G.is_empty():
        return FULL
    d = to_dfa(alph, V)
    targets = frozenset(q for q in range(d.n)
                        if all(d.run(q, g) in d.accepting for g in G.basis))
    return minimal_basis(Dfa(d.letters, d.delta, d.initial, targets).minimize(), alph)


def word_distance(alph, P, Q):
    """Least ``R`` with ``P <= Q + inv R`` and ``Q <= P + R``."""
    return up_join(alph, residual(alph, involve(alph, P), involve(alph, Q), "left"),
                   residual(alph, Q, P, "right"))


# automata

@dataclass(frozen=True)
class Dfa:
    """Complete deterministic automaton; ``delta[q][i]`` reads letter ``letters[i]``."""

    letters: tuple
    delta: tuple
    initial: int
    accepting: frozenset

    @property
    def n(self):
        return len(self.delta)

    def run(self, q, word):
        idx = {c: i for i, c in enumerate(self.letters)}
        for c in word:
            q = self.delta[q][idx[c]]
        return q

    def accepts(self, word):
        return self.run(self.initial, word) in self.accepting

    def reachable(self, start=None):
        start = self.initial if start is None else start
        seen = {start}
        todo = [start]
        while todo:
            q = todo.pop()
            for r in self.delta[q]:
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return seen

    def minimize(self):
        """Partition refinement on reachable states, renumbered in BFS order."""
        reach = sorted(self.reachable())
        block = {q: int(q in self.accepting) for q in reach}
        count = len(set(block.values()))
        while True:
            sig = {q: (block[q],) + tuple(block[r] for r in self.delta[q]) for q in reach}
            ids = {}
            new = {q: ids.setdefault(sig[q], len(ids)) for q in reach}
            if len(ids) == count:
                break
            block, count = new, len(ids)
        order = {block[self.initial]: 0}
        todo = deque([self.initial])
        rep = {block[self.initial]: self.initial}
        while todo:
            q = todo.popleft()
            for r in self.delta[q]:
                b = block[r]
                if b not in order:
                    order[b] = len(order)
                    rep[b] = r
                    todo.append(r)
        inv_order = sorted(order, key=order.get)
        delta = tuple(tuple(order[block[r]] for r in self.delta[rep[b]]) for b in inv_order)
        acc = frozenset(order[b] for b in inv_order if rep[b] in self.accepting)
        return Dfa(self.letters, delta, 0, acc)

    def inclusion(self):
        """``inc[p][q]`` is true when the language from ``p`` is inside the one from ``q``."""
        n = self.n
        inc = [[(p not in self.accepting) or (q in self.accepting) for q in range(n)]
               for p in range(n)]
        changed = True
        while changed:
            changed = False
            for p in range(n):
                for q in range(n):
                    if inc[p][q] and not all(inc[a][b] for a, b in zip(self.delta[p], self.delta[q])):
                        inc[p][q] = False
                        changed = True
        return inc

    def coreachable(self):
        """States from which an accepting state is reachable."""
        back = {q: set() for q in range(self.n)}
        for q, row in enumerate(self.delta):
            for r in row:
                back[r].add(q)
        seen = set(self.accepting)
        todo = list(seen)
        while todo:
            q = todo.pop()
            for p in back[q]:
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
        return seen


def to_dfa(alph, A):
    """Minimal automaton of ``↑A`` built from greedy subword matchers."""
    cached = alph._dfa_cache.get(A)
    if cached is not None:
        return cached
    basis = A.basis
    letters = alph.letters
    if not basis:
        d = Dfa(letters, (tuple(0 for _ in letters),), 0, frozenset())
    elif "" in basis:
        d = Dfa(letters, (tuple(0 for _ in letters),), 0, frozenset({0}))
    else:
        start = tuple(0 for _ in basis)
        ids = {start: 0, "acc": 1}
        rows = {}
        todo = deque([start])
        while todo:
            st = todo.popleft()
            row = []
            for c in letters:
                nxt = tuple(p + 1 if p < len(w) and alph.letter_leq(w[p], c) else p
                            for p, w in zip(st, basis))
                key = "acc" if any(p == len(w) for p, w in zip(nxt, basis)) else nxt
                if key not in ids:
                    ids[key] = len(ids)
                    todo.append(key)
                row.append(ids[key])
            rows[ids[st]] = tuple(row)
        rows[1] = tuple(1 for _ in letters)
        delta = tuple(rows[i] for i in range(len(ids)))
        d = Dfa(letters, delta, 0, frozenset({1})).minimize()
    alph._dfa_cache[A] = d
    return d


def is_upward_closed(dfa, alph):
    """Inserting a letter anywhere, or raising one, never leaves the language."""
    inc = dfa.inclusion()
    idx = {c: i for i, c in enumerate(dfa.letters)}
    for q in dfa.reachable():
        for a in dfa.letters:
            if not inc[q][dfa.delta[q][idx[a]]]:
                return False
        if not alph.discrete:
            for a in dfa.letters:
                for b in dfa.letters:
                    if alph.letter_leq(a, b) and not inc[dfa.delta[q][idx[a]]][dfa.delta[q][idx[b]]]:
                        return False
    return True


def minimal_basis(dfa, alph):
    """Minimal accepted words of an automaton with an upward-closed language.

    A minimal word never visits a state twice (cutting the loop leaves an
    accepted proper subword), so a search over simple paths is exhaustive.
    """
    if not is_upward_closed(dfa, alph):
        raise HMetricError("automaton language is not upward closed")
    live = dfa.coreachable()
    found = []
    path = {dfa.initial}

    def go(q, word):
        if q in dfa.accepting:
            found.append(word)
            return
        for c, r in zip(dfa.letters, dfa.delta[q]):
            if r in live and r not in path:
                path.add(r)
                go(r, word + c)
                path.discard(r)

    if dfa.initial in live:
        go(dfa.initial, "")
    return antichain_normalize(alph, found)


# MacNeille cancellation rule

def cancellation_witness(alph, Z):
    """A pair ``(u, v)`` with ``u+v, u-v ∈ Z`` and ``uv ∉ Z``, or ``None``."""
    if set(alph.letters) != {"+", "-"} or alph.inv.get("+") != "-" or not alph.discrete:
        raise HMetricError("the cancellation test needs the alphabet {+,-} with + and - swapped")
    d = to_dfa(alph, Z)
    ip, im = d.letters.index("+"), d.letters.index("-")
    reach = {d.initial: ""}
    todo = deque([d.initial])
    while todo:
        q = todo.popleft()
        for c, r in zip(d.letters, d.delta[q]):
            if r not in reach:
                reach[r] = reach[q] + c
                todo.append(r)
    parent = {}
    todo = deque()
    for s in sorted(reach):
        t = (d.delta[s][ip], d.delta[s][im], s)
        if t not in parent:
            parent[t] = (None, reach[s])
            todo.append(t)
    while todo:
        t = todo.popleft()
        a, b, c = t
        if a in d.accepting and b in d.accepting and c not in d.accepting:
            v = []
            cur = t
            while parent[cur][0] is not None:
                prev, letter = parent[cur]
                v.append(letter)
                cur = prev
            return parent[cur][1], "".join(reversed(v))
        for i, letter in enumerate(d.letters):
            nt = (d.delta[a][i], d.delta[b][i], d.delta[c][i])
            if nt not in parent:
                parent[nt] = (t, letter)
                todo.append(nt)
    return None


def cancellation_holds(alph, Z):
    return cancellation_witness(alph, Z) is None


class WordAlgebra:
    """The algebra of final segments of ``Λ*`` behind the common algebra interface."""

    finite = False

    def __init__(self, alph=None):
        self.alph = alph or _ZIGZAG
        self.name = "words"
        self.zero = FULL
        self.one = EMPTY
        self._memo = {}

    def __repr__(self):
        return f"WordAlgebra({''.join(self.alph.letters)!r})"

    def _cached(self, key, fn):
        try:
            return self._memo[key]
        except KeyError:
            val = self._memo[key] = fn()
            return val

    def elem(self, token):
        if isinstance(token, Antichain):
            return token
        return parse_antichain(str(token), self.alph)

    def label(self, A):
        return render(A)

    def leq(self, P, Q):
        return segment_leq(self.alph, P, Q)

    def oplus(self, P, Q):
        return self._cached(("+", P, Q), lambda: up_concat(self.alph, P, Q))

    def inv(self, P):
        return self._cached(("~", P), lambda: involve(self.alph, P))

    def join(self, P, Q):
        return self._cached(("v", P, Q), lambda: up_join(self.alph, P, Q))

    def meet(self, P, Q):
        return up_meet(self.alph, P, Q)

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

    def residual_left(self, v, g):
        return self._cached(("rl", v, g), lambda: residual(self.alph, v, g, "left"))

    def residual_right(self, v, g):
        return self._cached(("rr", v, g), lambda: residual(self.alph, v, g, "right"))

    def distance(self, P, Q):
        return self._cached(("d", P, Q), lambda: word_distance(self.alph, P, Q))
