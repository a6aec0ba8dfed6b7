"""Factorization of nonempty final segments into irreducible ones.

The nonempty final segments form a free monoid under concatenation. A
factor boundary shows up in the minimal automaton as a state that every
accepting path crosses.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import networkx as nx

from .errors import CapExceeded, PreconditionError, VerificationError
from .wordlang import (
    FULL, Dfa, contains, is_upward_closed, minimal_basis, residual, to_dfa, up_concat,
)

DIVISOR_WORD_BOUND = 6


@dataclass(frozen=True)
class SeparatorReport:
    dfa: Dfa
    separators: tuple


@dataclass(frozen=True)
class Factorization:
    input: object
    factors: tuple


def _require_nonempty(A):
    if A.is_empty():
        raise PreconditionError("the empty set is not in the free monoid of nonempty final segments")


def _reach(dfa, start, banned=None):
    seen = {start}
    todo = [start]
    while todo:
        q = todo.pop()
        for r in dfa.delta[q]:
            if r not in seen and r != banned:
                seen.add(r)
                todo.append(r)
    return seen


def _check_shape(dfa):
    if len(dfa.accepting) != 1:
        raise VerificationError("minimal automaton should have one accepting state")
    (acc,) = dfa.accepting
    if any(r != acc for r in dfa.delta[acc]):
        raise VerificationError("accepting state should be absorbing")
    if dfa.coreachable() != set(range(dfa.n)):
        raise VerificationError("minimal automaton of a nonempty final segment has a dead state")
    return acc


def separators(alph, A):
    """States other than the endpoints lying on every initial-to-accepting path.

    Sorted by breadth-first distance from the initial state, which is the
    path order since every path meets them all.
    """
    _require_nonempty(A)
    dfa = to_dfa(alph, A)
    if A.is_full():
        return SeparatorReport(dfa, ())
    acc = _check_shape(dfa)
    dist = {dfa.initial: 0}
    todo = deque([dfa.initial])
    while todo:
        q = todo.popleft()
        for r in dfa.delta[q]:
            if r not in dist:
                dist[r] = dist[q] + 1
                todo.append(r)
    seps = [z for z in range(dfa.n) if z not in (dfa.initial, acc)
            and acc not in _reach(dfa, dfa.initial, banned=z)]
    return SeparatorReport(dfa, tuple(sorted(seps, key=dist.get)))


def is_irreducible(alph, A):
    """``True``/``False``, or ``"unit"`` for ``Λ*``."""
    _require_nonempty(A)
    if A.is_full():
        return "unit"
    return not separators(alph, A).separators


def _segment(dfa, start, stop, alph):
    """Words leading from ``start`` to ``stop``, as a final segment.

    States past ``stop`` are merged into it; since the automaton only loops
    on single states, nothing reachable from ``start`` can avoid ``stop``
    and still accept.
    """
    beyond = _reach(dfa, stop)
    before = [q for q in _reach(dfa, start) if q not in beyond]
    ids = {q: i for i, q in enumerate(before)}
    ids.update({q: len(before) for q in beyond})
    dead = len(before) + 1
    delta = [tuple(ids.get(r, dead) for r in dfa.delta[q]) for q in before]
    delta.append(tuple(len(before) for _ in dfa.letters))
    delta.append(tuple(dead for _ in dfa.letters))
    sub = Dfa(dfa.letters, tuple(delta), ids[start], frozenset({len(before)})).minimize()
    if not is_upward_closed(sub, alph):
        raise VerificationError("segment automaton is not upward closed")
    return minimal_basis(sub, alph)


def factorize(alph, A):
    _require_nonempty(A)
    if A.is_full():
        return Factorization(A, ())
    rep = separators(alph, A)
    dfa = rep.dfa
    (acc,) = dfa.accepting
    cuts = (dfa.initial,) + rep.separators + (acc,)
    factors = tuple(_segment(dfa, a, b, alph) for a, b in zip(cuts, cuts[1:]))
    back = FULL
    for f in factors:
        if f.is_full() or is_irreducible(alph, f) is not True:
            raise VerificationError(f"factor {f} is not irreducible")
        back = up_concat(alph, back, f)
    if back != A:
        raise VerificationError("factors do not reassemble the input")
    return Factorization(A, factors)


# brute-force divisors

def _state_languages(alph, A):
    """Intersections of the languages recognised from the states of ``A``'s automaton.

    A set of states is first reduced to its members with inclusion-minimal
    languages, which leaves the intersection unchanged.
    """
    dfa = to_dfa(alph, A)
    inc = dfa.inclusion()

    def reduce(S):
        return frozenset(p for p in S if not any(q != p and inc[q][p] and not inc[p][q] for q in S))

    base = {reduce({q}) for q in range(dfa.n)}
    closure = set(base)
    frontier = list(base)
    while frontier:
        new = []
        for S in frontier:
            for T in base:
                U = reduce(S | T)
                if U not in closure:
                    closure.add(U)
                    new.append(U)
        frontier = new
    return {minimal_basis(_product_dfa(dfa, sorted(S)), alph) for S in closure}


def _product_dfa(dfa, states):
    start = tuple(states)
    ids = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        t = order[i]
        row = []
        for k in range(len(dfa.letters)):
            u = tuple(dfa.delta[q][k] for q in t)
            if u not in ids:
                ids[u] = len(order)
                order.append(u)
            row.append(ids[u])
        delta.append(tuple(row))
        i += 1
    acc = frozenset(ids[t] for t in order if all(q in dfa.accepting for q in t))
    return Dfa(dfa.letters, tuple(delta), 0, acc).minimize()


_ORACLE_CACHE = {}


def divisor_oracle(alph, A, bound=DIVISOR_WORD_BOUND):
    """All pairs ``(B, C)`` with ``B C = A`` whose ``B`` or ``C`` is residual-closed.

    If ``A = B C`` then ``C`` lies below the left residual ``C'`` of ``A`` by
    ``B``, which is an intersection of state languages, and ``B C' = A``;
    symmetrically on the left with right quotients. Candidates come from
    both closures, so a nontrivial divisor exists iff one is listed.
    """
    _require_nonempty(A)
    if any(len(w) > bound for w in A.basis):
        raise CapExceeded(f"basis words longer than {bound}")
    hit = _ORACLE_CACHE.get((alph, A))
    if hit is not None:
        return list(hit)
    from .forms import word_quotient_closure

    pairs = set()
    for C in _state_languages(alph, A) | {FULL}:
        if C.is_empty():
            continue
        B = residual(alph, A, C, "left")
        if up_concat(alph, B, C) == A:
            pairs.add((B, C))
    for B in set(word_quotient_closure(alph, A)) | {FULL}:
        if B.is_empty():
            continue
        C = residual(alph, A, B, "right")
        if up_concat(alph, B, C) == A:
            pairs.add((B, C))
    key = lambda ac: [alph.key(w) for w in ac.basis]
    out = sorted(pairs, key=lambda p: (key(p[0]), key(p[1])))
    _ORACLE_CACHE[(alph, A)] = tuple(out)
    return out


def oracle_irreducible(alph, A):
    return all(B.is_full() or C.is_full() for B, C in divisor_oracle(alph, A))


def all_factorizations(alph, A):
    """Every irreducible factorization reachable by splitting off oracle divisors."""

    @lru_cache(maxsize=None)
    def go(X):
        if X.is_full():
            return frozenset({()})
        out = set()
        for B, C in divisor_oracle(alph, X):
            if B.is_full() or C.is_full():
                continue
            if oracle_irreducible(alph, B):
                out |= {(B,) + rest for rest in go(C)}
        if not out:
            out.add((X,))
        return frozenset(out)

    return go(A)


# envelope cross-check

def envelope_block_path(alg, A, cap=4096):
    """Biconnected blocks of the single-letter graph on ``S_A``; they form a path.

    Returns the block point sets in path order, or ``None`` when the
    envelope exceeds ``cap``.
    """
    from .forms import two_point_envelope

    alph = alg.alph
    _require_nonempty(A)
    try:
        S = two_point_envelope(alg, A, cap)
    except CapExceeded:
        return None
    G = nx.Graph()
    G.add_nodes_from(range(S.n))
    for p in range(S.n):
        for q in range(p + 1, S.n):
            if any(contains(alph, S.dist[p][q], c) for c in alph.letters):
                G.add_edge(p, q)
    blocks = [frozenset(b) for b in nx.biconnected_components(G)]
    cuts = set(nx.articulation_points(G))
    tree = nx.Graph()
    tree.add_nodes_from(range(len(blocks)))
    for i, b in enumerate(blocks):
        for j in range(i + 1, len(blocks)):
            if b & blocks[j]:
                tree.add_edge(i, j)
    if blocks:
        degrees = [d for _, d in tree.degree()]
        if not nx.is_tree(tree) or max(degrees) > 2:
            raise VerificationError("blocks of the envelope graph do not form a path")
        if len(cuts) != len(blocks) - 1:
            raise VerificationError("cut vertices do not separate consecutive blocks")
    depth = nx.single_source_shortest_path_length(G, S.values.index(alg.zero))
    blocks.sort(key=lambda b: min(depth[v] for v in b))
    return [sorted(S.points[v] for v in b) for b in blocks]
