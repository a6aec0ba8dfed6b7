"""Graphs, digraphs, posets and transition systems as metric spaces."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, permutations, product

from .algebra import fence, graph3, digraph5, nat, poset4
from .errors import CapExceeded, HMetricError, PreconditionError
from .metric import MAX_POINTS, MetricSpace
from .wordlang import Dfa, WordAlgebra, contains, minimal_basis, zigzag_alphabet

MAX_DETERMINIZE = 12


@dataclass(frozen=True)
class Digraph:
    vertices: tuple
    arcs: frozenset
    reflexive: bool = True

    def __post_init__(self):
        vs = tuple(str(v) for v in self.vertices)
        if len(set(vs)) != len(vs):
            raise HMetricError("duplicate vertices")
        arcs = frozenset((str(a), str(b)) for a, b in self.arcs)
        bad = [a for a in arcs if a[0] not in vs or a[1] not in vs]
        if bad:
            raise HMetricError(f"arc {bad[0]} uses an unknown vertex")
        if self.reflexive:
            arcs |= {(v, v) for v in vs}
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "arcs", arcs)

    def has(self, a, b):
        return (a, b) in self.arcs

    def is_reflexive(self):
        return all((v, v) in self.arcs for v in self.vertices)

    def is_symmetric(self):
        return all((b, a) in self.arcs for a, b in self.arcs)


def graph(vertices, edges):
    """Undirected reflexive graph as a symmetric digraph."""
    edges = list(edges)
    return Digraph(vertices, {(a, b) for a, b in edges} | {(b, a) for a, b in edges})


@dataclass(frozen=True)
class Poset:
    """Finite poset; ``less`` holds the strict pairs after transitive closure."""

    elements: tuple
    less: frozenset = field(default=frozenset())

    def __post_init__(self):
        els = tuple(str(e) for e in self.elements)
        lt = {(str(a), str(b)) for a, b in self.less}
        if any(a not in els or b not in els for a, b in lt):
            raise HMetricError("order relation uses an unknown element")
        changed = True
        while changed:
            new = {(a, d) for a, b in lt for c, d in lt if b == c} - lt
            lt |= new
            changed = bool(new)
        if any(a == b for a, b in lt):
            raise HMetricError("order relation has a cycle")
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "less", frozenset(lt))

    def leq(self, a, b):
        return a == b or (a, b) in self.less

    def up(self, x):
        return [y for y in self.elements if self.leq(x, y)]

    def down(self, x):
        return [y for y in self.elements if self.leq(y, x)]

    def join(self, a, b):
        ups = [u for u in self.elements if self.leq(a, u) and self.leq(b, u)]
        least = [u for u in ups if all(self.leq(u, w) for w in ups)]
        return least[0] if least else None

    def meet(self, a, b):
        downs = [u for u in self.elements if self.leq(u, a) and self.leq(u, b)]
        top = [u for u in downs if all(self.leq(w, u) for w in downs)]
        return top[0] if top else None

    def is_lattice(self):
        """Finite and nonempty, so lattice means complete lattice."""
        if not self.elements:
            return False
        return all(self.join(a, b) is not None and self.meet(a, b) is not None
                   for a, b in combinations(self.elements, 2))

    def bottom(self):
        low = [x for x in self.elements if all(self.leq(x, y) for y in self.elements)]
        return low[0] if low else None

    def covers(self):
        return sorted((a, b) for a, b in self.less
                      if not any((a, c) in self.less and (c, b) in self.less for c in self.elements))


@dataclass(frozen=True)
class TransitionSystem:
    states: tuple
    alph: object
    transitions: frozenset

    def __post_init__(self):
        states = tuple(str(s) for s in self.states)
        T = frozenset((str(p), a, str(q)) for p, a, q in self.transitions)
        for p, a, q in T:
            if p not in states or q not in states:
                raise HMetricError(f"transition ({p},{a},{q}) uses an unknown state")
            if a not in self.alph.index:
                raise HMetricError(f"transition ({p},{a},{q}) uses an unknown letter")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "transitions", T)

    def violation(self):
        """First failing condition as ``(name, transition)``, or ``None``."""
        T, alph = self.transitions, self.alph
        for x in self.states:
            for a in alph.letters:
                if (x, a, x) not in T:
                    return "reflexive", (x, a, x)
        for p, a, q in sorted(T):
            if (q, alph.inv[a], p) not in T:
                return "involutive", (p, a, q)
            for b in alph.letters:
                if alph.letter_leq(a, b) and (p, b, q) not in T:
                    return "letter-monotone", (p, a, q)
        return None

    def closed(self):
        """Reflexive, involutive and letter-monotone closure."""
        alph, T = self.alph, set(self.transitions)
        T |= {(x, a, x) for x in self.states for a in alph.letters}
        T |= {(q, alph.inv[a], p) for p, a, q in T}
        T |= {(p, b, q) for p, a, q in T for b in alph.letters if alph.letter_leq(a, b)}
        return TransitionSystem(self.states, alph, frozenset(T))


# finite-algebra encodings

def encode_graph(g):
    if not g.is_reflexive():
        raise PreconditionError("graph3 encoding needs a reflexive graph")
    if not g.is_symmetric():
        raise PreconditionError("graph3 encoding needs an undirected graph")
    alg = graph3()
    V = g.vertices

    def d(a, b):
        return "0" if a == b else "1/2" if g.has(a, b) else "1"

    return MetricSpace(alg, V, [[alg.elem(d(a, b)) for b in V] for a in V])


def encode_digraph(g):
    if not g.is_reflexive():
        raise PreconditionError("digraph5 encoding needs a reflexive digraph")
    alg = digraph5()
    V = g.vertices

    def d(a, b):
        if a == b:
            return "0"
        fw, bw = g.has(a, b), g.has(b, a)
        return "1/2" if fw and bw else "+" if fw else "-" if bw else "1"

    return MetricSpace(alg, V, [[alg.elem(d(a, b)) for b in V] for a in V])


def encode_poset(p):
    alg = poset4()
    E = p.elements

    def d(a, b):
        return "0" if a == b else "+" if p.leq(a, b) else "-" if p.leq(b, a) else "1"

    return MetricSpace(alg, E, [[alg.elem(d(a, b)) for b in E] for a in E])


def encode(structure):
    if isinstance(structure, Poset):
        return encode_poset(structure)
    if isinstance(structure, Digraph):
        return encode_graph(structure) if structure.is_symmetric() else encode_digraph(structure)
    raise HMetricError(f"cannot encode {type(structure).__name__}")


def _labels(sp, allowed):
    labs = [[sp.algebra.label(v) for v in row] for row in sp.dist]
    for x in range(sp.n):
        for y in range(sp.n):
            want_zero = x == y
            if (labs[x][y] == "0") != want_zero or labs[x][y] not in allowed:
                raise HMetricError(f"matrix entry at ({sp.points[x]}, {sp.points[y]}) is not valid")
    return labs


def decode(sp):
    """Inverse of ``encode`` for spaces over graph3, digraph5 or poset4."""
    name = sp.algebra.name
    P = sp.points
    if name == "graph3":
        labs = _labels(sp, {"0", "1/2", "1"})
        return graph(P, [(P[x], P[y]) for x in range(sp.n) for y in range(sp.n)
                         if labs[x][y] == "1/2"])
    if name == "digraph5":
        labs = _labels(sp, {"0", "1/2", "+", "-", "1"})
        return Digraph(P, {(P[x], P[y]) for x in range(sp.n) for y in range(sp.n)
                           if labs[x][y] in ("1/2", "+")})
    if name == "poset4":
        labs = _labels(sp, {"0", "+", "-", "1"})
        p = Poset(P, {(P[x], P[y]) for x in range(sp.n) for y in range(sp.n) if labs[x][y] == "+"})
        if encode_poset(p).dist != sp.dist:
            raise HMetricError("matrix is not the encoding of a poset")
        return p
    raise HMetricError(f"no decoding for spaces over {name}")


# path distances

def graphic_distance(g, k):
    """Shortest-path lengths over ``nat(k)``; longer or missing paths become ``inf``."""
    alg = nat(k)
    V = g.vertices
    adj = {v: [b for a, b in g.arcs if a == v] for v in V}
    rows = []
    for s in V:
        dist = {s: 0}
        todo = deque([s])
        while todo:
            v = todo.popleft()
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    todo.append(w)
        rows.append([alg.elem(str(dist[t])) if dist.get(t, k + 1) <= k else alg.elem("inf")
                     for t in V])
    return MetricSpace(alg, V, rows)


def fence_lengths(p, x, y):
    """Shortest up-fence and down-fence from ``x`` to ``y`` (``None`` if absent).

    Steps alternate between going up and going down; a step may stay put,
    so fence images need not be injective.
    """
    if x == y:
        return 0, 0
    out = []
    for first_up in (True, False):
        seen = {(x, first_up): 0}
        todo = deque([(x, first_up)])
        found = None
        while todo and found is None:
            v, up = todo.popleft()
            steps = seen[(v, up)]
            for w in (p.up(v) if up else p.down(v)):
                if w == y:
                    found = steps + 1
                    break
                key = (w, not up)
                if key not in seen:
                    seen[key] = steps + 1
                    todo.append(key)
        out.append(found)
    return tuple(out)


def fence_space(p, k):
    """Fence distance over ``fence(k)``; pairs whose shorter fence exceeds ``k`` go to ``inf``."""
    alg = fence(k)
    E = p.elements
    rows = []
    for x in E:
        row = []
        for y in E:
            n, m = fence_lengths(p, x, y)
            if n is None or min(n, m) > k:
                row.append(alg.elem("inf"))
            elif (n, m) == (0, 0):
                row.append(alg.zero)
            else:
                row.append(alg.elem(f"({min(n, m + 1)},{min(m, n + 1)})"))
        rows.append(row)
    return MetricSpace(alg, E, rows)


# automaton distances

def _nfa_language(states, letters, step, x, y, alph):
    """Minimal basis of the words leading from ``x`` to ``y``, via subset construction."""
    start = frozenset({x})
    ids = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        S = order[i]
        row = []
        for a in letters:
            T = frozenset(q for s in S for q in step[s][a])
            if T not in ids:
                ids[T] = len(order)
                order.append(T)
            row.append(ids[T])
        delta.append(tuple(row))
        i += 1
    acc = frozenset(ids[S] for S in order if y in S)
    return minimal_basis(Dfa(tuple(letters), tuple(delta), 0, acc).minimize(), alph)


def ts_space(m, alg=None):
    """``d(x, y)`` is the final segment accepted by ``(M, {x}, {y})``."""
    bad = m.violation()
    if bad:
        raise PreconditionError(f"transition system is not {bad[0]}", witness=list(bad[1]))
    if len(m.states) > MAX_DETERMINIZE:
        raise CapExceeded(f"determinization is limited to {MAX_DETERMINIZE} states")
    alph = m.alph
    alg = alg or WordAlgebra(alph)
    step = {s: {a: set() for a in alph.letters} for s in m.states}
    for p, a, q in m.transitions:
        step[p][a].add(q)
    rows = [[_nfa_language(m.states, alph.letters, step, x, y, alph) for y in m.states]
            for x in m.states]
    return MetricSpace(alg, m.states, rows, max_points=max(MAX_POINTS, len(m.states)))


def digraph_system(g):
    """``(p,+,q)`` for arcs ``p -> q`` and ``(p,-,q)`` for arcs ``q -> p``."""
    T = {(a, "+", b) for a, b in g.arcs} | {(b, "-", a) for a, b in g.arcs}
    return TransitionSystem(g.vertices, zigzag_alphabet(), frozenset(T))


def zigzag_space(g, alg=None):
    if not g.is_reflexive():
        raise PreconditionError("zigzag distance needs a reflexive digraph")
    return ts_space(digraph_system(g), alg)


def zigzag_of_word(u):
    """The oriented zigzag ``L_u`` on ``0..n``: ``+`` at i is the arc i -> i+1."""
    arcs = [(i, i + 1) if c == "+" else (i + 1, i) for i, c in enumerate(u)]
    if any(c not in "+-" for c in u):
        raise HMetricError("zigzag words use + and -")
    return Digraph(range(len(u) + 1), arcs)


def word_of_zigzag(g):
    """``ev(L)`` for an oriented zigzag on vertices in path order."""
    V = g.vertices
    out = []
    for a, b in zip(V, V[1:]):
        fw, bw = g.has(a, b), g.has(b, a)
        if fw == bw:
            raise HMetricError("not an oriented zigzag in vertex order")
        out.append("+" if fw else "-")
    return "".join(out)


@dataclass
class ConnexityReport:
    holds: bool
    witness: tuple = ()
    roundtrip: bool | None = None


def check_connexity(sp):
    """Every split ``uv`` of a basis word of ``d(x,y)`` has a midpoint ``z``.

    Splitting basis words is enough: a split of a longer word refines a
    split of some basis word and final segments are upward closed.
    """
    alg = sp.algebra
    alph = alg.alph
    for x in range(sp.n):
        for y in range(sp.n):
            for w in sp.dist[x][y].basis:
                for i in range(len(w) + 1):
                    u, v = w[:i], w[i:]
                    if not any(contains(alph, sp.dist[x][z], u) and contains(alph, sp.dist[z][y], v)
                               for z in range(sp.n)):
                        return ConnexityReport(False, (sp.points[x], sp.points[y], u, v))
    rt = None
    if alph is zigzag_alphabet():
        P = sp.points
        g = Digraph(P, {(P[x], P[y]) for x in range(sp.n) for y in range(sp.n)
                        if contains(alph, sp.dist[x][y], "+")})
        rt = zigzag_space(g, alg).dist == sp.dist
    return ConnexityReport(True, (), rt)


def zigzag_oracle(g, x, y, max_len):
    """Words of length ``<= max_len`` labelling a walk from ``x`` to ``y``.

    A zigzag morphism sends consecutive vertices of ``L_u`` to an arc (or a
    loop) in the right direction, so the set of reachable images after each
    letter is propagated word by word.
    """
    words = []
    layer = {"": frozenset({x})}
    for length in range(max_len + 1):
        words += [w for w, S in layer.items() if y in S]
        if length == max_len:
            break
        nxt = {}
        for w, S in layer.items():
            for c in "+-":
                if c == "+":
                    T = frozenset(b for a, b in g.arcs if a in S)
                else:
                    T = frozenset(a for a, b in g.arcs if b in S)
                nxt[w + c] = T
        layer = nxt
    return words


# poset enumeration

def _canonical(n, rel):
    best = None
    for perm in permutations(range(n)):
        key = tuple(sorted((perm[a], perm[b]) for a, b in rel))
        if best is None or key < best:
            best = key
    return best


def posets_up_to_iso(n):
    """One representative per isomorphism class of posets on ``n`` elements.

    Every poset has a natural labelling, so strict relations inside
    ``{(i, j) : i < j}`` that are transitively closed cover all classes.
    """
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    out = []
    for bits in product((0, 1), repeat=len(pairs)):
        rel = {p for p, b in zip(pairs, bits) if b}
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2):
            continue
        key = _canonical(n, rel)
        if key in seen:
            continue
        seen.add(key)
        names = [chr(ord("a") + i) for i in range(n)]
        out.append(Poset(names, {(names[a], names[b]) for a, b in key}))
    return out


# inspection

def to_dot(g, name="G"):
    if isinstance(g, Poset):
        lines = [f"digraph {name} {{"] + [f'  "{a}" -> "{b}";' for a, b in g.covers()]
        lines += [f'  "{v}";' for v in g.elements]
        return "\n".join(lines + ["}"]) + "\n"
    lines = [f"digraph {name} {{"]
    lines += [f'  "{v}";' for v in g.vertices]
    lines += [f'  "{a}" -> "{b}";' for a, b in sorted(g.arcs) if a != b]
    return "\n".join(lines + ["}"]) + "\n"
