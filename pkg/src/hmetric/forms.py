"""Metric forms, injective envelopes, hyperconvexity and two-point envelopes."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import kernels
from .errors import CapExceeded, HMetricError, VerificationError
from .metric import ENUM_CAP, MetricSpace, PointMap, is_hole_preserving, map_check
from .wordlang import Dfa, minimal_basis, render, to_dfa


@dataclass(frozen=True)
class MetricForm:
    values: tuple
    kind: str


@dataclass
class Verdict:
    """A yes/no answer with a witness when the answer is no."""

    value: bool
    witness: object = None
    method: str = ""

    def __bool__(self):
        return self.value


def _check_finite(sp):
    if not sp.algebra.finite:
        raise HMetricError("this operation needs a finite algebra")


def _cap(sp, cap):
    size = sp.algebra.n ** sp.n
    if size > cap:
        raise CapExceeded(f"|H|^|E| = {size} exceeds the enumeration cap {cap}")


def is_weak(sp, f):
    alg, d = sp.algebra, sp.dist
    return all(alg.leq(d[x][y], alg.oplus(f[x], alg.inv(f[y])))
               for x in range(sp.n) for y in range(sp.n))


def is_strong(sp, f):
    alg, d = sp.algebra, sp.dist
    return is_weak(sp, f) and all(alg.leq(f[x], alg.oplus(d[x][y], f[y]))
                                  for x in range(sp.n) for y in range(sp.n))


def classify_form(sp, f):
    """``strong``, ``weak`` or ``none``. Minimality is tested by ``is_minimal_form``."""
    f = tuple(f)
    if len(f) != sp.n:
        raise HMetricError("a form assigns a value to every point")
    if is_strong(sp, f):
        alg = sp.algebra
        # equivalent criterion: d_H(d(x,y), f(x)) <= f(y)
        if not all(alg.leq(alg.distance(sp.dist[x][y], f[x]), f[y])
                   for x in range(sp.n) for y in range(sp.n)):
            raise VerificationError("strong-form criteria disagree")
        return "strong"
    if is_weak(sp, f):
        return "weak"
    return "none"


def form_floor(sp, f):
    """``f_M(x) = ⋀_y d(x, y) + f(y)``: the largest strong form below a weak one."""
    if not is_weak(sp, f):
        raise HMetricError("form_floor needs a weak form")
    alg = sp.algebra
    return tuple(alg.meet_all(alg.oplus(sp.dist[x][y], f[y]) for y in range(sp.n))
                 for x in range(sp.n))


def delta_bar(sp, u):
    """``δ̄(u) = d(·, u)``."""
    return tuple(sp.dist[x][u] for x in range(sp.n))


def forms(sp, strong=True, cap=ENUM_CAP):
    _check_finite(sp)
    _cap(sp, cap)
    alg = sp.algebra
    return kernels.enum_forms(sp.table, alg.oplus_array, alg.leq_array, alg.inv_array, strong, cap)


def minimal_forms(sp, cap=ENUM_CAP):
    fs = forms(sp, True, cap)
    keep = kernels.minimal_rows(fs, sp.algebra.leq_array)
    return [fs[i] for i in keep]


def is_minimal_form(sp, f, cap=ENUM_CAP):
    return tuple(f) in set(minimal_forms(sp, cap))


def sup_distance(alg, f, g):
    return alg.join_all(alg.distance(a, b) for a, b in zip(f, g))


def _form_space(sp, fs):
    alg = sp.algebra
    names = ["[" + ",".join(alg.label(v) for v in f) + "]" for f in fs]
    dist = [[sup_distance(alg, f, g) for g in fs] for f in fs]
    return MetricSpace(alg, names, dist, max_points=max(len(fs), 1))


def _ball_intersection(sp, f):
    acc = (1 << sp.n) - 1
    for x in range(sp.n):
        acc &= sp.ball_masks[x][f[x]]
    return acc


# hyperconvexity

def is_convex(sp):
    """For ``d(x,y) <= p + q`` some ``z`` has ``d(x,z) <= p`` and ``d(z,y) <= q``.

    Only the least admissible ``q`` needs checking since the condition is
    monotone in ``q``; ``d(z, y) <= q`` is ``z ∈ B(y, inv q)``.
    """
    _check_finite(sp)
    alg, bm = sp.algebra, sp.ball_masks
    for x in range(sp.n):
        for y in range(sp.n):
            for p in alg.elements:
                q = alg.residual_right(sp.dist[x][y], p)
                if not bm[x][p] & bm[y][alg.inv(q)]:
                    f = [alg.one] * sp.n
                    f[x] = alg.meet(f[x], p)
                    f[y] = alg.meet(f[y], alg.inv(q))
                    return Verdict(False, tuple(f), "convexity")
    return Verdict(True, None, "convexity")


def distinct_balls(sp):
    """``(mask, [(centre, radius), ...])`` for every distinct ball, in first-seen order."""
    seen = {}
    for x in range(sp.n):
        for r in sp.algebra.elements:
            seen.setdefault(sp.ball_masks[x][r], []).append((x, r))
    return list(seen.items())


def helly2(sp, anchors=None):
    """Pairwise-intersecting ball families always have a common point.

    ``anchors`` may restrict the outside point of the search to orbit
    representatives when the space has a transitive isometry group.
    """
    _check_finite(sp)
    balls = distinct_balls(sp)
    masks = [m for m, _ in balls]
    hit = kernels.helly2_violation(masks, sp.n, anchors)
    if hit is None:
        return Verdict(True, None, "2-helly")
    b, t = hit
    mb = masks[b]
    family = [balls[b][1][0]] + [balls[c][1][0] for c, m in enumerate(masks)
                                  if (m >> t) & 1 and m & mb]
    alg = sp.algebra
    f = [alg.one] * sp.n
    for x, r in family:
        f[x] = alg.meet(f[x], r)
    if _ball_intersection(sp, f) or not is_weak(sp, f):
        raise VerificationError("2-Helly witness is not a weak form with empty intersection")
    return Verdict(False, tuple(f), "2-helly")


def hyperconvex_by_forms(sp, cap=ENUM_CAP):
    """Every strong form has a nonempty ball intersection (equivalently every weak one)."""
    for f in forms(sp, True, cap):
        if not _ball_intersection(sp, f):
            return Verdict(False, f, "forms")
    return Verdict(True, None, "forms")


def is_hyperconvex(sp, method="auto", cap=ENUM_CAP):
    """Decide hyperconvexity; the witness is a weak form whose balls miss each other.

    ``forms`` scans all strong forms. ``helly`` uses convexity plus the
    2-Helly property, which is equivalent and avoids enumerating
    ``|H|^|E|`` vectors; ``auto`` picks forms when that count is within
    ``cap``.
    """
    _check_finite(sp)
    if method == "auto":
        method = "forms" if sp.algebra.n ** sp.n <= cap else "helly"
    if method == "forms":
        return hyperconvex_by_forms(sp, cap)
    if method != "helly":
        raise HMetricError(f"unknown method {method!r}")
    v = is_convex(sp)
    if not v:
        return v
    return helly2(sp)


# envelopes

def injective_envelope(sp, cap=ENUM_CAP, verify=True):
    """The space ``N(E)`` of minimal forms and the embedding ``δ̄``.

    Verifies that ``δ̄`` is an isometry onto minimal forms, that ``N(E)`` is
    hyperconvex, and that the only nonexpansive self-map of ``N(E)`` fixing
    ``δ̄(E)`` is the identity.
    """
    fs = minimal_forms(sp, cap)
    env = _form_space(sp, fs)
    pos = {f: i for i, f in enumerate(fs)}
    try:
        images = tuple(pos[delta_bar(sp, u)] for u in range(sp.n))
    except KeyError:
        raise VerificationError("some δ̄(u) is not a minimal form") from None
    emb = PointMap(sp, env, images)
    if verify:
        if map_check(emb) != "isometry":
            raise VerificationError("δ̄ is not an isometry")
        if not is_hyperconvex(env, cap=cap):
            raise VerificationError("the envelope is not hyperconvex")
        if fixing_maps(env, images, limit=2) != [tuple(range(env.n))]:
            raise VerificationError("a self-map fixing E is not the identity")
    return env, emb


def fixing_maps(sp, fixed_points, limit=ENUM_CAP):
    """Nonexpansive self-maps of ``sp`` fixing ``fixed_points`` pointwise."""
    alg = sp.algebra
    fixed = [-1] * sp.n
    for u in fixed_points:
        fixed[u] = u
    return kernels.enum_maps(sp.table, sp.table, alg.leq_array, fixed, limit)[:limit]


def replete_space(sp, cap=ENUM_CAP):
    """Strong forms whose balls meet, with the sup-distance, and ``δ̄`` into it.

    Checks that ``δ̄`` is hole-preserving and that ``h -> (d(δ̄(x), h))_x`` is
    the identity on the result (the canonical retraction).
    """
    alg = sp.algebra
    fs = [f for f in forms(sp, True, cap) if _ball_intersection(sp, f)]
    rep = _form_space(sp, fs)
    pos = {f: i for i, f in enumerate(fs)}
    emb = PointMap(sp, rep, tuple(pos[delta_bar(sp, u)] for u in range(sp.n)))
    if map_check(emb) != "isometry" or not is_hole_preserving(emb, cap):
        raise VerificationError("δ̄ into the replete space is not hole-preserving")
    for i, h in enumerate(fs):
        back = tuple(rep.dist[emb.images[x]][i] for x in range(sp.n))
        if back != h:
            raise VerificationError("canonical retraction of the replete space is not the identity")
    return rep, emb


def two_point_envelope(alg, v, cap=4096):
    """``S_v = {⌈v − β⌉ : β}`` with ``d_H``; endpoints are ``0`` and ``v``."""
    if alg.finite:
        vals = sorted({alg.residual_left(v, b) for b in alg.elements}, key=alg.topo.index)
        return MetricSpace(alg, [alg.label(x) for x in vals],
                           [[alg.distance(a, b) for b in vals] for a in vals])
    vals = word_quotient_closure(alg.alph, v, cap)
    names = [render(a).replace(" ", "") for a in vals]
    sp = MetricSpace(alg, names, [[alg.distance(a, b) for b in vals] for a in vals],
                     max_points=cap)
    sp.values = vals
    zero, top = vals.index(alg.zero), vals.index(v)
    if sp.dist[zero][top] != v:
        raise VerificationError("S_F endpoints are not at distance F")
    return sp


def word_quotient_closure(alph, F, cap=4096):
    """All intersections of right quotients ``F g⁻¹``, as final segments.

    ``F g⁻¹`` is recognised by the automaton of ``F`` with accepting set
    ``{q : q·g accepting}``; these sets are preimages of the accepting set
    under words, so a breadth-first search over letter preimages finds them.
    """
    d = to_dfa(alph, F)
    start = frozenset(d.accepting)
    seen = {start}
    todo = deque([start])
    while todo:
        S = todo.popleft()
        for i in range(len(d.letters)):
            T = frozenset(q for q in range(d.n) if d.delta[q][i] in S)
            if T not in seen:
                seen.add(T)
                todo.append(T)
    closure = set(seen) | {frozenset(range(d.n))}
    frontier = list(closure)
    while frontier:
        new = []
        for S in frontier:
            for T in seen:
                U = S & T
                if U not in closure:
                    closure.add(U)
                    new.append(U)
                    if len(closure) > cap:
                        raise CapExceeded("quotient closure exceeds its cap")
        frontier = new
    vals = {minimal_basis(Dfa(d.letters, d.delta, d.initial, S).minimize(), alph)
            for S in closure}
    return sorted(vals, key=lambda a: (len(a.basis) == 0, [alph.key(w) for w in a.basis]))


def glue(sp1, a, sp2, b):
    """Identify point ``a`` of ``sp1`` with ``b`` of ``sp2``; distances pass through it."""
    alg = sp1.algebra
    keep2 = [y for y in range(sp2.n) if y != b]
    pts = [("L", x) for x in range(sp1.n)] + [("R", y) for y in keep2]
    names = [f"L{sp1.points[x]}" for x in range(sp1.n)] + [f"R{sp2.points[y]}" for y in keep2]

    def dist(p, q):
        (s, x), (t, y) = p, q
        if s == t:
            return sp1.dist[x][y] if s == "L" else sp2.dist[x][y]
        if s == "L":
            return alg.oplus(sp1.dist[x][a], sp2.dist[b][y])
        return alg.oplus(sp2.dist[x][b], sp1.dist[a][y])

    return MetricSpace(alg, names, [[dist(p, q) for q in pts] for p in pts],
                       max_points=len(pts))
