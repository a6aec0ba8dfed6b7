"""Fixed points of nonexpansive maps, ball hulls and order-theoretic solvers.

Point sets are bit masks over point indices; a map is the tuple of images.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import gcd

from .algebra import divisors, inaccessible_set
from .errors import CapExceeded, HMetricError, PreconditionError, VerificationError
from .forms import helly2, is_hyperconvex
from .metric import MetricSpace, is_nonexpansive, is_one_local_retract

CLOSURE_CAP = 200_000
GAP_BOUND = 3


def _members(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _mask(points):
    m = 0
    for p in points:
        m |= 1 << p
    return m


@dataclass(frozen=True)
class BallHull:
    points: tuple
    is_intersection_of_balls: bool
    balls: tuple = ()


@dataclass(frozen=True)
class Geometry:
    diameter: object
    radius: object
    center: tuple
    cover: tuple


def diameter(sp, A):
    return sp.algebra.join_all(sp.dist[x][y] for x in A for y in A)


def radius(sp, A):
    """``r(A)``: meet over ``x ∈ A`` of the least radius around ``x`` covering ``A``."""
    alg = sp.algebra
    return alg.meet_all(alg.join_all(sp.dist[x][a] for a in A) for x in A)


def cover(sp, A):
    """``Cov(A)``: intersection of all balls containing ``A``, with its defining balls."""
    alg = sp.algebra
    balls = [(x, alg.join_all(sp.dist[x][a] for a in A)) for x in range(sp.n)]
    acc = (1 << sp.n) - 1
    for x, r in balls:
        acc &= sp.ball_masks[x][r]
    return BallHull(tuple(_members(acc)), True, tuple(balls))


def geometry(sp, A):
    A = sorted(set(A))
    if not A:
        raise HMetricError("geometry needs a nonempty point set")
    alg = sp.algebra
    r = radius(sp, A)
    center = tuple(x for x in range(sp.n) if all(alg.leq(sp.dist[x][a], r) for a in A))
    return Geometry(diameter(sp, A), r, center, cover(sp, A).points)


def equally_centered(sp, A):
    return radius(sp, A) == diameter(sp, A)


def is_bounded_space(sp):
    """Only ``0`` is inaccessible below the diameter."""
    alg = sp.algebra
    delta = diameter(sp, range(sp.n))
    return all(v == alg.zero or not alg.leq(v, delta) for v in inaccessible_set(alg))


def ball_closure(sp, cap=CLOSURE_CAP):
    """Nonempty intersections of balls, as masks in increasing order."""
    base = {m for row in sp.ball_masks for m in row}
    closure = set(base)
    frontier = list(base)
    while frontier:
        new = []
        for S in frontier:
            for T in base:
                U = S & T
                if U and U not in closure:
                    closure.add(U)
                    new.append(U)
                    if len(closure) > cap:
                        raise CapExceeded(f"ball intersection closure exceeds {cap}")
        frontier = new
    closure.discard(0)
    return sorted(closure, key=lambda m: (bin(m).count("1"), m))


@dataclass
class StructureReport:
    diameter: object
    is_bounded: bool
    has_fip: bool
    has_normal_structure: bool
    hulls: list = field(default_factory=list)
    witness: tuple = ()


def structure_report(sp, cap=CLOSURE_CAP):
    """Compact and normal structure over the closure of balls under intersection.

    Normality reads ``r(A) < δ(A)`` as ``r(A) <= δ(A)`` and ``r(A) != δ(A)``.
    """
    alg = sp.algebra
    hulls = []
    normal, witness = True, ()
    closure = ball_closure(sp, cap)
    for m in closure:
        A = _members(m)
        d, r = diameter(sp, A), radius(sp, A)
        hulls.append((tuple(A), d, r))
        if len(A) > 1 and not (alg.leq(r, d) and r != d) and normal:
            normal, witness = False, tuple(sp.points[a] for a in A)
    # a finite family with the f.i.p. meets in its own intersection, which
    # the closure records; every member must therefore be nonempty
    fip = all(closure)
    return StructureReport(diameter(sp, range(sp.n)), is_bounded_space(sp), fip, normal,
                           hulls, witness)


def _image_mask(f, m):
    return _mask(f[x] for x in _members(m))


def minimal_invariant(sp, f, cap=CLOSURE_CAP):
    """A smallest nonempty intersection of balls mapped into itself by ``f``.

    Checks that it is the cover of its image and that it is equally centred.
    """
    f = tuple(f)
    for m in ball_closure(sp, cap):
        if _image_mask(f, m) & ~m:
            continue
        A = _members(m)
        hull = cover(sp, [f[a] for a in A])
        if _mask(hull.points) != m:
            raise VerificationError("a minimal invariant hull is not the cover of its image")
        if not equally_centered(sp, A):
            raise VerificationError("a minimal invariant hull is not equally centred")
        return BallHull(tuple(A), True, hull.balls)
    raise VerificationError("no invariant intersection of balls, the whole space should be one")


def fixed_points(f):
    return tuple(x for x, y in enumerate(f) if x == y)


@dataclass
class FixedPoint:
    point: int
    fixed: tuple
    reason: str


def establish(sp, cap=CLOSURE_CAP):
    """Which hypothesis guarantees fixed points: ``bounded-hyperconvex`` or ``normal``."""
    bounded = is_bounded_space(sp)
    if bounded and is_hyperconvex(sp, cap=cap):
        return "bounded-hyperconvex", ()
    rep = structure_report(sp, cap)
    if rep.has_fip and rep.has_normal_structure:
        return "normal", ()
    if not bounded:
        return None, ("not bounded; not normal", list(rep.witness))
    return None, ("not hyperconvex; not normal", list(rep.witness))


def fixed_point(sp, f, cap=CLOSURE_CAP):
    f = tuple(f)
    if len(f) != sp.n or not is_nonexpansive(sp, f):
        bad = _expansion_witness(sp, f)
        raise PreconditionError("map is not nonexpansive", witness=bad)
    reason, why = establish(sp, cap)
    if reason is None:
        raise PreconditionError(why[0], witness=why[1])
    hull = minimal_invariant(sp, f, cap)
    if len(hull.points) != 1:
        raise VerificationError("normality should force a singleton invariant hull")
    p = hull.points[0]
    fix = fixed_points(f)
    if f[p] != p or not fix:
        raise VerificationError("descent did not reach a fixed point")
    if not is_one_local_retract(sp, fix):
        raise VerificationError("Fix(f) is not a one-local retract")
    if reason == "bounded-hyperconvex" and not is_hyperconvex(sp.subspace(fix), cap=cap):
        raise VerificationError("Fix(f) is not hyperconvex")
    return FixedPoint(p, fix, reason)


def _expansion_witness(sp, f):
    if len(f) != sp.n:
        return ["length", len(f)]
    for x in range(sp.n):
        for y in range(sp.n):
            if not sp.algebra.leq(sp.dist[f[x]][f[y]], sp.dist[x][y]):
                return [sp.points[x], sp.points[y]]
    return []


def commute_witness(maps):
    for i, j in combinations(range(len(maps)), 2):
        f, g = maps[i], maps[j]
        for x in range(len(f)):
            if f[g[x]] != g[f[x]]:
                return i, j, x
    return None


def common_fixed_point(sp, maps, cap=CLOSURE_CAP):
    """Restrict to ``Fix(f)`` one map at a time; each stage must stay normal and a retract."""
    maps = [tuple(m) for m in maps]
    if not maps:
        raise HMetricError("empty family")
    bad = commute_witness(maps)
    if bad:
        i, j, x = bad
        raise PreconditionError("maps do not commute", witness=[i, j, sp.points[x]])
    current = list(range(sp.n))
    for f in maps:
        sub = sp.subspace(current)
        pos = {p: k for k, p in enumerate(current)}
        g = tuple(pos[f[p]] for p in current)
        res = fixed_point(sub, g, cap)
        current = [current[k] for k in res.fixed]
        if not is_one_local_retract(sp, current):
            raise VerificationError("a partial fixed set is not a one-local retract")
    common = tuple(x for x in range(sp.n) if all(f[x] == x for f in maps))
    if tuple(current) != common:
        raise VerificationError("iterated fixed sets disagree with the common fixed set")
    return FixedPoint(common[0], common, "iterated")


# order-theoretic solvers

def _as_map(poset, f):
    if isinstance(f, dict):
        return {str(k): str(v) for k, v in f.items()}
    E = poset.elements
    return {x: E[y] if isinstance(y, int) else str(y) for x, y in zip(E, f)}


def monotone_witness(poset, f):
    for a in poset.elements:
        for b in poset.elements:
            if poset.leq(a, b) and not poset.leq(f[a], f[b]):
                return a, b
    return None


def _check_monotone(poset, f):
    bad = monotone_witness(poset, f)
    if bad:
        raise PreconditionError("map is not order-preserving", witness=list(bad))


def tarski(poset, f):
    """Least fixed point by iteration from the bottom, and all fixed points by scan."""
    f = _as_map(poset, f)
    _check_monotone(poset, f)
    if not poset.is_lattice():
        raise PreconditionError("not a lattice", witness=[])
    x = poset.bottom()
    for _ in range(len(poset.elements) + 1):
        if f[x] == x:
            break
        x = f[x]
    else:
        raise VerificationError("iteration from the bottom did not stabilise")
    fixes = [y for y in poset.elements if f[y] == y]
    if not all(poset.leq(x, y) for y in fixes):
        raise VerificationError("iterated fixed point is not the least one")
    return x, fixes


def abian_brown(poset, f, start):
    f = _as_map(poset, f)
    _check_monotone(poset, f)
    start = str(start)
    if not poset.leq(start, f[start]):
        raise PreconditionError("start must lie below its image", witness=[start, f[start]])
    x = start
    for _ in range(len(poset.elements) + 1):
        if f[x] == x:
            return x
        x = f[x]
    raise VerificationError("ascending iteration did not stabilise")


def monotone_maps(poset):
    """Every order-preserving self-map, as dicts, by backtracking."""
    E = poset.elements
    out = []

    def go(i, img):
        if i == len(E):
            out.append(dict(zip(E, img)))
            return
        for y in E:
            if all((not poset.leq(E[j], E[i]) or poset.leq(img[j], y))
                   and (not poset.leq(E[i], E[j]) or poset.leq(y, img[j])) for j in range(i)):
                go(i + 1, img + [y])

    go(0, [])
    return out


def find_gaps(poset, bound=GAP_BOUND):
    """Pairs ``(A, B)`` with ``A`` below ``B`` and nothing in between, ``|A|, |B| <= bound``."""
    E = poset.elements
    subsets = [c for k in range(bound + 1) for c in combinations(E, k)]
    gaps = []
    for A, B in product(subsets, subsets):
        if not all(poset.leq(a, b) for a in A for b in B):
            continue
        if not any(all(poset.leq(a, c) for a in A) and all(poset.leq(c, b) for b in B) for c in E):
            gaps.append((A, B))
    return gaps


# Chinese remainder theorem as 2-Helly

def crt_space(n):
    """``Z_n`` with ``d(x, y) = gcd(x - y, n)`` over ``divisors(n)``; balls are congruence classes."""
    alg = divisors(n)
    return MetricSpace(alg, [str(i) for i in range(n)],
                       [[alg.elem(str(gcd(x - y, n))) for y in range(n)] for x in range(n)],
                       max_points=n)


def crt_helly(n):
    """Translations act transitively by isometries, so the outside point may be ``0``."""
    return helly2(crt_space(n), anchors=[0])
