"""Finite metric spaces over an algebra: axioms, balls, products, maps, holes.

Points are addressed by their index in ``space.points``; point ids are the
strings used in files. Distances are algebra elements (ints for finite
algebras, antichains for the word algebra).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from . import kernels
from .algebra import LawReport
from .errors import CapExceeded, HMetricError, VerificationError

MAX_POINTS = 64
PRODUCT_CAP = 4096
ENUM_CAP = 10**6


class MetricSpace:
    def __init__(self, algebra, points, dist, max_points=MAX_POINTS):
        self.algebra = algebra
        self.points = tuple(str(p) for p in points)
        self.n = len(self.points)
        if self.n > max_points:
            raise CapExceeded(f"{self.n} points exceed the cap of {max_points}")
        if len(set(self.points)) != self.n:
            raise HMetricError("duplicate point ids")
        self.dist = tuple(tuple(row) for row in dist)
        if len(self.dist) != self.n or any(len(r) != self.n for r in self.dist):
            raise HMetricError("distance matrix shape does not match the points")
        self._index = {p: i for i, p in enumerate(self.points)}

    def __repr__(self):
        return f"MetricSpace({self.n} points over {self.algebra.name})"

    def index(self, p):
        if isinstance(p, (int, np.integer)) and not isinstance(p, bool):
            return int(p)
        try:
            return self._index[str(p)]
        except KeyError:
            raise HMetricError(f"unknown point {p!r}") from None

    def d(self, x, y):
        return self.dist[x][y]

    @property
    def finite(self):
        return self.algebra.finite

    @cached_property
    def table(self):
        if not self.finite:
            raise HMetricError("integer tables exist only over finite algebras")
        return np.array(self.dist, dtype=np.int32).reshape(self.n, self.n)

    @cached_property
    def ball_masks(self):
        """``ball_masks[x][r]``: bit mask of ``B(x, r)`` for every element ``r``."""
        alg = self.algebra
        le = alg._le
        return [[sum(1 << y for y in range(self.n) if le[self.dist[x][y]][r])
                 for r in alg.elements] for x in range(self.n)]

    def subspace(self, indices):
        idx = list(indices)
        return MetricSpace(self.algebra, [self.points[i] for i in idx],
                           [[self.dist[i][j] for j in idx] for i in idx])

    def diameter(self):
        return self.algebra.join_all(self.dist[x][y] for x in range(self.n) for y in range(self.n))

    def dump(self, name=None):
        alg = self.algebra
        head = f"space over {name or alg.name}"
        lines = [head]
        if not alg.finite and alg.alph.letters != ("+", "-"):
            lines.append(alg.alph.declaration())
        lines.append("points " + " ".join(self.points))
        for x in range(self.n):
            for y in range(self.n):
                if x != y:
                    lines.append(f"d {self.points[x]} {self.points[y]} {alg.label(self.dist[x][y])}")
        return "\n".join(lines) + "\n"


def space_from_function(algebra, points, fn):
    pts = list(points)
    return MetricSpace(algebra, [str(p) for p in pts], [[fn(a, b) for b in pts] for a in pts])


def value_space(alg):
    """The algebra itself with the distance ``d_H``."""
    return MetricSpace(alg, alg.labels, [[alg.distance(p, q) for q in alg.elements]
                                         for p in alg.elements])


def validate_space(sp):
    rep = LawReport()
    alg, n, d, P = sp.algebra, sp.n, sp.dist, sp.points
    for x in range(n):
        for y in range(n):
            if (d[x][y] == alg.zero) != (x == y):
                rep.add("d1", (P[x], P[y]))
                break
        else:
            continue
        break
    bad = next(((x, y) for x in range(n) for y in range(n)
                if d[x][y] != alg.inv(d[y][x])), None)
    if bad:
        rep.add("d3", (P[bad[0]], P[bad[1]]))
    if alg.finite:
        tri = kernels.triangle_violation(sp.table, alg.oplus_array, alg.leq_array)
    else:
        tri = next(((x, y, z) for x in range(n) for y in range(n) for z in range(n)
                    if not alg.leq(d[x][y], alg.oplus(d[x][z], d[z][y]))), None)
    if tri:
        rep.add("d2", tuple(P[i] for i in tri))
    return rep


def ball_members(sp, x, r):
    """Indices of ``B(x, r) = {y : d(x, y) <= r}``."""
    alg = sp.algebra
    return frozenset(y for y in range(sp.n) if alg.leq(sp.dist[x][y], r))


def sup_product(spaces, algebra=None, cap=PRODUCT_CAP):
    """Product with the join of coordinate distances."""
    spaces = list(spaces)
    if not spaces:
        if algebra is None:
            raise HMetricError("an empty product needs an explicit algebra")
        return MetricSpace(algebra, ["()"], [[algebra.zero]])
    alg = spaces[0].algebra
    if any(s.algebra is not alg for s in spaces):
        raise HMetricError("product factors must share one algebra")
    size = 1
    for s in spaces:
        size *= s.n
    if size > cap:
        raise CapExceeded(f"product has {size} points, cap is {cap}")
    if len(spaces) == 1:
        return spaces[0]
    tuples = list(product(*[range(s.n) for s in spaces]))
    names = ["(" + ",".join(s.points[i] for s, i in zip(spaces, t)) + ")" for t in tuples]
    dist = [[alg.join_all(s.dist[a][b] for s, a, b in zip(spaces, t, u)) for u in tuples]
            for t in tuples]
    return MetricSpace(alg, names, dist, max_points=cap)


@dataclass(frozen=True)
class PointMap:
    source: MetricSpace
    target: MetricSpace
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.source.n:
            raise HMetricError("a point map must be total")
        if any(not 0 <= i < self.target.n for i in self.images):
            raise HMetricError("point map image outside the target")

    def __call__(self, x):
        return self.images[x]


def map_check(f):
    """``isometry``, ``nonexpansive`` or ``neither``."""
    src, dst = f.source, f.target
    alg = src.algebra
    iso = True
    for x in range(src.n):
        for y in range(src.n):
            a, b = dst.dist[f.images[x]][f.images[y]], src.dist[x][y]
            if not alg.leq(a, b):
                return "neither"
            if a != b:
                iso = False
    return "isometry" if iso else "nonexpansive"


def is_nonexpansive(sp, images, target=None):
    return map_check(PointMap(sp, target or sp, tuple(images))) != "neither"


def canonical_embed(sp):
    """``x -> (d(z, x))_z`` into the sup-power ``H^E``; the image subspace is the target.

    The sup-distance identity ``d(x,y) = ⋁_z d_H(d(z,x), d(z,y))`` is checked
    for every pair; a failure means the algebra violates its laws.
    """
    alg = sp.algebra
    vecs = [tuple(sp.dist[z][x] for z in range(sp.n)) for x in range(sp.n)]
    dist = [[alg.join_all(alg.distance(a, b) for a, b in zip(u, v)) for v in vecs] for u in vecs]
    for x in range(sp.n):
        for y in range(sp.n):
            if dist[x][y] != sp.dist[x][y]:
                raise VerificationError(
                    f"sup-distance identity fails at ({sp.points[x]}, {sp.points[y]})")
    names = ["[" + ",".join(alg.label(c) for c in v) + "]" for v in vecs]
    image = MetricSpace(alg, names, dist)
    f = PointMap(sp, image, tuple(range(sp.n)))
    object.__setattr__(f, "vectors", vecs)
    return f


# holes

def is_hole(sp, h):
    """``h`` maps each point index to a radius; a hole has empty ball intersection."""
    alg = sp.algebra
    return not any(all(alg.leq(sp.dist[x][y], h[x]) for x in range(sp.n)) for y in range(sp.n))


def image_hole(f, h):
    """``h_f(x) = ⋀{h(y) : f(y) = x}``, and the top off the range."""
    alg = f.source.algebra
    out = [alg.one] * f.target.n
    for y, r in enumerate(h):
        out[f.images[y]] = alg.meet(out[f.images[y]], r)
    return tuple(out)


def holes(sp, cap=ENUM_CAP):
    alg = sp.algebra
    if not alg.finite:
        raise HMetricError("hole enumeration needs a finite algebra")
    if alg.n ** sp.n > cap:
        raise CapExceeded(f"|H|^|E| = {alg.n ** sp.n} exceeds {cap}")
    return kernels.enum_holes(sp.ball_masks, sp.n)


def is_hole_preserving(f, cap=ENUM_CAP, source_holes=None):
    """Every hole of the source has a hole as image (exhaustive over radius vectors).

    Hole preservation is a property of nonexpansive maps; any other map is
    reported as not hole-preserving.
    """
    src, dst = f.source, f.target
    alg = src.algebra
    if map_check(f) == "neither":
        return False
    hs = holes(src, cap) if source_holes is None else source_holes
    bad = kernels.preserves_holes(hs, f.images, alg.meet_array, dst.ball_masks, alg.one, dst.n)
    return bad < 0


# one-local retracts

def is_one_local_retract(sp, A):
    """Single-point criterion.

    For ``u`` outside ``A`` the smallest ball around ``x ∈ A`` containing
    ``u`` is ``B(x, d(x, u))``, so intersecting those balls covers every
    family of balls through ``u``. This holds over any algebra.
    """
    A = sorted(set(A))
    if not A:
        raise HMetricError("a one-local retract must be nonempty")
    alg = sp.algebra
    inside = set(A)
    for u in range(sp.n):
        if u in inside:
            continue
        if not any(all(alg.leq(sp.dist[x][a], sp.dist[x][u]) for x in A) for a in A):
            return False
    return True


def one_local_retract_by_families(sp, A, cap=ENUM_CAP):
    """Exhaustive check over all ball families centred in ``A`` (finite algebras).

    A family is a radius per centre (top when absent, since intersecting
    balls with one centre gives the ball of the meet radius). Whenever its
    intersection is nonempty it must meet ``A``.
    """
    A = sorted(set(A))
    alg = sp.algebra
    if alg.n ** len(A) > cap:
        raise CapExceeded("too many ball families")
    amask = sum(1 << a for a in A)
    bm = sp.ball_masks
    full = (1 << sp.n) - 1
    for radii in product(alg.elements, repeat=len(A)):
        acc = full
        for x, r in zip(A, radii):
            acc &= bm[x][r]
        if acc and not acc & amask:
            return False
    return True


def retraction_onto(sp, A, limit=1):
    """Nonexpansive retractions of ``sp`` onto the subset ``A`` (finite algebras).

    Maps are enumerated into the subspace on ``A`` directly, so the search
    never wanders through self-maps with a larger range.
    """
    A = sorted(set(A))
    alg = sp.algebra
    sub = sp.subspace(A)
    pos = {a: i for i, a in enumerate(A)}
    fixed = [pos.get(x, -1) for x in range(sp.n)]
    maps = kernels.enum_maps(sp.table, sub.table, alg.leq_array, fixed, limit)
    return [tuple(A[i] for i in m) for m in maps[:limit]]


# isometric isomorphism

def isomorphism(sp1, sp2):
    """A distance-preserving bijection as a tuple of indices, or ``None``."""
    if sp1.n != sp2.n:
        return None
    n = sp1.n

    def sig(sp, x):
        return (sorted(map(repr, sp.dist[x])), sorted(map(repr, (sp.dist[y][x] for y in range(n)))))

    s1 = [sig(sp1, x) for x in range(n)]
    s2 = [sig(sp2, x) for x in range(n)]
    if sorted(map(repr, s1)) != sorted(map(repr, s2)):
        return None
    img = [-1] * n
    used = [False] * n

    def go(x):
        if x == n:
            return True
        for y in range(n):
            if used[y] or s1[x] != s2[y]:
                continue
            if all(sp1.dist[x][z] == sp2.dist[y][img[z]] and sp1.dist[z][x] == sp2.dist[img[z]][y]
                   for z in range(x)):
                img[x], used[y] = y, True
                if go(x + 1):
                    return True
                used[y] = False
        img[x] = -1
        return False

    return tuple(img) if go(0) else None
