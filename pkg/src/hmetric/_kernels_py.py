"""Reference implementations of the hot loops.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and the same output order. Tables are 2-D integer arrays indexed by element
or point ids; ``leq`` is a 0/1 table. Bit masks are Python ints here and
``uint64`` in the compiled twin.
"""


def _rows(a):
    return a.tolist() if hasattr(a, "tolist") else [list(r) for r in a]


def subword_leq(u, v, above=None):
    """Greedy Higman embedding of ``u`` into ``v``.

    ``above`` maps a letter to the set of letters >= it; ``None`` means the
    discrete letter order.
    """
    i, n = 0, len(u)
    if n == 0:
        return True
    if above is None:
        for c in v:
            if c == u[i]:
                i += 1
                if i == n:
                    return True
        return False
    for c in v:
        if c in above[u[i]]:
            i += 1
            if i == n:
                return True
    return False


def triangle_violation(dist, oplus, leq):
    d, op, le = _rows(dist), _rows(oplus), _rows(leq)
    n = len(d)
    for x in range(n):
        dx = d[x]
        for y in range(n):
            dxy = dx[y]
            for z in range(n):
                if not le[dxy][op[dx[z]][d[z][y]]]:
                    return (x, y, z)
    return None


def enum_forms(dist, oplus, leq, inv, strong, limit):
    """All weak (or strong) forms in lexicographic order of value vectors.

    Stops after ``limit + 1`` results so the caller can report the cap.
    """
    d, op, le = _rows(dist), _rows(oplus), _rows(leq)
    iv = list(inv)
    n, h = len(d), len(op)
    out = []
    f = [0] * n

    def ok(i, v):
        for j in range(i):
            w = f[j]
            if not le[d[j][i]][op[w][iv[v]]]:
                return False
            if not le[d[i][j]][op[v][iv[w]]]:
                return False
            if strong:
                if not le[w][op[d[j][i]][v]]:
                    return False
                if not le[v][op[d[i][j]][w]]:
                    return False
        return True

    def go(i):
        if len(out) > limit:
            return
        if i == n:
            out.append(tuple(f))
            return
        for v in range(h):
            if ok(i, v):
                f[i] = v
                go(i + 1)

    go(0)
    return out


def minimal_rows(rows, leq):
    """Indices of rows that are pointwise minimal among ``rows``."""
    le = _rows(leq)
    rs = [tuple(r) for r in rows]
    keep = []
    for i, f in enumerate(rs):
        minimal = True
        for j, g in enumerate(rs):
            if j != i and g != f and all(le[a][b] for a, b in zip(g, f)):
                minimal = False
                break
        if minimal:
            keep.append(i)
    return keep


def enum_maps(src, dst, leq, fixed, limit):
    """Nonexpansive maps from ``src`` to ``dst`` (distance tables).

    ``fixed[x] >= 0`` pins the image of ``x``.
    """
    s, t, le = _rows(src), _rows(dst), _rows(leq)
    fx = list(fixed)
    n, m = len(s), len(t)
    out = []
    f = [0] * n

    def go(i):
        if len(out) > limit:
            return
        if i == n:
            out.append(tuple(f))
            return
        cands = [fx[i]] if fx[i] >= 0 else range(m)
        for v in cands:
            good = True
            for j in range(i):
                if not le[t[f[j]][v]][s[j][i]] or not le[t[v][f[j]]][s[i][j]]:
                    good = False
                    break
            if good:
                f[i] = v
                go(i + 1)

    go(0)
    return out


def helly2_violation(masks, n, anchors=None):
    """Search for a pairwise-intersecting ball family with empty intersection.

    For a ball ``B`` and a point ``t`` outside it, intersect every ball that
    contains ``t`` and meets ``B``; if the result misses ``B`` the family
    plus ``B`` is a counterexample. Every minimal counterexample has this
    shape, so an exhausted search proves the 2-Helly property. ``anchors``
    restricts ``t`` (valid when a transitive isometry group is known).
    Returns ``(ball index, t)`` or ``None``.
    """
    ms = [int(m) for m in masks]
    full = (1 << n) - 1
    pts = range(n) if anchors is None else anchors
    through = {t: [m for m in ms if (m >> t) & 1] for t in pts}
    for b, mb in enumerate(ms):
        for t in pts:
            if (mb >> t) & 1:
                continue
            acc = full
            for mc in through[t]:
                if mc & mb:
                    acc &= mc
            if not acc & mb:
                return (b, t)
    return None


def commuting_check(maps):
    """Count commuting pairs ``i < j`` and list those without a common fixed point."""
    ms = _rows(maps)
    m = len(ms)
    fix = []
    for f in ms:
        mask = 0
        for x, y in enumerate(f):
            if x == y:
                mask |= 1 << x
        fix.append(mask)
    count = 0
    bad = []
    for i in range(m):
        f = ms[i]
        for j in range(i + 1, m):
            g = ms[j]
            if all(f[g[x]] == g[f[x]] for x in range(len(f))):
                count += 1
                if not fix[i] & fix[j]:
                    bad.append((i, j))
    return count, bad


def enum_holes(balls, n):
    """All radius vectors ``h`` with empty ball intersection.

    ``balls[x][r]`` is the member mask of ``B(x, r)``; ``n`` is the point count.
    """
    bs = [[int(v) for v in row] for row in balls]
    k = len(bs)
    full = (1 << n) - 1
    out = []
    h = [0] * k

    def go(i, acc):
        if i == k:
            if acc == 0:
                out.append(tuple(h))
            return
        for r, mask in enumerate(bs[i]):
            h[i] = r
            go(i + 1, acc & mask)

    go(0, full)
    return out


def preserves_holes(holes, fmap, meet, balls, one, n):
    """Index of the first hole whose image ``h_f`` is not a hole, else -1."""
    mt = _rows(meet)
    bs = [[int(v) for v in row] for row in balls]
    fm = list(fmap)
    full = (1 << n) - 1
    for idx, h in enumerate(holes):
        img = {}
        for y, r in enumerate(h):
            x = fm[y]
            img[x] = mt[img[x]][r] if x in img else r
        acc = full
        for x, r in img.items():
            if r != one:
                acc &= bs[x][r]
        if acc:
            return idx
    return -1
