"""Line-based file formats: algebras, spaces, digraphs, graphs, posets, systems, maps.

Blank lines and ``#`` comments are ignored everywhere. Errors cite the file
and line.
"""

from __future__ import annotations

from pathlib import Path

from .algebra import FiniteAlgebra, builtin_from_spec
from .discrete import Digraph, Poset, TransitionSystem, graph
from .errors import HMetricError, ParseError
from .metric import MAX_POINTS, MetricSpace, PointMap
from .wordlang import WordAlgebra, parse_alphabet, zigzag_alphabet


def _lines(text):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", str(path)) from None


def _header(lines, word, source):
    try:
        no, line = next(lines)
    except StopIteration:
        raise ParseError("empty file", source) from None
    toks = line.split(None, 1)
    if toks[0] != word:
        raise ParseError(f"expected '{word}' header", source, no)
    return toks[1].strip() if len(toks) > 1 else ""


# algebras

def parse_algebra(text, source="<algebra>"):
    lines = _lines(text)
    name = _header(lines, "algebra", source) or "custom"
    labels = None
    covers, ops, invs = [], {}, {}
    for no, line in lines:
        toks = line.split()
        kw, args = toks[0], toks[1:]
        if kw == "elements":
            labels = args
            if len(set(labels)) != len(labels):
                raise ParseError("duplicate elements", source, no)
            continue
        if labels is None:
            raise ParseError("'elements' must come first", source, no)
        if any(a not in labels for a in args):
            raise ParseError(f"unknown element in {line!r}", source, no)
        if kw == "cover" and len(args) == 2:
            covers.append(args)
        elif kw == "op" and len(args) == 3:
            ops[args[0], args[1]] = args[2]
        elif kw == "inv" and len(args) == 2:
            invs[args[0]] = args[1]
        else:
            raise ParseError(f"bad line {line!r}", source, no)
    if not labels:
        raise ParseError("no elements", source)
    idx = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    le = [[p == q for q in range(n)] for p in range(n)]
    for a, b in covers:
        le[idx[a]][idx[b]] = True
    for k in range(n):
        for p in range(n):
            if le[p][k]:
                for q in range(n):
                    if le[k][q]:
                        le[p][q] = True
    missing = [(a, b) for a in labels for b in labels if (a, b) not in ops]
    if missing:
        raise ParseError(f"missing op row for {missing[0][0]} {missing[0][1]}", source)
    miss_inv = [a for a in labels if a not in invs]
    if miss_inv:
        raise ParseError(f"missing inv row for {miss_inv[0]}", source)
    return FiniteAlgebra(name, labels, le,
                         [[idx[ops[a, b]] for b in labels] for a in labels],
                         [idx[invs[a]] for a in labels])


def resolve_algebra(ref, base=None):
    """A built-in selector, ``words``, or a path to an algebra file."""
    ref = ref.strip()
    if ref == "words":
        return WordAlgebra(zigzag_alphabet())
    try:
        return builtin_from_spec(ref)
    except HMetricError:
        pass
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = Path(base).parent / path
    if path.exists():
        return parse_algebra(_read(path), str(path))
    raise HMetricError(f"unknown algebra {ref!r}")


def load_algebra(ref):
    return resolve_algebra(ref)


# spaces

def parse_space(text, source="<space>", max_points=MAX_POINTS, base=None):
    lines = _lines(text)
    head = _header(lines, "space", source)
    if not head.startswith("over"):
        raise ParseError("expected 'space over ALGEBRA'", source, 1)
    try:
        alg = resolve_algebra(head[4:], base or source)
    except HMetricError as exc:
        raise ParseError(str(exc), source, 1) from None
    points = None
    entries = {}
    for no, line in lines:
        if line.startswith("alphabet"):
            if alg.finite:
                raise ParseError("alphabet declarations need 'space over words'", source, no)
            try:
                alg = WordAlgebra(parse_alphabet(line))
            except HMetricError as exc:
                raise ParseError(str(exc), source, no) from None
            continue
        toks = line.split(None, 3)
        if toks[0] == "points":
            points = line.split()[1:]
            continue
        if toks[0] != "d" or len(toks) != 4:
            raise ParseError(f"bad line {line!r}", source, no)
        if points is None:
            raise ParseError("'points' must come before distances", source, no)
        p, q, val = toks[1], toks[2], toks[3]
        if p not in points or q not in points:
            raise ParseError(f"unknown point in {line!r}", source, no)
        try:
            entries[p, q] = alg.elem(val)
        except HMetricError as exc:
            raise ParseError(str(exc), source, no) from None
    if points is None:
        raise ParseError("no points", source)
    dist = []
    for p in points:
        row = []
        for q in points:
            if p == q:
                v = entries.get((p, q), alg.zero)
                if v != alg.zero:
                    raise ParseError(f"diagonal entry d {p} {p} must be 0", source)
            elif (p, q) in entries:
                v = entries[p, q]
            elif (q, p) in entries:
                v = alg.inv(entries[q, p])
            else:
                raise ParseError(f"missing distance between {p} and {q}", source)
            row.append(v)
        dist.append(row)
    return MetricSpace(alg, points, dist, max_points=max_points)


def load_space(path, max_points=MAX_POINTS):
    return parse_space(_read(path), str(path), max_points)


def dump_space(sp, name=None):
    return sp.dump(name)


# structures

def parse_digraph(text, source="<digraph>", undirected=False):
    lines = _lines(text)
    _header(lines, "graph" if undirected else "digraph", source)
    verts, arcs, reflexive = [], [], undirected
    for no, line in lines:
        toks = line.split()
        if toks[0] == "v":
            verts += toks[1:]
        elif toks[0] == "e" and len(toks) == 3:
            arcs.append((toks[1], toks[2]))
        elif toks[0] == "reflexive" and len(toks) == 1:
            reflexive = True
        else:
            raise ParseError(f"bad line {line!r}", source, no)
    try:
        if undirected:
            return graph(verts, arcs)
        return Digraph(verts, frozenset(arcs), reflexive)
    except HMetricError as exc:
        raise ParseError(str(exc), source) from None


def parse_poset(text, source="<poset>"):
    lines = _lines(text)
    _header(lines, "poset", source)
    els, lt = [], []
    for no, line in lines:
        toks = line.split()
        if toks[0] == "v":
            els += toks[1:]
        elif toks[0] == "lt" and len(toks) == 3:
            lt.append((toks[1], toks[2]))
        else:
            raise ParseError(f"bad line {line!r}", source, no)
    try:
        return Poset(els, frozenset(lt))
    except HMetricError as exc:
        raise ParseError(str(exc), source) from None


def parse_ts(text, source="<ts>"):
    """``ts LETTERS`` then optional ``inv a b`` / ``states ...`` and ``t p a q`` rows."""
    lines = _lines(text)
    head = _header(lines, "ts", source)
    letters = head.split()
    if len(letters) == 1 and len(letters[0]) > 1:
        letters = list(letters[0])
    inv_pairs, states, trans = [], [], []
    for no, line in lines:
        toks = line.split()
        if toks[0] == "inv" and len(toks) == 3:
            inv_pairs.append((toks[1], toks[2]))
        elif toks[0] == "states":
            states += toks[1:]
        elif toks[0] == "t" and len(toks) == 4:
            trans.append((toks[1], toks[2], toks[3]))
            for s in (toks[1], toks[3]):
                if s not in states:
                    states.append(s)
        else:
            raise ParseError(f"bad line {line!r}", source, no)
    decl = "alphabet " + " ".join(letters)
    if inv_pairs:
        decl += " ; inv " + " ".join(f"{a} {b}" for a, b in inv_pairs)
    elif letters == ["+", "-"]:
        decl += " ; inv + -"
    try:
        return TransitionSystem(states, parse_alphabet(decl), frozenset(trans))
    except HMetricError as exc:
        raise ParseError(str(exc), source) from None


def parse_map(text, sp, source="<map>", target=None):
    lines = _lines(text)
    _header(lines, "map", source)
    target = target or sp
    images = {}
    for no, line in lines:
        toks = line.split()
        if toks[0] != "m" or len(toks) != 3:
            raise ParseError(f"bad line {line!r}", source, no)
        if toks[1] not in sp.points or toks[2] not in target.points:
            raise ParseError(f"unknown point in {line!r}", source, no)
        if toks[1] in images:
            raise ParseError(f"point {toks[1]} mapped twice", source, no)
        images[toks[1]] = target.index(toks[2])
    missing = [p for p in sp.points if p not in images]
    if missing:
        raise ParseError(f"map is not total: {missing[0]} has no image", source)
    return PointMap(sp, target, tuple(images[p] for p in sp.points))


def dump_map(f, name="SPACE"):
    rows = [f"m {f.source.points[x]} {f.target.points[y]}" for x, y in enumerate(f.images)]
    return "\n".join([f"map {name}"] + rows) + "\n"


def load(path, kind):
    text = _read(path)
    src = str(path)
    if kind == "digraph":
        return parse_digraph(text, src)
    if kind == "graph":
        return parse_digraph(text, src, undirected=True)
    if kind == "poset":
        return parse_poset(text, src)
    if kind == "ts":
        return parse_ts(text, src)
    raise HMetricError(f"unknown file kind {kind!r}")
