"""Command-line front end: one verb per operation, batch only.

Exit codes: 0 success, 1 usage or parse error, 2 refusal (a precondition or
cap failed; a JSON line with the reason goes to standard output), 3 internal
verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import algebra as alg_mod
from . import discrete, factor, fixpoint, forms, metric, wordlang
from .errors import CapExceeded, HMetricError, ParseError, PreconditionError, VerificationError
from .formats import load, load_space, parse_map, resolve_algebra, _read

VERBS = ("laws", "dist", "embed", "hyperconvex", "envelope", "replete", "zigzag", "fence",
         "graphic", "ts", "connexity", "factor", "irreducible", "cancel", "fix", "common-fix",
         "tarski", "gaps", "olr", "holes")


class Output:
    def __init__(self, as_json, stream):
        self.as_json = as_json
        self.stream = stream

    def emit(self, text, data=None):
        if self.as_json:
            print(json.dumps(data if data is not None else text, sort_keys=True,
                             ensure_ascii=False), file=self.stream)
        else:
            self.stream.write(text if text.endswith("\n") else text + "\n")


def _label(alg, v):
    return alg.label(v)


def _matrix(sp):
    return {p: {q: _label(sp.algebra, sp.dist[x][y]) for y, q in enumerate(sp.points)}
            for x, p in enumerate(sp.points)}


def _space(args, path):
    return load_space(path, max_points=args.max_points)


def _word_alphabet(args):
    if args.alphabet:
        return wordlang.parse_alphabet(args.alphabet)
    return wordlang.zigzag_alphabet()


def _antichain(args):
    if args.antichain is None:
        raise ParseError("--antichain is required")
    alph = _word_alphabet(args)
    A = wordlang.parse_antichain(args.antichain, alph)
    if any(len(w) > args.max_word_len for w in A.basis):
        raise CapExceeded(f"basis word longer than --max-word-len {args.max_word_len}")
    return alph, A


def _map(args, sp, path):
    return parse_map(_read(path), sp, path)


# verbs

def cmd_laws(args, out):
    alg = resolve_algebra(args.algebra or args.file)
    rep = alg_mod.validate_laws(alg)
    if rep.passed:
        out.emit("passed", {"passed": True, "violations": []})
    else:
        lines = ["failed"] + [f"{law}: " + " ".join(map(str, w)) for law, w in rep.violations]
        out.emit("\n".join(lines), {"passed": False, "violations": [
            [law, [str(x) for x in w]] for law, w in rep.violations]})
    return 0


def cmd_dist(args, out):
    if args.algebra:
        alg = resolve_algebra(args.algebra)
        if len(args.args) != 2:
            raise ParseError("dist --algebra A needs two elements")
        v = alg.distance(alg.elem(args.args[0]), alg.elem(args.args[1]))
        out.emit(alg.label(v), {"distance": alg.label(v)})
        return 0
    if not args.args:
        raise ParseError("dist needs a space file")
    sp = _space(args, args.args[0])
    rep = metric.validate_space(sp)
    if not rep.passed:
        law, w = rep.violations[0]
        raise PreconditionError(f"space violates {law}", witness=list(w))
    if len(args.args) == 3:
        v = sp.dist[sp.index(args.args[1])][sp.index(args.args[2])]
        out.emit(sp.algebra.label(v), {"distance": sp.algebra.label(v)})
    else:
        out.emit(sp.dump().rstrip("\n"), {"points": list(sp.points), "dist": _matrix(sp)})
    return 0


def cmd_embed(args, out):
    sp = _space(args, args.space)
    f = metric.canonical_embed(sp)
    alg = sp.algebra
    rows = {p: [alg.label(v) for v in f.vectors[x]] for x, p in enumerate(sp.points)}
    text = "\n".join(f"{p} -> [{', '.join(rows[p])}]" for p in sp.points)
    out.emit(text, {"isometry": True, "vectors": rows})
    return 0


def cmd_hyperconvex(args, out):
    sp = _space(args, args.space)
    v = forms.is_hyperconvex(sp, method=args.method, cap=args.max_enum)
    wit = None if v.witness is None else [sp.algebra.label(r) for r in v.witness]
    text = "true" if v else "false\nwitness " + " ".join(wit)
    out.emit(text, {"hyperconvex": bool(v), "method": v.method, "witness": wit})
    return 0


def cmd_envelope(args, out):
    if args.algebra or args.antichain:
        if args.antichain:
            alph = _word_alphabet(args)
            A = wordlang.parse_antichain(args.antichain, alph)
            env = forms.two_point_envelope(wordlang.WordAlgebra(alph), A)
        else:
            alg = resolve_algebra(args.algebra)
            env = forms.two_point_envelope(alg, alg.elem(args.value))
        out.emit(env.dump().rstrip("\n"), {"points": list(env.points), "dist": _matrix(env)})
        return 0
    sp = _space(args, args.space)
    env, emb = forms.injective_envelope(sp, cap=args.max_enum)
    text = env.dump().rstrip("\n") + "\n# embedding\n" + "\n".join(
        f"# {p} -> {env.points[emb.images[x]]}" for x, p in enumerate(sp.points))
    out.emit(text, {"points": list(env.points), "dist": _matrix(env),
                    "embedding": {p: env.points[emb.images[x]] for x, p in enumerate(sp.points)}})
    return 0


def cmd_replete(args, out):
    sp = _space(args, args.space)
    rep, emb = forms.replete_space(sp, cap=args.max_enum)
    out.emit(rep.dump().rstrip("\n"), {"points": list(rep.points), "dist": _matrix(rep)})
    return 0


def _pair_or_space(sp, args, out):
    if args.x is not None:
        if args.y is None:
            raise ParseError("give two points or none")
        v = sp.dist[sp.index(args.x)][sp.index(args.y)]
        out.emit(sp.algebra.label(v), {"distance": sp.algebra.label(v)})
    else:
        out.emit(sp.dump().rstrip("\n"), {"points": list(sp.points), "dist": _matrix(sp)})
    return 0


def cmd_zigzag(args, out):
    return _pair_or_space(discrete.zigzag_space(load(args.file, "digraph")), args, out)


def cmd_fence(args, out):
    return _pair_or_space(discrete.fence_space(load(args.file, "poset"), args.k), args, out)


def cmd_graphic(args, out):
    return _pair_or_space(discrete.graphic_distance(load(args.file, "graph"), args.k), args, out)


def cmd_ts(args, out):
    return _pair_or_space(discrete.ts_space(load(args.file, "ts")), args, out)


def cmd_connexity(args, out):
    sp = _space(args, args.space)
    if sp.algebra.finite:
        raise PreconditionError("connexity needs a space over words")
    rep = discrete.check_connexity(sp)
    text = "true" if rep.holds else "false\nwitness " + " ".join(x or "^" for x in rep.witness)
    out.emit(text, {"connexity": rep.holds, "witness": list(rep.witness),
                    "roundtrip": rep.roundtrip})
    return 0


def cmd_factor(args, out):
    alph, A = _antichain(args)
    fs = factor.factorize(alph, A).factors
    lits = [wordlang.render(f) for f in fs]
    out.emit("\n".join(lits) if lits else "", {"factors": lits})
    return 0


def cmd_irreducible(args, out):
    alph, A = _antichain(args)
    r = factor.is_irreducible(alph, A)
    text = r if r == "unit" else ("true" if r else "false")
    out.emit(text, {"irreducible": r})
    return 0


def cmd_cancel(args, out):
    alph, A = _antichain(args)
    w = wordlang.cancellation_witness(alph, A)
    text = "holds" if w is None else f"fails\nwitness {w[0] or '^'} {w[1] or '^'}"
    out.emit(text, {"holds": w is None, "witness": list(w) if w else []})
    return 0


def cmd_fix(args, out):
    sp = _space(args, args.space)
    f = _map(args, sp, args.map)
    res = fixpoint.fixed_point(sp, f.images)
    fixed = [sp.points[x] for x in res.fixed]
    out.emit(f"{sp.points[res.point]}\nfix {' '.join(fixed)}",
             {"point": sp.points[res.point], "fixed": fixed, "reason": res.reason})
    return 0


def cmd_common_fix(args, out):
    sp = _space(args, args.space)
    maps = [_map(args, sp, p).images for p in args.maps]
    res = fixpoint.common_fixed_point(sp, maps)
    fixed = [sp.points[x] for x in res.fixed]
    out.emit(f"{sp.points[res.point]}\nfix {' '.join(fixed)}",
             {"point": sp.points[res.point], "fixed": fixed})
    return 0


def _poset_map(poset, path):
    lines = [ln.split("#", 1)[0].split() for ln in _read(path).splitlines()]
    lines = [t for t in lines if t]
    if not lines or lines[0][0] != "map":
        raise ParseError("expected 'map' header", path, 1)
    f = {}
    for toks in lines[1:]:
        if toks[0] != "m" or len(toks) != 3 or toks[1] not in poset.elements \
                or toks[2] not in poset.elements:
            raise ParseError(f"bad map row {' '.join(toks)!r}", path)
        f[toks[1]] = toks[2]
    if set(f) != set(poset.elements):
        raise ParseError("map is not total", path)
    return f


def cmd_tarski(args, out):
    p = load(args.poset, "poset")
    f = _poset_map(p, args.map)
    if args.start is not None:
        x = fixpoint.abian_brown(p, f, args.start)
        out.emit(x, {"fixed_point": x})
        return 0
    x, fixes = fixpoint.tarski(p, f)
    out.emit(f"{x}\nfix {' '.join(fixes)}", {"least": x, "fixed": fixes})
    return 0


def cmd_gaps(args, out):
    p = load(args.poset, "poset")
    gaps = fixpoint.find_gaps(p, args.bound)
    text = "\n".join("{" + ",".join(a) + "} {" + ",".join(b) + "}" for a, b in gaps) or "none"
    out.emit(text, {"gaps": [[list(a), list(b)] for a, b in gaps], "lattice": p.is_lattice()})
    return 0


def cmd_olr(args, out):
    sp = _space(args, args.space)
    A = [sp.index(p) for p in args.points]
    r = metric.is_one_local_retract(sp, A)
    partial = not sp.algebra.finite
    out.emit(("true" if r else "false") + (" (partial)" if partial else ""),
             {"one_local_retract": r, "partial": partial})
    return 0


def cmd_holes(args, out):
    sp = _space(args, args.space)
    if args.map:
        tgt = _space(args, args.target) if args.target else sp
        f = parse_map(_read(args.map), sp, args.map, tgt)
        r = metric.is_hole_preserving(f, cap=args.max_enum)
        out.emit("true" if r else "false", {"hole_preserving": r})
        return 0
    hs = metric.holes(sp, cap=args.max_enum)
    alg = sp.algebra
    rows = [[alg.label(v) for v in h] for h in hs]
    out.emit("\n".join(" ".join(r) for r in rows) or "none", {"holes": rows})
    return 0


# argument parsing

def _common(p, suppress):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--json", action="store_true", default=d if suppress else False)
    p.add_argument("--max-points", type=int, default=d if suppress else metric.MAX_POINTS)
    p.add_argument("--max-word-len", type=int,
                   default=d if suppress else factor.DIVISOR_WORD_BOUND)
    p.add_argument("--max-enum", type=int, default=d if suppress else metric.ENUM_CAP)


def build_parser():
    top = argparse.ArgumentParser(prog="hmetric", description=__doc__.splitlines()[0])
    _common(top, False)
    sub = top.add_subparsers(dest="verb", metavar="VERB")
    shared = argparse.ArgumentParser(add_help=False)
    _common(shared, True)

    def verb(name, fn, help_):
        p = sub.add_parser(name, parents=[shared], help=help_)
        p.set_defaults(fn=fn)
        return p

    p = verb("laws", cmd_laws, "check the algebra laws")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--algebra")
    g.add_argument("--file")
    p = verb("dist", cmd_dist, "validate a space or compute a distance")
    p.add_argument("--algebra")
    p.add_argument("args", nargs="*")
    verb("embed", cmd_embed, "canonical embedding into a power of H").add_argument("space")
    p = verb("hyperconvex", cmd_hyperconvex, "decide hyperconvexity")
    p.add_argument("space")
    p.add_argument("--method", choices=("auto", "forms", "helly"), default="auto")
    p = verb("envelope", cmd_envelope, "injective envelope or two-point envelope")
    p.add_argument("space", nargs="?")
    p.add_argument("--algebra")
    p.add_argument("--value")
    p.add_argument("--antichain")
    p.add_argument("--alphabet")
    verb("replete", cmd_replete, "replete space of a space").add_argument("space")
    for name, fn, k in (("zigzag", cmd_zigzag, False), ("fence", cmd_fence, True),
                        ("graphic", cmd_graphic, True), ("ts", cmd_ts, False)):
        p = verb(name, fn, f"{name} distance")
        p.add_argument("file")
        p.add_argument("x", nargs="?")
        p.add_argument("y", nargs="?")
        if k:
            p.add_argument("--k", type=int, default=6)
    verb("connexity", cmd_connexity, "connexity test for word spaces").add_argument("space")
    for name, fn in (("factor", cmd_factor), ("irreducible", cmd_irreducible),
                     ("cancel", cmd_cancel)):
        p = verb(name, fn, f"{name} an antichain")
        p.add_argument("--antichain", required=True)
        p.add_argument("--alphabet")
    p = verb("fix", cmd_fix, "fixed point of a nonexpansive map")
    p.add_argument("space")
    p.add_argument("map")
    p = verb("common-fix", cmd_common_fix, "common fixed point of commuting maps")
    p.add_argument("space")
    p.add_argument("maps", nargs="+")
    p = verb("tarski", cmd_tarski, "least fixed point of a monotone map")
    p.add_argument("poset")
    p.add_argument("map")
    p.add_argument("--start")
    p = verb("gaps", cmd_gaps, "gaps of a poset")
    p.add_argument("poset")
    p.add_argument("--bound", type=int, default=fixpoint.GAP_BOUND)
    p = verb("olr", cmd_olr, "one-local retract test")
    p.add_argument("space")
    p.add_argument("points", nargs="+")
    p = verb("holes", cmd_holes, "holes, or whether a map preserves them")
    p.add_argument("space")
    p.add_argument("map", nargs="?")
    p.add_argument("--target")
    return top


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # argparse rejects unknown verbs before any file is opened
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    if not getattr(args, "fn", None):
        parser.print_usage(stderr)
        return 1
    out = Output(args.json, stdout)
    try:
        return args.fn(args, out)
    except (PreconditionError, CapExceeded) as exc:
        print(json.dumps({"refused": str(exc), "witness": [str(w) for w in getattr(exc, "witness", [])]},
                         sort_keys=True, ensure_ascii=False), file=stdout)
        return 2
    except VerificationError as exc:
        print(f"hmetric: internal check failed: {exc}", file=stderr)
        return 3
    except HMetricError as exc:
        print(f"hmetric: {exc}", file=stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
