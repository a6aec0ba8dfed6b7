import io
import json

import pytest

from hmetric.cli import VERBS, run
from hmetric.formats import parse_space

FILES = {
    "chain.txt": "space over poset4\npoints a b c\nd a b +\nd b c +\nd a c +\n",
    "v.txt": "space over poset4\npoints 0 p m\nd 0 p +\nd 0 m +\nd p m 1\n",
    "one.txt": "space over poset4\npoints x\n",
    "clique.txt": "space over graph3\npoints x y\nd x y 1/2\n",
    "bad.txt": "space over poset4\npoints x y\nd x y +\nd y x +\n",
    "broken.txt": "space over poset4\npoints x\nd x q +\n",
    "wspace.txt": "space over words\npoints x y\nd x y {+}\n",
    "poset.txt": "poset\nv a b\nlt a b\n",
    "vposet.txt": "poset\nv 0 p m\nlt 0 p\nlt 0 m\n",
    "diamond.txt": "poset\nv 0 a b 1\nlt 0 a\nlt 0 b\nlt a 1\nlt b 1\n",
    "dg.txt": "digraph\nv x y\ne x y\nreflexive\n",
    "path.txt": "graph\nv a b c\ne a b\ne b c\n",
    "ts.txt": "ts +-\nt x + y\nt y - x\nt x + x\nt x - x\nt y + y\nt y - y\n",
    "const.map": "map S\nm a c\nm b c\nm c c\n",
    "ident.map": "map S\nm a a\nm b b\nm c c\n",
    "swap.map": "map S\nm x y\nm y x\n",
    "pmap.map": "map P\nm 0 a\nm a a\nm b 1\nm 1 1\n",
}


@pytest.fixture
def files(tmp_path):
    for name, text in FILES.items():
        (tmp_path / name).write_text(text)
    return lambda name: str(tmp_path / name)


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_laws():
    assert call("laws", "--algebra", "poset4")[:2] == (0, "passed\n")
    code, out, _ = call("laws", "--algebra", "nat(6)", "--json")
    assert code == 0 and json.loads(out) == {"passed": True, "violations": []}


def test_unknown_verb_is_usage_error():
    assert call("frobnicate", "/nonexistent")[0] == 1
    assert call()[0] == 1


def test_every_verb_has_help():
    for v in VERBS:
        assert call(v, "--help")[0] == 0


def test_dist(files):
    assert call("dist", "--algebra", "graph3", "0", "1")[:2] == (0, "1\n")
    code, out, _ = call("dist", files("chain.txt"), "a", "c")
    assert (code, out) == (0, "+\n")
    code, out, _ = call("dist", files("chain.txt"))
    assert code == 0 and parse_space(out).n == 3


def test_dist_refuses_invalid_space(files):
    code, out, _ = call("dist", files("bad.txt"))
    assert code == 2
    assert "refused" in json.loads(out) and "witness" in json.loads(out)


def test_parse_error_cites_line(files):
    code, _, err = call("dist", files("broken.txt"))
    assert code == 1 and "broken.txt:3:" in err


def test_embed(files):
    code, out, _ = call("embed", files("chain.txt"), "--json")
    assert code == 0 and json.loads(out)["isometry"] is True


def test_hyperconvex(files):
    assert call("hyperconvex", files("chain.txt"))[:2] == (0, "true\n")
    code, out, _ = call("hyperconvex", files("v.txt"), "--method", "helly")
    assert code == 0 and out.startswith("false\nwitness")


def test_envelope(files):
    code, out, _ = call("envelope", files("v.txt"))
    assert code == 0
    assert parse_space(out).n == 4
    code, out, _ = call("envelope", "--algebra", "nat(3)", "--value", "2")
    assert code == 0 and parse_space(out).n == 3
    code, out, _ = call("envelope", "--antichain", "{ +- }")
    assert code == 0 and parse_space(out).n == 3


def test_replete(files):
    code, out, _ = call("replete", files("chain.txt"), "--json")
    assert code == 0 and len(json.loads(out)["points"]) >= 3


def test_discrete_distances(files):
    assert call("fence", files("poset.txt"), "a", "b")[:2] == (0, "(1,2)\n")
    assert call("fence", files("vposet.txt"), "p", "m")[:2] == (0, "(3,2)\n")
    assert call("zigzag", files("dg.txt"), "x", "y")[:2] == (0, "{ + }\n")
    assert call("graphic", files("path.txt"), "a", "c")[:2] == (0, "2\n")
    code, out, _ = call("ts", files("ts.txt"), "x", "y")
    assert code == 0 and out.strip() == "{ + }"


def test_connexity(files):
    assert call("connexity", files("wspace.txt"))[:2] == (0, "true\n")
    assert call("connexity", files("chain.txt"))[0] == 2


def test_factor():
    code, out, _ = call("factor", "--antichain", "{ +-+ }")
    assert code == 0 and out.splitlines() == ["{ + }", "{ - }", "{ + }"]
    code, out, _ = call("factor", "--antichain", "{ +-+ }", "--json")
    assert json.loads(out) == {"factors": ["{ + }", "{ - }", "{ + }"]}


def test_factor_refuses_long_words():
    code, out, _ = call("factor", "--antichain", "{ +-+ }", "--max-word-len", "2")
    assert code == 2 and "refused" in json.loads(out)


def test_irreducible_and_cancel():
    assert call("irreducible", "--antichain", "{ + }")[1] == "true\n"
    assert call("irreducible", "--antichain", "{ +- }")[1] == "false\n"
    assert call("irreducible", "--antichain", "{ ^ }")[1] == "unit\n"
    assert call("irreducible", "--antichain", "{ }")[0] == 2
    assert call("cancel", "--antichain", "{ ^ }")[1] == "holds\n"
    code, out, _ = call("cancel", "--antichain", "{ +, - }")
    assert code == 0 and out.startswith("fails\nwitness")


def test_fix(files):
    code, out, _ = call("fix", files("chain.txt"), files("const.map"))
    assert code == 0 and out.splitlines() == ["c", "fix c"]
    code, out, _ = call("fix", files("clique.txt"), files("swap.map"))
    assert code == 2 and "not bounded" in json.loads(out)["refused"]


def test_common_fix(files):
    code, out, _ = call("common-fix", files("chain.txt"), files("const.map"), files("ident.map"))
    assert code == 0 and out.splitlines()[0] == "c"


def test_tarski_and_gaps(files):
    code, out, _ = call("tarski", files("diamond.txt"), files("pmap.map"))
    assert code == 0 and out.splitlines() == ["a", "fix a 1"]
    code, out, _ = call("tarski", files("diamond.txt"), files("pmap.map"), "--start", "b")
    assert (code, out) == (0, "1\n")
    assert call("gaps", files("diamond.txt"))[1] == "none\n"
    code, out, _ = call("gaps", files("vposet.txt"), "--json")
    assert code == 0 and json.loads(out)["lattice"] is False


def test_olr_and_holes(files):
    assert call("olr", files("chain.txt"), "a", "c")[0] == 0
    assert call("olr", files("wspace.txt"), "x")[1] == "true (partial)\n"
    assert call("holes", files("one.txt"))[1] == "none\n"
    code, out, _ = call("holes", files("v.txt"))
    assert code == 0 and out != "none\n"
    code, out, _ = call("holes", files("chain.txt"), files("ident.map"))
    assert (code, out) == (0, "true\n")


def test_json_is_stable_and_round_trips(files):
    a = call("envelope", files("v.txt"), "--json")
    b = call("envelope", files("v.txt"), "--json")
    assert a == b
    data = json.loads(a[1])
    assert list(data) == sorted(data)
    pts = data["points"]
    rows = [f"d {p} {q} {data['dist'][p][q]}" for p in pts for q in pts if p != q]
    sp = parse_space("space over poset4\npoints " + " ".join(pts) + "\n" + "\n".join(rows))
    assert sp.n == len(pts)


@pytest.mark.parametrize("argv", [
    ("hyperconvex", "chain.txt"), ("envelope", "v.txt"), ("fence", "vposet.txt"),
    ("holes", "v.txt"), ("factor", "--antichain", "{ +-, -+ }"),
])
def test_deterministic_output(files, argv):
    argv = [files(a) if a.endswith(".txt") else a for a in argv]
    assert call(*argv) == call(*argv)


def test_internal_check_failure_exits_3(tmp_path):
    p = tmp_path / "tri.txt"
    p.write_text("space over nat(4)\npoints a b c\nd a b 1\nd b c 1\nd a c 4\n")
    code, _, err = call("embed", str(p))
    assert code == 3 and "internal check failed" in err
