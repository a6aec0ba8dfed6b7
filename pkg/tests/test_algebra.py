from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hmetric import algebra as A
from hmetric.errors import HMetricError

SMALL = [A.graph3(), A.digraph5(), A.poset4(), A.nat(4), A.fence(3), A.divisors(12)]
IDS = [a.name for a in SMALL]


@pytest.mark.parametrize("alg", SMALL, ids=IDS)
def test_builtins_pass_law_suite(alg):
    assert A.validate_laws(alg).passed


@pytest.mark.parametrize("k", range(2, 9))
def test_fence_family_passes_laws(k):
    assert A.validate_laws(A.fence(k)).passed


def test_corrupted_poset4_is_caught():
    alg = A.poset4()
    op = [row[:] for row in alg._op]
    plus, minus = alg.elem("+"), alg.elem("-")
    op[plus][minus] = alg.zero
    bad = A.FiniteAlgebra("bad", alg.labels, alg._le, op, alg._inv)
    rep = A.validate_laws(bad)
    assert not rep.passed
    assert {"monoid/associativity", "monoid/monotone"} & set(rep.laws())
    assert all(w for _, w in rep.violations)


def test_make_builtin_shapes():
    d5 = A.make_builtin("digraph5")
    assert d5.n == 5 and d5.label(d5.inv(d5.elem("+"))) == "-"
    n3 = A.make_builtin("nat", [3])
    assert n3.labels == ("0", "1", "2", "3", "inf")
    assert n3.label(n3.oplus(n3.elem("2"), n3.elem("2"))) == "inf"
    f4 = A.make_builtin("fence", [4])
    assert {"(1,2)", "(2,1)", "(2,2)"} <= set(f4.labels)
    assert "(1,1)" not in f4.labels


def test_builtin_selector_forms():
    assert A.builtin_from_spec("nat(6)").name == "nat(6)"
    assert A.builtin_from_spec("nat:6").name == "nat(6)"
    assert A.builtin_from_spec("divisors(360)").n == 24
    assert A.builtin_from_spec("fence(6)").n == 19
    with pytest.raises(HMetricError):
        A.builtin_from_spec("poset4(2)")
    with pytest.raises(HMetricError):
        A.builtin_from_spec("lattice")


def test_residual_fixtures():
    n9 = A.nat(9)
    assert n9.label(A.residual_left(n9, n9.elem("5"), n9.elem("3"))) == "2"
    p4 = A.poset4()
    assert A.residual_left(p4, p4.elem("+"), p4.elem("+")) == p4.zero


def test_value_distance_fixtures():
    g3 = A.graph3()
    assert g3.label(A.value_distance(g3, g3.elem("0"), g3.elem("1/2"))) == "1/2"
    p4 = A.poset4()
    assert p4.label(A.value_distance(p4, p4.zero, p4.elem("+"))) == "+"


def test_inaccessible_sets():
    def labels(alg):
        return {alg.label(v) for v in A.inaccessible_set(alg)}

    assert labels(A.graph3()) == {"0", "1/2"}
    assert labels(A.poset4()) == {"0"}
    # the truncated nat(k): inf is reachable as 6 + 6, 1 is not
    assert labels(A.nat(6)) == {"0", "1"}


@pytest.mark.parametrize("alg", SMALL, ids=IDS)
def test_residuals_match_scan(alg):
    for v, g in product(alg.elements, repeat=2):
        assert alg.residual_left(v, g) == oracles.residual_left(alg, v, g)
        assert alg.residual_right(v, g) == oracles.residual_right(alg, v, g)
        assert alg.residual_left(v, alg.zero) == v


@pytest.mark.parametrize("alg", SMALL, ids=IDS)
def test_distance_matches_min_d(alg):
    for p, q in product(alg.elements, repeat=2):
        assert A.value_distance(alg, p, q) == oracles.value_distance(alg, p, q)


@pytest.mark.parametrize("alg", SMALL, ids=IDS)
def test_value_space_axioms(alg):
    E = alg.elements
    for p, q in product(E, repeat=2):
        d = alg.distance(p, q)
        assert (d == alg.zero) == (p == q)
        assert d == alg.inv(alg.distance(q, p))
        for s in E:
            assert alg.leq(d, alg.oplus(alg.distance(p, s), alg.distance(s, q)))


@pytest.mark.parametrize("alg", SMALL, ids=IDS)
def test_inaccessible_elements_are_self_dual(alg):
    inacc = A.inaccessible_set(alg)
    assert set(inacc) == oracles.inaccessible(alg)
    assert all(alg.inv(v) == v for v in inacc)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_meet_distributes_over_sums(alg, data):
    S = data.draw(st.sets(st.sampled_from(list(alg.elements)), max_size=alg.n))
    q = data.draw(st.sampled_from(list(alg.elements)))
    m = alg.meet_all(S)
    assert alg.oplus(m, q) == alg.meet_all(alg.oplus(s, q) for s in S)
    assert alg.oplus(q, m) == alg.meet_all(alg.oplus(q, s) for s in S)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_residual_is_least_witness(alg, data):
    v, g = data.draw(st.tuples(st.sampled_from(list(alg.elements)),
                               st.sampled_from(list(alg.elements))))
    r = alg.residual_left(v, g)
    assert alg.leq(v, alg.oplus(r, g))
    assert all(alg.leq(r, s) for s in alg.elements if alg.leq(v, alg.oplus(s, g)))


def test_fence_sum_concatenates_alternating_words():
    # (1,2) is up "+" and down "-+"; the junction letters merge when they agree
    assert A.fence_sum((1, 2), (1, 2), 6) == (1, 2)
    assert A.fence_sum((2, 1), (2, 1), 6) == (2, 1)
    assert A.fence_sum((1, 2), (2, 1), 6) == (2, 3)
    assert A.fence_sum((1, 2), (6, 6), 6) == (6, 7)
    assert A.fence_sum((0, 0), (2, 3), 6) == (2, 3)
    assert A.fence_sum(None, (1, 2), 6) is None


def test_fence_involution_on_odd_pairs():
    # x < y > z gives d(x,z) = d(z,x) = (2,3), so (2,3) is self-dual
    assert A.fence_inv((2, 3), 6) == (2, 3)
    assert A.fence_inv((1, 2), 6) == (2, 1)
    assert all(A.fence_inv(A.fence_inv(p, 6), 6) == p for p in A.fence_pairs(6))


def test_dump_round_trip():
    from hmetric.formats import parse_algebra

    for alg in SMALL:
        back = parse_algebra(alg.dump())
        assert back.labels == alg.labels
        assert back._le == alg._le and back._op == alg._op and back._inv == alg._inv


def test_elem_rejects_unknown():
    alg = A.poset4()
    assert alg.elem("−") == alg.elem("-")
    with pytest.raises(HMetricError):
        alg.elem("2")
    with pytest.raises(HMetricError):
        alg.elem(9)
