from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hmetric import factor as Fa
from hmetric.errors import CapExceeded, PreconditionError
from hmetric.wordlang import (
    EMPTY, FULL, WordAlgebra, antichain_normalize, parse_antichain, up_concat, zigzag_alphabet,
)

Z = zigzag_alphabet()


def ac(text):
    return parse_antichain(text)


antichains = st.lists(st.text(alphabet="+-", min_size=1, max_size=3), min_size=1, max_size=3).map(
    lambda ws: antichain_normalize(Z, ws))


def test_irreducible_fixtures():
    assert Fa.is_irreducible(Z, ac("{+}")) is True
    assert Fa.is_irreducible(Z, ac("{+-}")) is False
    assert Fa.is_irreducible(Z, FULL) == "unit"
    assert Fa.is_irreducible(Z, ac("{+-,-+}")) is True
    with pytest.raises(PreconditionError):
        Fa.is_irreducible(Z, EMPTY)


def test_factorize_fixtures():
    assert Fa.factorize(Z, FULL).factors == ()
    assert Fa.factorize(Z, ac("{+-}")).factors == (ac("{+}"), ac("{-}"))
    assert Fa.factorize(Z, ac("{+-+}")).factors == (ac("{+}"), ac("{-}"), ac("{+}"))
    with pytest.raises(PreconditionError):
        Fa.factorize(Z, EMPTY)


def test_divisor_oracle_fixtures():
    plus = ac("{+}")
    assert set(Fa.divisor_oracle(Z, plus)) == {(FULL, plus), (plus, FULL)}
    pm = ac("{+-}")
    assert set(Fa.divisor_oracle(Z, pm)) == {(FULL, pm), (pm, FULL), (plus, ac("{-}"))}
    with pytest.raises(CapExceeded):
        Fa.divisor_oracle(Z, ac("{+++++++}"))


def _brute_divisors(A, cands):
    return {(B, C) for B in cands for C in cands if up_concat(Z, B, C) == A}


def test_oracle_matches_exhaustive_pairs():
    # candidates: every antichain of at most two words of length <= 3
    words = oracles.words("+-", 3)[1:]
    cands = {FULL} | {antichain_normalize(Z, c) for k in (1, 2) for c in combinations(words, k)}
    for A in [ac("{+-}"), ac("{+-+}"), ac("{++,--}"), ac("{+-,-+}"), ac("{+--}")]:
        listed = set(Fa.divisor_oracle(Z, A))
        assert _brute_divisors(A, cands) <= listed
        assert all(up_concat(Z, B, C) == A for B, C in listed)


@settings(max_examples=60, deadline=None)
@given(antichains)
def test_factorization_properties(A):
    fac = Fa.factorize(Z, A)
    back = FULL
    for f in fac.factors:
        assert f != FULL and Fa.is_irreducible(Z, f) is True
        back = up_concat(Z, back, f)
    assert back == A
    assert Fa.is_irreducible(Z, A) == (len(fac.factors) == 1) or A == FULL
    assert Fa.all_factorizations(Z, A) == {fac.factors}


@settings(max_examples=40, deadline=None)
@given(antichains, antichains)
def test_factors_of_product_concatenate(A, B):
    fa, fb = Fa.factorize(Z, A).factors, Fa.factorize(Z, B).factors
    assert Fa.factorize(Z, up_concat(Z, A, B)).factors == fa + fb


def test_minimal_dfa_shape():
    for A in [ac("{+}"), ac("{+-,-+}"), ac("{++,--,+-+}")]:
        rep = Fa.separators(Z, A)
        assert len(rep.dfa.accepting) == 1


def test_envelope_block_path():
    H = WordAlgebra()
    assert len(Fa.envelope_block_path(H, ac("{+}"))) == 1
    blocks = Fa.envelope_block_path(H, ac("{+-}"))
    assert len(blocks) == 2 and len(set(blocks[0]) & set(blocks[1])) == 1
    assert Fa.envelope_block_path(H, FULL) == []


@pytest.mark.parametrize("A", ["{+}", "{+-}", "{+-+}", "{++,--}", "{+-,-+}", "{+--+}", "{++-,-}"])
def test_block_count_matches_factor_count(A):
    H = WordAlgebra()
    A = ac(A)
    assert len(Fa.envelope_block_path(H, A)) == len(Fa.factorize(Z, A).factors)


def test_ordered_alphabet_factorization():
    from hmetric.wordlang import parse_alphabet

    alph = parse_alphabet("alphabet a b c ; inv a c ; order a b c b")
    A = antichain_normalize(alph, ["ac"])
    fac = Fa.factorize(alph, A)
    assert [f.basis for f in fac.factors] == [("a",), ("c",)]
