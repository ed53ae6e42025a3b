"""Coding of expressions as naturals, evaluation, and diagonalization."""

import itertools
import random

import pytest

from truthcut.coding import (
    DecodeError,
    EvalError,
    codes_sentence,
    decode,
    decode_sentence,
    diagonalize,
    encode,
    eval_term,
    liar,
    pair,
    quote,
    truth_of,
    truth_teller,
    unpair,
)
from truthcut.syntax import (
    And,
    Bot,
    Eq,
    Forall,
    Not,
    Num,
    Plus,
    Suc,
    SynApp,
    Times,
    Top,
    Tr,
    Var,
    Zero,
    numeral,
)


def test_pairing_bijective():
    # [DERIVED] the pairing function is a bijection on an initial segment
    seen = {}
    for a in range(50):
        for b in range(50):
            c = pair(a, b)
            assert c not in seen
            seen[c] = (a, b)
            assert unpair(c) == (a, b)


def _random_term(rng, depth):
    if depth == 0:
        return rng.choice([Zero(), Num(rng.randrange(10)), Var("x"), Var("y")])
    k = rng.randrange(4)
    if k == 0:
        return Suc(_random_term(rng, depth - 1))
    if k == 1:
        return Plus(_random_term(rng, depth - 1), _random_term(rng, depth - 1))
    if k == 2:
        return Times(_random_term(rng, depth - 1), _random_term(rng, depth - 1))
    return rng.choice([Zero(), Num(rng.randrange(100))])


def _random_formula(rng, depth):
    if depth == 0:
        return rng.choice([
            Eq(_random_term(rng, 1), _random_term(rng, 1)),
            Tr(_random_term(rng, 1)),
            Top(),
            Bot(),
        ])
    k = rng.randrange(3)
    if k == 0:
        return Not(_random_formula(rng, depth - 1))
    if k == 1:
        return And(_random_formula(rng, depth - 1), _random_formula(rng, depth - 1))
    return Forall(rng.choice(["x", "y"]), _random_formula(rng, depth - 1))


def test_encode_injective_and_decode_inverse():
    # [DERIVED] >= 10^4 random expressions: codes are pairwise distinct for
    # distinct trees, and decode(encode(e)) reproduces e exactly
    rng = random.Random(20260825)
    exprs = []
    for _ in range(5000):
        exprs.append(_random_term(rng, rng.randrange(4)))
    for _ in range(5000):
        exprs.append(_random_formula(rng, rng.randrange(4)))
    codes = {}
    for e in exprs:
        c = encode(e)
        assert decode(c) == e
        if c in codes:
            assert codes[c] == e
        codes[c] = e
    distinct = {repr(e) for e in exprs}
    assert len({encode(e) for e in exprs}) == len(distinct)


def test_decode_rejects_garbage():
    # [DERIVED] not every natural is a code
    bad = 0
    for c in range(200):
        try:
            decode(c)
        except DecodeError:
            bad += 1
    assert bad > 0


def test_quote_and_decode_sentence():
    # [TRIVIAL]
    phi = Not(Eq(Zero(), Suc(Zero())))
    q = quote(phi)
    assert isinstance(q, Num)
    assert decode_sentence(q.value) == phi
    assert codes_sentence(q.value)
    assert not codes_sentence(encode(Eq(Var("x"), Zero())))  # open formula
    assert truth_of(phi) == Tr(q)


def test_eval_term_arithmetic():
    # [DERIVED] evaluation agrees with ordinary arithmetic
    two = Suc(Suc(Zero()))
    assert eval_term(two) == 2
    assert eval_term(Plus(two, Num(3))) == 5
    assert eval_term(Times(Num(4), two)) == 8
    assert eval_term(Num(0)) == 0
    with pytest.raises(EvalError):
        eval_term(Var("x"))


def test_eval_syntax_functions():
    # [DERIVED] syntax operations evaluate to the code of the built expression
    phi, psi = Eq(Zero(), Zero()), Eq(Num(1), Num(1))
    a, b = Num(encode(phi)), Num(encode(psi))
    assert eval_term(SynApp("negdot", (a,))) == encode(Not(phi))
    assert eval_term(SynApp("anddot", (a, b))) == encode(And(phi, psi))
    assert eval_term(SynApp("num", (Num(3),))) == encode(numeral(3))


def test_diagonalization_fixed_point():
    # [DERIVED] the diagonal sentence lam of phi(v) satisfies
    # lam == phi(numeral(#lam)), checked by decoding the code
    from truthcut.syntax import substitute

    phi = Not(Tr(Var("v")))
    lam = diagonalize(phi, "v")
    c = encode(lam)
    assert decode(c) == lam
    assert lam == substitute(phi, "v", numeral(c))


def test_liar_and_truth_teller():
    # [DERIVED] liar: lam = not T(numeral(#lam)); truth-teller: tt = T(numeral(#tt))
    lam = liar()
    assert isinstance(lam, Not) and isinstance(lam.body, Tr)
    assert lam.body.term == numeral(encode(lam))
    tt = truth_teller()
    assert isinstance(tt, Tr)
    assert tt.term == numeral(encode(tt))
    assert encode(lam) != encode(tt)


def test_distinct_diagonal_sentences():
    # [DERIVED] diagonalizing different matrices gives different sentences
    a = diagonalize(Not(Tr(Var("v"))), "v")
    b = diagonalize(Tr(Var("v")), "v")
    c = diagonalize(And(Tr(Var("v")), Eq(Zero(), Zero())), "v")
    assert len({encode(a), encode(b), encode(c)}) == 3
