"""Finite-stage fixed-point semantics and correspondence checks."""

import pytest

from truthcut.coding import encode, liar, quote, truth_of, truth_teller
from truthcut.search import SearchBudget, search_cut_free
from truthcut.semantics import (
    UniverseError,
    build_universe,
    check_completeness,
    check_consistency,
    check_soundness,
    check_transparency,
    kripke_step,
    least_fixed_point,
)
from truthcut.syntax import And, Eq, Forall, Not, Suc, Tr, Var, Zero

PHI = Eq(Zero(), Zero())
BAD = Eq(Zero(), Suc(Zero()))


def test_universe_closure():
    # [DERIVED] dependencies of a truth ascription include the ascribed code
    u = build_universe([truth_of(PHI)], term_bound=2)
    assert encode(truth_of(PHI)) in u
    assert encode(PHI) in u


def test_universe_rejects_open_seeds():
    # [TRIVIAL]
    with pytest.raises(UniverseError):
        build_universe([Eq(Var("x"), Zero())], term_bound=2)


def test_universe_size_cap():
    # [TRIVIAL]
    fa = Forall("x", Eq(Var("x"), Var("x")))
    with pytest.raises(UniverseError):
        build_universe([fa], term_bound=10, max_size=3)


def test_step_operator_monotone():
    # [DERIVED] S subset of S' implies step(S) subset of step(S')
    u = build_universe(
        [truth_of(PHI), Not(truth_of(BAD)), And(PHI, Not(BAD))], 2
    )
    empty = kripke_step(frozenset(), u)
    bigger = kripke_step(empty, u)
    assert empty <= bigger
    assert kripke_step(empty, u) <= kripke_step(bigger, u)


def test_norms_count_truth_iterations():
    # [DERIVED] each truth ascription enters one stage after its content
    t1 = truth_of(PHI)
    t2 = truth_of(t1)
    u = build_universe([t2], 2)
    fp = least_fixed_point(u)
    assert fp.norm(encode(PHI)) == 0
    assert fp.norm(encode(t1)) == 1
    assert fp.norm(encode(t2)) == 2
    assert fp.grounded(PHI) and fp.grounded(t2)


def test_negated_ascription_and_falsehoods():
    # [DERIVED] the negation of an ascription of a refutable sentence enters;
    # the false identity never does
    na = Not(truth_of(BAD))
    u = build_universe([na], 2)
    fp = least_fixed_point(u)
    assert encode(na) in fp.members
    assert encode(BAD) not in fp.members
    assert fp.norm(encode(Not(BAD))) == 0


def test_quantified_sentences_finitized():
    # [DERIVED] universals enter when every chain-numeral instance up to the
    # bound has entered
    fa = Forall("x", Not(Eq(Suc(Var("x")), Zero())))
    u = build_universe([fa], 3)
    fp = least_fixed_point(u)
    assert encode(fa) in fp.members


def test_liar_and_truth_teller_ungrounded():
    # [DERIVED]
    lam, tt = liar(), truth_teller()
    u = build_universe([lam, tt], 2)
    fp = least_fixed_point(u)
    for s in (lam, Not(lam), tt, Not(tt)):
        assert encode(s) not in fp.members
    assert not fp.grounded(lam)
    assert not fp.grounded(tt)


def test_transparency_and_consistency():
    # [DERIVED]
    u = build_universe(
        [truth_of(truth_of(PHI)), Not(truth_of(BAD)), liar(), truth_teller()], 2
    )
    fp = least_fixed_point(u)
    assert check_transparency(fp) == []
    assert check_consistency(fp) == []


def test_soundness_on_search_proofs():
    # [DERIVED] for a found cut-free proof, some end-sequent formula is
    # semantically backed at a stage within the proof length
    bud = SearchBudget(6, 3, 3)
    goal = truth_of(PHI)
    r = search_cut_free([], [goal], bud, "lptn")
    assert r.found
    u = build_universe([goal], 2)
    fp = least_fixed_point(u)
    v = check_soundness(r.derivation, fp)
    assert v.holds
    assert v.witness_norm <= v.alpha


def test_completeness_of_grounded_members():
    # [DERIVED] grounded quantifier-free members are provable within budget
    u = build_universe([truth_of(PHI), Not(truth_of(BAD))], 2)
    fp = least_fixed_point(u)
    bud = SearchBudget(8, 3, 4)
    for c in fp.members:
        from truthcut.coding import decode_sentence

        v = check_completeness(decode_sentence(c), fp, bud)
        assert v.status in ("proved", "refuted", "vacuous")


def test_completeness_vacuous_for_ungrounded():
    # [TRIVIAL] no claim for ungrounded sentences
    lam = liar()
    u = build_universe([lam], 2)
    fp = least_fixed_point(u)
    v = check_completeness(lam, fp, SearchBudget(4, 2, 2))
    assert v.status == "vacuous"
