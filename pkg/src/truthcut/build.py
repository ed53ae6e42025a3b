"""Smart constructors for rule applications.

Each builder takes premise derivations plus the ids of the occurrences the
rule consumes, and produces a new node whose conclusion occurrences are fresh
and whose lineage is wired positionally.  Builders only do bookkeeping; the
kernel re-checks every side condition from scratch.
"""

from __future__ import annotations

from .coding import encode, quote
from .deriv import (
    Derivation,
    Occurrence,
    Sequent,
    copy_occ,
    occ,
)
from .syntax import (
    And,
    Eq,
    Forall,
    Formula,
    Not,
    Num,
    Suc,
    SynApp,
    Term,
    Tr,
    Var,
    Zero,
    substitute,
)


class BuildError(Exception):
    pass


def _find(premise: Derivation, occ_id: int) -> tuple[str, int, Occurrence]:
    hit = premise.conclusion.find(occ_id)
    if hit is None:
        raise BuildError(f"occurrence {occ_id} not in premise conclusion")
    return hit


def _fresh_ctx(
    premise: Derivation, consumed: set[int], premise_index: int = 0
) -> tuple[tuple[Occurrence, ...], tuple[Occurrence, ...], dict[int, tuple[tuple[int, int], ...]]]:
    """Copy the premise contexts (minus consumed occurrences) with fresh ids."""
    lineage: dict[int, tuple[tuple[int, int], ...]] = {}

    def side(occs):
        out = []
        for o in occs:
            if o.id in consumed:
                continue
            c = copy_occ(o)
            lineage[c.id] = ((premise_index, o.id),)
            out.append(c)
        return tuple(out)

    return side(premise.conclusion.ante), side(premise.conclusion.succ), lineage


def match_contexts(
    occs0: tuple[Occurrence, ...], occs1: tuple[Occurrence, ...]
) -> list[tuple[Occurrence, Occurrence]]:
    """First-fit pairing of equal formulas between two context multisets."""
    pool = list(occs1)
    out = []
    for o0 in occs0:
        for j, o1 in enumerate(pool):
            if o1.formula == o0.formula:
                out.append((o0, pool.pop(j)))
                break
        else:
            raise BuildError(f"contexts do not match: unpaired {o0.formula!r}")
    if pool:
        raise BuildError(f"contexts do not match: {len(pool)} extra occurrence(s)")
    return out


def _merge_ctx(
    p0: Derivation, consumed0: set[int], p1: Derivation, consumed1: set[int]
) -> tuple[tuple[Occurrence, ...], tuple[Occurrence, ...], dict[int, tuple[tuple[int, int], ...]]]:
    """Shared-context conclusion occurrences for a two-premise rule."""
    lineage: dict[int, tuple[tuple[int, int], ...]] = {}

    def side(side0, side1):
        left = tuple(o for o in side0 if o.id not in consumed0)
        right = tuple(o for o in side1 if o.id not in consumed1)
        out = []
        for o0, o1 in match_contexts(left, right):
            c = copy_occ(o0)
            lineage[c.id] = ((0, o0.id), (1, o1.id))
            out.append(c)
        return tuple(out)

    a = side(p0.conclusion.ante, p1.conclusion.ante)
    s = side(p0.conclusion.succ, p1.conclusion.succ)
    return a, s, lineage


# ---------------------------------------------------------------------------
# Leaves


def init_leaf(gamma, phi: Formula, delta) -> Derivation:
    left = occ(phi)
    right = occ(phi)
    concl = Sequent(
        tuple(occ(f) for f in gamma) + (left,),
        (right,) + tuple(occ(f) for f in delta),
    )
    return Derivation("init", concl, principal=(left.id, right.id))


def top_leaf(gamma, delta) -> Derivation:
    from .syntax import TOP

    p = occ(TOP)
    concl = Sequent(tuple(occ(f) for f in gamma), (p,) + tuple(occ(f) for f in delta))
    return Derivation("top", concl, principal=(p.id,))


def bot_leaf(gamma, delta) -> Derivation:
    from .syntax import BOT

    p = occ(BOT)
    concl = Sequent(tuple(occ(f) for f in gamma) + (p,), tuple(occ(f) for f in delta))
    return Derivation("bot", concl, principal=(p.id,))


def qg1_leaf(gamma, s: Term, delta) -> Derivation:
    p = occ(Eq(Suc(s), Zero()))
    concl = Sequent(tuple(occ(f) for f in gamma) + (p,), tuple(occ(f) for f in delta))
    return Derivation("qg1", concl, principal=(p.id,), term=s)


# ---------------------------------------------------------------------------
# Truth rules


def truth_left(premise: Derivation, active_id: int) -> Derivation:
    side, i, a = _find(premise, active_id)
    if side != "ante":
        raise BuildError("truth-left active must be in the antecedent")
    ante, succ, lineage = _fresh_ctx(premise, {active_id})
    p = occ(Tr(quote(a.formula)))
    ante = ante[:i] + (p,) + ante[i:]
    return Derivation(
        "Tl", Sequent(ante, succ), (premise,),
        principal=(p.id,), actives=((0, active_id),), lineage=lineage,
    )


def truth_right(premise: Derivation, active_id: int) -> Derivation:
    side, i, a = _find(premise, active_id)
    if side != "succ":
        raise BuildError("truth-right active must be in the succedent")
    ante, succ, lineage = _fresh_ctx(premise, {active_id})
    p = occ(Tr(quote(a.formula)))
    succ = succ[:i] + (p,) + succ[i:]
    return Derivation(
        "Tr", Sequent(ante, succ), (premise,),
        principal=(p.id,), actives=((0, active_id),), lineage=lineage,
    )


def comp_node(p0: Derivation, id_phi: int, p1: Derivation, id_psi: int) -> Derivation:
    s0, _, a0 = _find(p0, id_phi)
    s1, _, a1 = _find(p1, id_psi)
    if s0 != "succ" or s1 != "succ":
        raise BuildError("compositional actives must be in the succedents")
    ante, succ, lineage = _merge_ctx(p0, {id_phi}, p1, {id_psi})
    term = SynApp("anddot", (Num(encode(a0.formula)), Num(encode(a1.formula))))
    p = occ(Tr(term))
    return Derivation(
        "comp", Sequent(ante, succ + (p,)), (p0, p1),
        principal=(p.id,), actives=((0, id_phi), (1, id_psi)), lineage=lineage,
    )


# ---------------------------------------------------------------------------
# Propositional rules


def neg_left(premise: Derivation, active_id: int) -> Derivation:
    side, _, a = _find(premise, active_id)
    if side != "succ":
        raise BuildError("neg-left active must be in the succedent")
    ante, succ, lineage = _fresh_ctx(premise, {active_id})
    p = occ(Not(a.formula))
    return Derivation(
        "negl", Sequent(ante + (p,), succ), (premise,),
        principal=(p.id,), actives=((0, active_id),), lineage=lineage,
    )


def neg_right(premise: Derivation, active_id: int) -> Derivation:
    side, _, a = _find(premise, active_id)
    if side != "ante":
        raise BuildError("neg-right active must be in the antecedent")
    ante, succ, lineage = _fresh_ctx(premise, {active_id})
    p = occ(Not(a.formula))
    return Derivation(
        "negr", Sequent(ante, succ + (p,)), (premise,),
        principal=(p.id,), actives=((0, active_id),), lineage=lineage,
    )


def and_left(premise: Derivation, id_phi: int, id_psi: int) -> Derivation:
    s0, i, a0 = _find(premise, id_phi)
    s1, _, a1 = _find(premise, id_psi)
    if s0 != "ante" or s1 != "ante":
        raise BuildError("and-left actives must be in the antecedent")
    ante, succ, lineage = _fresh_ctx(premise, {id_phi, id_psi})
    p = occ(And(a0.formula, a1.formula))
    return Derivation(
        "andl", Sequent(ante + (p,), succ), (premise,),
        principal=(p.id,), actives=((0, id_phi), (0, id_psi)), lineage=lineage,
    )


def and_right(p0: Derivation, id_phi: int, p1: Derivation, id_psi: int) -> Derivation:
    s0, _, a0 = _find(p0, id_phi)
    s1, _, a1 = _find(p1, id_psi)
    if s0 != "succ" or s1 != "succ":
        raise BuildError("and-right actives must be in the succedents")
    ante, succ, lineage = _merge_ctx(p0, {id_phi}, p1, {id_psi})
    p = occ(And(a0.formula, a1.formula))
    return Derivation(
        "andr", Sequent(ante, succ + (p,)), (p0, p1),
        principal=(p.id,), actives=((0, id_phi), (1, id_psi)), lineage=lineage,
    )


def forall_left(
    premise: Derivation, kept_id: int, inst_id: int, term: Term
) -> Derivation:
    sk, i, kept = _find(premise, kept_id)
    si, _, inst = _find(premise, inst_id)
    if sk != "ante" or si != "ante":
        raise BuildError("forall-left actives must be in the antecedent")
    if not isinstance(kept.formula, Forall):
        raise BuildError("forall-left kept occurrence must be universal")
    ante, succ, lineage = _fresh_ctx(premise, {kept_id, inst_id})
    p = occ(kept.formula)
    ante = ante[:i] + (p,) + ante[i:] if i <= len(ante) else ante + (p,)
    return Derivation(
        "foralll", Sequent(ante, succ), (premise,),
        principal=(p.id,), actives=((0, kept_id), (0, inst_id)),
        lineage=lineage, term=term,
    )


def forall_right(
    premise: Derivation, active_id: int, forall_formula: Forall, eigen: str
) -> Derivation:
    side, _, a = _find(premise, active_id)
    if side != "succ":
        raise BuildError("forall-right active must be in the succedent")
    ante, succ, lineage = _fresh_ctx(premise, {active_id})
    p = occ(forall_formula)
    return Derivation(
        "forallr", Sequent(ante, succ + (p,)), (premise,),
        principal=(p.id,), actives=((0, active_id),), lineage=lineage,
        var=eigen,
    )


def cut(p0: Derivation, right_id: int, p1: Derivation, left_id: int) -> Derivation:
    s0, _, a0 = _find(p0, right_id)
    s1, _, a1 = _find(p1, left_id)
    if s0 != "succ" or s1 != "ante":
        raise BuildError("cut formula must be right in premise 0, left in premise 1")
    if a0.formula != a1.formula:
        raise BuildError("cut formulas differ")
    ante, succ, lineage = _merge_ctx(p0, {right_id}, p1, {left_id})
    return Derivation(
        "cut", Sequent(ante, succ), (p0, p1),
        actives=((0, right_id), (1, left_id)), lineage=lineage,
    )


# ---------------------------------------------------------------------------
# Geometric rules: each discharges active formulas from premise antecedents.


def _discharge(rule: str, premise: Derivation, active_ids: tuple[int, ...], **kw) -> Derivation:
    for aid in active_ids:
        side, _, _ = _find(premise, aid)
        if side != "ante":
            raise BuildError(f"{rule} active must be in the antecedent")
    ante, succ, lineage = _fresh_ctx(premise, set(active_ids))
    return Derivation(
        rule, Sequent(ante, succ), (premise,),
        actives=tuple((0, aid) for aid in active_ids), lineage=lineage, **kw,
    )


def eq1(premise: Derivation, active_id: int) -> Derivation:
    _, _, a = _find(premise, active_id)
    if not (isinstance(a.formula, Eq) and a.formula.left == a.formula.right):
        raise BuildError("eq1 discharges a reflexive equation")
    return _discharge("eq1", premise, (active_id,), term=a.formula.left)


def eq2(
    premise: Derivation,
    discharged_id: int,
    template_var: str,
    template: Formula,
    s: Term,
    t: Term,
) -> Derivation:
    return _discharge(
        "eq2", premise, (discharged_id,),
        template=(template_var, template), term=s, term2=t,
    )


def qg2(premise: Derivation, active_id: int) -> Derivation:
    _, _, a = _find(premise, active_id)
    if not isinstance(a.formula, Eq):
        raise BuildError("qg2 discharges an equation")
    return _discharge("qg2", premise, (active_id,), term=a.formula.left, term2=a.formula.right)


def qg3(
    p0: Derivation, active0_id: int, p1: Derivation, active1_id: int,
    x: Term, eigen: str,
) -> Derivation:
    s0, _, _ = _find(p0, active0_id)
    s1, _, _ = _find(p1, active1_id)
    if s0 != "ante" or s1 != "ante":
        raise BuildError("qg3 actives must be in the antecedents")
    ante, succ, lineage = _merge_ctx(p0, {active0_id}, p1, {active1_id})
    return Derivation(
        "qg3", Sequent(ante, succ), (p0, p1),
        actives=((0, active0_id), (1, active1_id)), lineage=lineage,
        term=x, var=eigen,
    )


def qg4(premise: Derivation, active_id: int, x: Term) -> Derivation:
    return _discharge("qg4", premise, (active_id,), term=x)


def qg5(premise: Derivation, active_id: int, x: Term, y: Term) -> Derivation:
    return _discharge("qg5", premise, (active_id,), term=x, term2=y)


def qg6(premise: Derivation, active_id: int, x: Term) -> Derivation:
    return _discharge("qg6", premise, (active_id,), term=x)


def qg7(premise: Derivation, active_id: int, x: Term, y: Term) -> Derivation:
    return _discharge("qg7", premise, (active_id,), term=x, term2=y)


# ---------------------------------------------------------------------------
# Axiom-instance formulas discharged by the geometric rules

from .syntax import Plus, Times


def qg4_axiom(x: Term) -> Formula:
    return Eq(Plus(x, Zero()), x)


def qg5_axiom(x: Term, y: Term) -> Formula:
    return Eq(Plus(x, Suc(y)), Suc(Plus(x, y)))


def qg6_axiom(x: Term) -> Formula:
    return Eq(Times(x, Zero()), Zero())


def qg7_axiom(x: Term, y: Term) -> Formula:
    return Eq(Times(x, Suc(y)), Plus(Times(x, y), x))
