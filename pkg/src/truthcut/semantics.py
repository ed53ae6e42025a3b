"""Finite-stage fixed-point semantics of self-applicable truth.

A monotone step operator over sets of sentence codes is evaluated on a
finite, dependency-closed universe.  Its clauses mirror the positive
inductive definition of grounded truth: true/false closed identities enter
unconditionally, a truth ascription enters when the ascribed code is in, a
negated truth ascription when the negated ascribed sentence's code is in,
double negations and (negated) conjunctions decompose, and universal
sentences are finitized to successor-chain numeral instances up to the
universe's term bound.  Iterating from the empty set saturates in at most
|universe| steps; the inductive norm of a member is the first stage
containing it.  Ungrounded sentences (liar, truth-teller) never enter.

Top and bot are not covered by the operator's printed clauses; they are
treated like the true and the false identity respectively (top and
not-bot enter at the first stage; bot and not-top never enter).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import chain_numeral
from .coding import (
    DecodeError,
    EvalError,
    codes_sentence,
    decode_sentence,
    encode,
    eval_term,
)
from .deriv import Derivation, compute_measures
from .syntax import (
    And,
    Bot,
    Eq,
    Forall,
    Formula,
    Not,
    Top,
    Tr,
    is_sentence,
    substitute,
)


class UniverseError(Exception):
    """Dependency closure exceeded the configured size cap."""


class CoverageError(Exception):
    """A formula needed by a check is not in the universe."""


@dataclass(frozen=True)
class SentenceUniverse:
    codes: frozenset[int]
    seeds: tuple[Formula, ...]
    term_bound: int

    def __contains__(self, code: int) -> bool:
        return code in self.codes

    def decoded(self) -> dict[int, Formula]:
        return {c: decode_sentence(c) for c in self.codes}


def _instances(phi: Forall, bound: int) -> list[Formula]:
    out = []
    for k in range(bound + 1):
        try:
            out.append(substitute(phi.body, phi.var, chain_numeral(k)))
        except Exception:
            continue
    return out


def _neg_code_of_ascribed(t) -> int | None:
    """Code of the negation of the sentence named by ``t``, if any."""
    try:
        c = eval_term(t)
        return encode(Not(decode_sentence(c)))
    except (EvalError, DecodeError):
        return None


def _dependencies(phi: Formula, bound: int) -> list[int]:
    if isinstance(phi, (Eq, Top, Bot)):
        return []
    if isinstance(phi, Tr):
        try:
            c = eval_term(phi.term)
        except EvalError:
            return []
        return [c] if codes_sentence(c) else []
    if isinstance(phi, And):
        return [encode(phi.left), encode(phi.right)]
    if isinstance(phi, Forall):
        return [encode(inst) for inst in _instances(phi, bound)]
    if isinstance(phi, Not):
        inner = phi.body
        if isinstance(inner, (Eq, Top, Bot)):
            return []
        if isinstance(inner, Tr):
            c = _neg_code_of_ascribed(inner.term)
            return [c] if c is not None else []
        if isinstance(inner, Not):
            return [encode(inner.body)]
        if isinstance(inner, And):
            return [encode(Not(inner.left)), encode(Not(inner.right))]
        if isinstance(inner, Forall):
            return [encode(Not(inst)) for inst in _instances(inner, bound)]
    return []


def build_universe(seeds, term_bound: int, max_size: int = 5000) -> SentenceUniverse:
    """Dependency-closed finite universe of sentence codes."""
    seeds = tuple(seeds)
    for s in seeds:
        if not is_sentence(s):
            raise UniverseError(f"seed is not a sentence: {s!r}")
    codes: set[int] = set()
    work = [encode(s) for s in seeds]
    while work:
        c = work.pop()
        if c in codes:
            continue
        if not codes_sentence(c):
            continue
        codes.add(c)
        if len(codes) > max_size:
            raise UniverseError(
                f"universe closure exceeded the size cap {max_size}"
            )
        work.extend(_dependencies(decode_sentence(c), term_bound))
    return SentenceUniverse(frozenset(codes), seeds, term_bound)


# ---------------------------------------------------------------------------
# Step operator and fixed point


def _clause_holds(phi: Formula, S: frozenset, bound: int) -> bool:
    if isinstance(phi, Eq):
        try:
            return eval_term(phi.left) == eval_term(phi.right)
        except EvalError:
            return False
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Tr):
        try:
            return eval_term(phi.term) in S
        except EvalError:
            return False
    if isinstance(phi, And):
        return encode(phi.left) in S and encode(phi.right) in S
    if isinstance(phi, Forall):
        insts = _instances(phi, bound)
        return bool(insts) and all(encode(i) in S for i in insts)
    if isinstance(phi, Not):
        inner = phi.body
        if isinstance(inner, Eq):
            try:
                return eval_term(inner.left) != eval_term(inner.right)
            except EvalError:
                return False
        if isinstance(inner, Top):
            return False
        if isinstance(inner, Bot):
            return True
        if isinstance(inner, Tr):
            c = _neg_code_of_ascribed(inner.term)
            return c is not None and c in S
        if isinstance(inner, Not):
            return encode(inner.body) in S
        if isinstance(inner, And):
            return encode(Not(inner.left)) in S or encode(Not(inner.right)) in S
        if isinstance(inner, Forall):
            return any(encode(Not(i)) in S for i in _instances(inner, bound))
    return False


def kripke_step(S, universe: SentenceUniverse) -> frozenset:
    """One application of the positive step operator; monotone in S."""
    S = frozenset(S)
    return frozenset(
        c for c in universe.codes
        if _clause_holds(decode_sentence(c), S, universe.term_bound)
    )


@dataclass(frozen=True)
class FixedPoint:
    universe: SentenceUniverse
    stages: tuple[frozenset, ...]  # stages[i] = operator iterated i+1 times
    members: frozenset
    saturation_index: int
    norms: dict[int, int] = field(compare=False)

    def norm(self, code: int) -> int | None:
        return self.norms.get(code)

    def grounded(self, phi: Formula) -> bool:
        return encode(phi) in self.members or encode(Not(phi)) in self.members


def least_fixed_point(universe: SentenceUniverse) -> FixedPoint:
    """Iterate the step operator from the empty set to saturation.

    Stage 0 is the first application (so true identities have norm 0);
    norms record each member's first stage."""
    stages: list[frozenset] = []
    norms: dict[int, int] = {}
    S: frozenset = frozenset()
    i = 0
    while True:
        S2 = kripke_step(S, universe)
        for c in S2:
            norms.setdefault(c, i)
        stages.append(S2)
        if S2 == S:
            break
        S = S2
        i += 1
    return FixedPoint(universe, tuple(stages), S, len(stages) - 1, norms)


# ---------------------------------------------------------------------------
# Correspondence checks


@dataclass(frozen=True)
class SoundnessVerdict:
    holds: bool
    alpha: int
    witness_side: str | None = None
    witness: Formula | None = None
    witness_norm: int | None = None


def check_soundness(d: Derivation, fp: FixedPoint) -> SoundnessVerdict:
    """A cut-free derivation's end sequent must be semantically backed: some
    antecedent member's negation, or some succedent member, is grounded with
    norm at most the derivation's length."""
    alpha = compute_measures(d).length
    missing = []
    for o in d.conclusion.ante:
        c = encode(Not(o.formula))
        if c not in fp.universe:
            missing.append(Not(o.formula))
            continue
        n = fp.norm(c)
        if n is not None and n <= alpha:
            return SoundnessVerdict(True, alpha, "ante", o.formula, n)
    for o in d.conclusion.succ:
        c = encode(o.formula)
        if c not in fp.universe:
            missing.append(o.formula)
            continue
        n = fp.norm(c)
        if n is not None and n <= alpha:
            return SoundnessVerdict(True, alpha, "succ", o.formula, n)
    if missing:
        raise CoverageError(
            f"end-sequent formulas not covered by the universe: {missing!r}"
        )
    return SoundnessVerdict(False, alpha)


@dataclass(frozen=True)
class CompletenessVerdict:
    status: str  # "proved" | "refuted" | "vacuous" | "budget_failure"
    norm: int | None = None
    proof_length: int | None = None


def _has_quantifier(phi: Formula) -> bool:
    if isinstance(phi, Forall):
        return True
    if isinstance(phi, Not):
        return _has_quantifier(phi.body)
    if isinstance(phi, And):
        return _has_quantifier(phi.left) or _has_quantifier(phi.right)
    return False


def check_completeness(phi: Formula, fp: FixedPoint, budget) -> CompletenessVerdict:
    """Grounded quantifier-free sentences are provable (their negations
    refutable) by bounded cut-free search."""
    from .search import search_cut_free

    if _has_quantifier(phi):
        return CompletenessVerdict("vacuous")
    c = encode(phi)
    cn = encode(Not(phi))
    if c in fp.members:
        r = search_cut_free([], [phi], budget, "lptn")
        if r.found:
            return CompletenessVerdict(
                "proved", fp.norm(c), compute_measures(r.derivation).length
            )
        return CompletenessVerdict("budget_failure", fp.norm(c))
    if cn in fp.members:
        r = search_cut_free([phi], [], budget, "lptn")
        if r.found:
            return CompletenessVerdict(
                "refuted", fp.norm(cn), compute_measures(r.derivation).length
            )
        return CompletenessVerdict("budget_failure", fp.norm(cn))
    return CompletenessVerdict("vacuous")


def check_transparency(fp: FixedPoint) -> list[tuple[int, int]]:
    """Pairs (code of T-ascription, ascribed code) violating transparency;
    empty means the fixed point is transparent on in-universe pairs."""
    bad = []
    for c in fp.universe.codes:
        phi = decode_sentence(c)
        if isinstance(phi, Tr):
            try:
                inner = eval_term(phi.term)
            except EvalError:
                continue
            if inner in fp.universe.codes:
                if (c in fp.members) != (inner in fp.members):
                    bad.append((c, inner))
    return bad


def check_consistency(fp: FixedPoint) -> list[int]:
    """Codes whose sentence and negated sentence are both in the fixed point
    (must be empty)."""
    bad = []
    for c in fp.universe.codes:
        cn = encode(Not(decode_sentence(c)))
        if c in fp.members and cn in fp.members:
            bad.append(c)
    return bad
