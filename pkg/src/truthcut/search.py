"""Bounded backward cut-free proof search.

Backward application of the logical and truth rules, with three budgets:
``max_depth`` (backward rule applications per branch), ``max_term_index``
(largest successor-chain numeral tried for universal instantiation), and
``max_tau_unfold`` (truth-rule unquotings per branch, which caps liar-driven
divergence).  Goals are closed by initial sequents, top/bot, the
zero-successor axiom, and — in the systems with geometric rules — by the
closed-equation macros of :mod:`truthcut.arith`; macro closures consume no
depth (they are axiom-level decisions, not search steps).

``exhausted`` results carry the frontier of unproved leaves.  A returned
derivation always validates in the kernel and contains no cut.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import build as B
from .arith import can_prove, can_refute, chain_numeral, prove_equation, refute_equation
from .coding import DecodeError, decode_sentence
from .deriv import Derivation
from .syntax import (
    And,
    Bot,
    Eq,
    Forall,
    Formula,
    Not,
    Plus,
    Suc,
    Term,
    Times,
    Top,
    Tr,
    Var,
    Zero,
    free_vars,
    is_closed,
    numeral_value,
    substitute,
)

_GEOMETRIC_SYSTEMS = ("qg", "lptn", "lptn_comp")
_TRUTH_SYSTEMS = ("lgt", "lptn", "lptn_comp")


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 12
    max_term_index: int = 8
    max_tau_unfold: int = 6

    def __post_init__(self):
        if self.max_depth < 0 or self.max_term_index < 0 or self.max_tau_unfold < 0:
            raise ValueError("budgets must be non-negative")


@dataclass
class SearchResult:
    derivation: Derivation | None
    frontier: list[tuple[tuple[Formula, ...], tuple[Formula, ...]]] = field(
        default_factory=list
    )

    @property
    def found(self) -> bool:
        return self.derivation is not None


def _key(ante, succ):
    return (
        frozenset(Counter(ante).items()),
        frozenset(Counter(succ).items()),
    )


def _minus_one(fs, f):
    out = list(fs)
    out.remove(f)
    return tuple(out)


def _is_zero(t: Term) -> bool:
    from .syntax import Num

    return isinstance(t, Zero) or (isinstance(t, Num) and t.value == 0)


def _find_succ_id(d: Derivation, f: Formula) -> int:
    for o in d.conclusion.succ:
        if o.formula == f:
            return o.id
    raise AssertionError("search bookkeeping lost a succedent formula")


def _find_ante_id(d: Derivation, f: Formula) -> int:
    for o in d.conclusion.ante:
        if o.formula == f:
            return o.id
    raise AssertionError("search bookkeeping lost an antecedent formula")


def _closed_subterms(fs) -> list[Term]:
    """Closed terms occurring in the goal, in first-seen order."""
    out: list[Term] = []
    seen = set()

    def walk_term(t: Term):
        if is_closed(t) and t not in seen:
            seen.add(t)
            out.append(t)
        for c in _term_children(t):
            walk_term(c)

    def _term_children(t: Term):
        if isinstance(t, Suc):
            return (t.child,)
        if isinstance(t, (Plus, Times)):
            return (t.left, t.right)
        return ()

    def walk(phi: Formula):
        if isinstance(phi, Eq):
            walk_term(phi.left)
            walk_term(phi.right)
        elif isinstance(phi, Tr):
            walk_term(phi.term)
        elif isinstance(phi, Not):
            walk(phi.body)
        elif isinstance(phi, And):
            walk(phi.left)
            walk(phi.right)
        elif isinstance(phi, Forall):
            walk(phi.body)

    for f in fs:
        walk(f)
    return out


class _Searcher:
    def __init__(self, budget: SearchBudget, system: str):
        self.budget = budget
        self.system = system
        self.frontier: list = []
        self.fail_memo: set = set()
        self._eigen = 0

    def fresh_eigen(self) -> str:
        self._eigen += 1
        return f"ev{self._eigen}"

    # -- closures ----------------------------------------------------------

    def close(self, ante, succ) -> Derivation | None:
        if self.system == "lgt":
            for f in succ:
                if isinstance(f, Top):
                    return B.top_leaf(list(ante), list(_minus_one(succ, f)))
            for f in ante:
                if isinstance(f, Bot):
                    return B.bot_leaf(list(_minus_one(ante, f)), list(succ))
        for f in succ:
            if isinstance(f, Eq) and f in ante:
                return B.init_leaf(
                    list(_minus_one(ante, f)), f, list(_minus_one(succ, f))
                )
        if self.system in _GEOMETRIC_SYSTEMS:
            for f in ante:
                if isinstance(f, Eq) and isinstance(f.left, Suc) and _is_zero(f.right):
                    return B.qg1_leaf(
                        list(_minus_one(ante, f)), f.left.child, list(succ)
                    )
            for f in ante:
                if isinstance(f, Eq) and can_refute(f.left, f.right):
                    return refute_equation(
                        list(_minus_one(ante, f)), f.left, f.right, list(succ)
                    )
            for f in succ:
                if isinstance(f, Eq) and can_prove(f.left, f.right):
                    return prove_equation(
                        list(ante), f.left, f.right, list(_minus_one(succ, f))
                    )
        return None

    # -- expansion ---------------------------------------------------------

    def prove(self, ante, succ, depth, tau, visited) -> Derivation | None:
        d = self.close(ante, succ)
        if d is not None:
            return d
        key = _key(ante, succ)
        if key in visited:
            # loop check: an identical goal is already open on this branch
            self.frontier.append((tuple(ante), tuple(succ)))
            return None
        if (key, depth, tau) in self.fail_memo:
            return None
        if depth == 0:
            self.frontier.append((tuple(ante), tuple(succ)))
            self.fail_memo.add((key, depth, tau))
            return None
        visited = visited | {key}
        d = self._expand(ante, succ, depth, tau, visited)
        if d is None:
            if not self._has_expansion(ante, succ, tau):
                self.frontier.append((tuple(ante), tuple(succ)))
            self.fail_memo.add((key, depth, tau))
        return d

    def _has_expansion(self, ante, succ, tau) -> bool:
        truth_ok = self.system in _TRUTH_SYSTEMS
        for f in ante + succ:
            if isinstance(f, (Not, And, Forall)):
                return True
            if isinstance(f, Tr) and truth_ok and tau > 0 and self._unquote(f):
                return True
        return False

    def _expand(self, ante, succ, depth, tau, visited) -> Derivation | None:
        truth_ok = self.system in _TRUTH_SYSTEMS
        for f in ante:
            if isinstance(f, Not):
                p = self.prove(
                    _minus_one(ante, f), succ + (f.body,), depth - 1, tau, visited
                )
                if p is not None:
                    return B.neg_left(p, _find_succ_id(p, f.body))
            elif isinstance(f, And):
                p = self.prove(
                    _minus_one(ante, f) + (f.left, f.right), succ,
                    depth - 1, tau, visited,
                )
                if p is not None:
                    return B.and_left(
                        p, _find_ante_id(p, f.left), _find_ante_id(p, f.right)
                    )
            elif isinstance(f, Tr) and truth_ok and tau > 0:
                phi = self._unquote(f)
                if phi is not None:
                    p = self.prove(
                        _minus_one(ante, f) + (phi,), succ,
                        depth - 1, tau - 1, visited,
                    )
                    if p is not None:
                        return B.truth_left(p, _find_ante_id(p, phi))
            elif isinstance(f, Forall):
                for t in self._instances(ante, succ):
                    try:
                        inst = substitute(f.body, f.var, t)
                    except Exception:
                        continue
                    if inst in ante:
                        continue
                    p = self.prove(
                        ante + (inst,), succ, depth - 1, tau, visited
                    )
                    if p is not None:
                        return B.forall_left(
                            p, _find_ante_id(p, f), _find_ante_id(p, inst), t
                        )
        for f in succ:
            if isinstance(f, Not):
                p = self.prove(
                    ante + (f.body,), _minus_one(succ, f), depth - 1, tau, visited
                )
                if p is not None:
                    return B.neg_right(p, _find_ante_id(p, f.body))
            elif isinstance(f, And):
                p0 = self.prove(
                    ante, _minus_one(succ, f) + (f.left,), depth - 1, tau, visited
                )
                if p0 is None:
                    continue
                p1 = self.prove(
                    ante, _minus_one(succ, f) + (f.right,), depth - 1, tau, visited
                )
                if p1 is None:
                    continue
                return B.and_right(
                    p0, _find_succ_id(p0, f.left), p1, _find_succ_id(p1, f.right)
                )
            elif isinstance(f, Tr) and truth_ok and tau > 0:
                phi = self._unquote(f)
                if phi is not None:
                    p = self.prove(
                        ante, _minus_one(succ, f) + (phi,),
                        depth - 1, tau - 1, visited,
                    )
                    if p is not None:
                        return B.truth_right(p, _find_succ_id(p, phi))
            elif isinstance(f, Forall):
                y = self.fresh_eigen()
                try:
                    inst = substitute(f.body, f.var, Var(y))
                except Exception:
                    continue
                p = self.prove(
                    ante, _minus_one(succ, f) + (inst,), depth - 1, tau, visited
                )
                if p is not None:
                    return B.forall_right(p, _find_succ_id(p, inst), f, y)
        return None

    def _unquote(self, f: Tr) -> Formula | None:
        n = numeral_value(f.term)
        if n is None:
            return None
        try:
            return decode_sentence(n)
        except DecodeError:
            return None

    def _instances(self, ante, succ) -> list[Term]:
        out = [chain_numeral(k) for k in range(self.budget.max_term_index + 1)]
        seen = set(out)
        for t in _closed_subterms(ante + succ):
            if t not in seen:
                seen.add(t)
                out.append(t)
        return out


def search_cut_free(ante, succ, budget: SearchBudget, system: str) -> SearchResult:
    """Backward search for a cut-free derivation of ante => succ."""
    searcher = _Searcher(budget, system)
    d = searcher.prove(
        tuple(ante), tuple(succ), budget.max_depth, budget.max_tau_unfold,
        frozenset(),
    )
    if d is None:
        frontier = []
        seen = set()
        for goal in searcher.frontier:
            k = _key(goal[0], goal[1])
            if k not in seen:
                seen.add(k)
                frontier.append(goal)
        return SearchResult(None, frontier)
    return SearchResult(d, [])


@dataclass
class ConservativityReport:
    entries: list[dict]

    @property
    def symmetric(self) -> bool:
        return all(e["lptn"] == e["qg"] for e in self.entries)

    def asymmetries(self) -> list[dict]:
        return [e for e in self.entries if e["lptn"] != e["qg"]]


def check_conservativity(sequents, budget: SearchBudget) -> ConservativityReport:
    """For T-free sequents, provability-within-budget must coincide between
    the truth system and its arithmetical base."""
    entries = []
    for ante, succ in sequents:
        r_lptn = search_cut_free(ante, succ, budget, "lptn")
        r_qg = search_cut_free(ante, succ, budget, "qg")
        entries.append({
            "ante": tuple(ante),
            "succ": tuple(succ),
            "lptn": r_lptn.found,
            "qg": r_qg.found,
        })
    return ConservativityReport(entries)
