"""Derivation validation for the four rule systems.

Systems:

* ``lgt``       — restricted initial sequents (principal must be an atomic
                  T-free equation), top/bot axioms, truth rules, the
                  not/and/forall rules, and cut.
* ``qg``        — lgt minus top/bot and minus the truth rules, plus the
                  equality rules (eq1, eq2) and the geometric arithmetic
                  rules (qg1..qg7).
* ``lptn``      — qg plus the truth rules over numerals.
* ``lptn_comp`` — lptn plus the pointwise compositional truth rule.

Validation never raises on bad derivations: every problem becomes a
:class:`Violation` with a node path and a stable reason code.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coding import DecodeError, decode_sentence
from .deriv import Derivation, Occurrence
from .syntax import (
    And,
    Bot,
    CaptureError,
    Eq,
    Forall,
    Formula,
    Not,
    Num,
    Plus,
    Suc,
    Times,
    Top,
    Tr,
    Var,
    Zero,
    bound_vars,
    free_vars,
    is_base_atom,
    is_sentence,
    numeral_value,
    substitute,
)

SYSTEMS = ("lgt", "qg", "lptn", "lptn_comp")

_LOGICAL_CORE = (
    "init", "cut", "negl", "negr", "andl", "andr", "foralll", "forallr",
)
_GEOMETRIC = ("eq1", "eq2", "qg1", "qg2", "qg3", "qg4", "qg5", "qg6", "qg7")

SYSTEM_RULES: dict[str, tuple[str, ...]] = {
    "lgt": _LOGICAL_CORE + ("top", "bot", "Tl", "Tr"),
    "qg": _LOGICAL_CORE + _GEOMETRIC,
    "lptn": _LOGICAL_CORE + _GEOMETRIC + ("Tl", "Tr"),
    "lptn_comp": _LOGICAL_CORE + _GEOMETRIC + ("Tl", "Tr", "comp"),
}

# reason codes
UNKNOWN_RULE = "UNKNOWN_RULE"
RULE_NOT_IN_SYSTEM = "RULE_NOT_IN_SYSTEM"
MALFORMED_RULE = "MALFORMED_RULE"
REF_MINUS_T_PRINCIPAL = "REF_MINUS_T_PRINCIPAL"
PRINCIPAL_MISMATCH = "PRINCIPAL_MISMATCH"
LINEAGE_BROKEN = "LINEAGE_BROKEN"
OCC_ID_REUSE = "OCC_ID_REUSE"
EIGENVAR_CLASH = "EIGENVAR_CLASH"
PURE_VARIABLE_CLASH = "PURE_VARIABLE_CLASH"
NUMERAL_DECODE_MISMATCH = "NUMERAL_DECODE_MISMATCH"
NOT_A_SENTENCE = "NOT_A_SENTENCE"
WITNESS_MISMATCH = "WITNESS_MISMATCH"
TEMPLATE_MISMATCH = "TEMPLATE_MISMATCH"
COMP_TERM_MISMATCH = "COMP_TERM_MISMATCH"


@dataclass(frozen=True)
class Violation:
    path: tuple[int, ...]
    code: str
    message: str

    def __str__(self) -> str:
        where = "/".join(map(str, self.path)) or "root"
        return f"[{self.code}] at {where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    system: str
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}


class InvalidDerivation(Exception):
    def __init__(self, report: ValidationReport):
        super().__init__("; ".join(str(v) for v in report.violations))
        self.report = report


def _is_zero_term(t) -> bool:
    return isinstance(t, Zero) or (isinstance(t, Num) and t.value == 0)


class _Checker:
    def __init__(self, system: str):
        self.system = system
        self.violations: list[Violation] = []
        self.eigen_nodes: list[tuple[tuple[int, ...], str]] = []

    def bad(self, path, code, message) -> None:
        self.violations.append(Violation(tuple(path), code, message))

    # -- plumbing ----------------------------------------------------------

    def check_ids(self, d: Derivation) -> None:
        seen: set[int] = set()
        for path, node in d.iter_nodes():
            for o in node.conclusion.all_occurrences():
                if o.id in seen:
                    self.bad(path, OCC_ID_REUSE, f"occurrence id {o.id} reused")
                seen.add(o.id)

    def check_wiring(self, path, node: Derivation) -> bool:
        """Lineage/active bookkeeping: every premise occurrence is consumed
        exactly once; every conclusion occurrence is principal or descends
        from exactly one occurrence per premise; formulas pass through
        contexts unchanged.  Returns False if too broken to rule-check."""
        ok = True
        prem_occ: list[dict[int, Occurrence]] = [
            {o.id: o for o in p.conclusion.all_occurrences()} for p in node.premises
        ]
        used: list[set[int]] = [set() for _ in node.premises]

        def consume(pi, oid) -> Occurrence | None:
            nonlocal ok
            if pi >= len(node.premises) or oid not in prem_occ[pi]:
                self.bad(path, LINEAGE_BROKEN,
                         f"reference ({pi},{oid}) is not a premise occurrence")
                ok = False
                return None
            if oid in used[pi]:
                self.bad(path, LINEAGE_BROKEN,
                         f"premise occurrence {oid} consumed twice")
                ok = False
            used[pi].add(oid)
            return prem_occ[pi][oid]

        for pi, oid in node.actives:
            consume(pi, oid)

        principal = set(node.principal)
        concl_ids = {o.id for o in node.conclusion.all_occurrences()}
        for pid in principal:
            if pid not in concl_ids:
                self.bad(path, LINEAGE_BROKEN,
                         f"principal id {pid} not in conclusion")
                ok = False
        for o in node.conclusion.all_occurrences():
            if o.id in principal:
                continue
            parents = node.lineage.get(o.id)
            if not node.premises:
                if parents:
                    self.bad(path, LINEAGE_BROKEN, "leaf node has lineage")
                    ok = False
                continue
            if parents is None:
                self.bad(path, LINEAGE_BROKEN,
                         f"context occurrence {o.id} has no lineage")
                ok = False
                continue
            if sorted(pi for pi, _ in parents) != list(range(len(node.premises))):
                self.bad(path, LINEAGE_BROKEN,
                         f"occurrence {o.id} must have one parent per premise")
                ok = False
            side = node.conclusion.side_of(o.id)
            for pi, oid in parents:
                parent = consume(pi, oid)
                if parent is None:
                    continue
                if parent.formula != o.formula:
                    self.bad(path, LINEAGE_BROKEN,
                             f"context occurrence {o.id} changes formula")
                    ok = False
                if node.premises[pi].conclusion.side_of(oid) != side:
                    self.bad(path, LINEAGE_BROKEN,
                             f"context occurrence {o.id} changes side")
                    ok = False
        for pi, p in enumerate(node.premises):
            leftover = set(prem_occ[pi]) - used[pi]
            if leftover:
                self.bad(path, LINEAGE_BROKEN,
                         f"premise {pi} occurrences {sorted(leftover)} not "
                         "carried into the conclusion")
                ok = False
        return ok

    # -- helpers for rule bodies -------------------------------------------

    def _principals(self, path, node, n) -> list[tuple[str, Occurrence]] | None:
        if len(node.principal) != n:
            self.bad(path, MALFORMED_RULE,
                     f"{node.rule} needs {n} principal occurrence(s), "
                     f"got {len(node.principal)}")
            return None
        out = []
        for pid in node.principal:
            hit = node.conclusion.find(pid)
            if hit is None:
                return None  # already reported by wiring
            out.append((hit[0], hit[2]))
        return out

    def _actives(self, path, node, spec) -> list[Occurrence] | None:
        """spec: list of (premise_index, side). Returns active occurrences."""
        if len(node.actives) != len(spec):
            self.bad(path, MALFORMED_RULE,
                     f"{node.rule} needs {len(spec)} active occurrence(s), "
                     f"got {len(node.actives)}")
            return None
        out = []
        for (want_pi, want_side), (pi, oid) in zip(spec, node.actives):
            if pi != want_pi:
                self.bad(path, MALFORMED_RULE,
                         f"{node.rule} active in wrong premise ({pi})")
                return None
            hit = node.premises[pi].conclusion.find(oid)
            if hit is None:
                return None
            if hit[0] != want_side:
                self.bad(path, MALFORMED_RULE,
                         f"{node.rule} active on wrong side ({hit[0]})")
                return None
            out.append(hit[2])
        return out

    def _expect_premises(self, path, node, n) -> bool:
        if len(node.premises) != n:
            self.bad(path, MALFORMED_RULE,
                     f"{node.rule} takes {n} premise(s), got {len(node.premises)}")
            return False
        return True

    # -- per-rule checks ---------------------------------------------------

    def check_node(self, path, node: Derivation) -> None:
        rule = node.rule
        if rule not in SYSTEM_RULES.get(self.system, ()):
            known = any(rule in rules for rules in SYSTEM_RULES.values())
            self.bad(path, RULE_NOT_IN_SYSTEM if known else UNKNOWN_RULE,
                     f"rule {rule!r} is not part of system {self.system}")
            return
        if not self.check_wiring(path, node):
            return
        getattr(self, f"rule_{rule}")(path, node)

    def rule_init(self, path, node) -> None:
        if not self._expect_premises(path, node, 0):
            return
        ps = self._principals(path, node, 2)
        if ps is None:
            return
        (side_l, left), (side_r, right) = ps
        if side_l != "ante" or side_r != "succ":
            self.bad(path, MALFORMED_RULE,
                     "initial sequent principals must be one per side")
            return
        if left.formula != right.formula:
            self.bad(path, PRINCIPAL_MISMATCH,
                     "initial sequent principal formulas differ")
            return
        if not is_base_atom(left.formula):
            self.bad(path, REF_MINUS_T_PRINCIPAL,
                     "initial sequent principal must be an atomic T-free "
                     f"equation, got {left.formula!r}")

    def rule_top(self, path, node) -> None:
        if not self._expect_premises(path, node, 0):
            return
        ps = self._principals(path, node, 1)
        if ps is None:
            return
        side, p = ps[0]
        if side != "succ" or not isinstance(p.formula, Top):
            self.bad(path, MALFORMED_RULE, "top axiom principal must be top "
                     "in the succedent")

    def rule_bot(self, path, node) -> None:
        if not self._expect_premises(path, node, 0):
            return
        ps = self._principals(path, node, 1)
        if ps is None:
            return
        side, p = ps[0]
        if side != "ante" or not isinstance(p.formula, Bot):
            self.bad(path, MALFORMED_RULE, "bot axiom principal must be bot "
                     "in the antecedent")

    def rule_cut(self, path, node) -> None:
        if not self._expect_premises(path, node, 2):
            return
        if node.principal:
            self.bad(path, MALFORMED_RULE, "cut has no principal formula")
            return
        acts = self._actives(path, node, [(0, "succ"), (1, "ante")])
        if acts is None:
            return
        if acts[0].formula != acts[1].formula:
            self.bad(path, PRINCIPAL_MISMATCH, "cut formulas differ")

    def _truth_rule(self, path, node, side) -> None:
        if not self._expect_premises(path, node, 1):
            return
        ps = self._principals(path, node, 1)
        acts = self._actives(path, node, [(0, side)])
        if ps is None or acts is None:
            return
        pside, p = ps[0]
        a = acts[0]
        if pside != side or not isinstance(p.formula, Tr):
            self.bad(path, MALFORMED_RULE,
                     f"truth-rule principal must be a T atom in the {side}cedent")
            return
        if not is_sentence(a.formula):
            self.bad(path, NOT_A_SENTENCE,
                     f"truth rule disquotes a non-sentence: {a.formula!r}")
            return
        n = numeral_value(p.formula.term)
        if n is None:
            self.bad(path, NUMERAL_DECODE_MISMATCH,
                     f"truth-rule principal term {p.formula.term!r} is not a numeral")
            return
        try:
            decoded = decode_sentence(n)
        except DecodeError as e:
            self.bad(path, NUMERAL_DECODE_MISMATCH, str(e))
            return
        if decoded != a.formula:
            self.bad(path, NUMERAL_DECODE_MISMATCH,
                     f"numeral {n} codes {decoded!r}, not the premise active "
                     f"{a.formula!r}")

    def rule_Tl(self, path, node) -> None:
        self._truth_rule(path, node, "ante")

    def rule_Tr(self, path, node) -> None:
        self._truth_rule(path, node, "succ")

    def rule_comp(self, path, node) -> None:
        if not self._expect_premises(path, node, 2):
            return
        ps = self._principals(path, node, 1)
        acts = self._actives(path, node, [(0, "succ"), (1, "succ")])
        if ps is None or acts is None:
            return
        pside, p = ps[0]
        if pside != "succ" or not isinstance(p.formula, Tr):
            self.bad(path, MALFORMED_RULE,
                     "compositional principal must be a T atom in the succedent")
            return
        for a in acts:
            if not is_sentence(a.formula):
                self.bad(path, NOT_A_SENTENCE,
                         f"compositional rule combines a non-sentence: {a.formula!r}")
                return
        from .coding import encode
        from .syntax import SynApp

        want = SynApp(
            "anddot",
            (Num(encode(acts[0].formula)), Num(encode(acts[1].formula))),
        )
        if p.formula.term != want:
            self.bad(path, COMP_TERM_MISMATCH,
                     f"compositional term must be {want!r}, got {p.formula.term!r}")

    def _one_sided(self, path, node, pside, aside):
        if not self._expect_premises(path, node, 1):
            return None
        ps = self._principals(path, node, 1)
        acts = self._actives(path, node, [(0, aside)])
        if ps is None or acts is None:
            return None
        if ps[0][0] != pside:
            self.bad(path, MALFORMED_RULE,
                     f"{node.rule} principal must be in the {pside}cedent")
            return None
        return ps[0][1], acts[0]

    def rule_negl(self, path, node) -> None:
        got = self._one_sided(path, node, "ante", "succ")
        if got is None:
            return
        p, a = got
        if not (isinstance(p.formula, Not) and p.formula.body == a.formula):
            self.bad(path, PRINCIPAL_MISMATCH,
                     f"neg-left principal {p.formula!r} does not negate the active")

    def rule_negr(self, path, node) -> None:
        got = self._one_sided(path, node, "succ", "ante")
        if got is None:
            return
        p, a = got
        if not (isinstance(p.formula, Not) and p.formula.body == a.formula):
            self.bad(path, PRINCIPAL_MISMATCH,
                     f"neg-right principal {p.formula!r} does not negate the active")

    def rule_andl(self, path, node) -> None:
        if not self._expect_premises(path, node, 1):
            return
        ps = self._principals(path, node, 1)
        acts = self._actives(path, node, [(0, "ante"), (0, "ante")])
        if ps is None or acts is None:
            return
        pside, p = ps[0]
        if pside != "ante" or not isinstance(p.formula, And):
            self.bad(path, MALFORMED_RULE,
                     "and-left principal must be a conjunction in the antecedent")
            return
        if p.formula.left != acts[0].formula or p.formula.right != acts[1].formula:
            self.bad(path, PRINCIPAL_MISMATCH,
                     "and-left actives do not match the conjuncts")

    def rule_andr(self, path, node) -> None:
        if not self._expect_premises(path, node, 2):
            return
        ps = self._principals(path, node, 1)
        acts = self._actives(path, node, [(0, "succ"), (1, "succ")])
        if ps is None or acts is None:
            return
        pside, p = ps[0]
        if pside != "succ" or not isinstance(p.formula, And):
            self.bad(path, MALFORMED_RULE,
                     "and-right principal must be a conjunction in the succedent")
            return
        if p.formula.left != acts[0].formula or p.formula.right != acts[1].formula:
            self.bad(path, PRINCIPAL_MISMATCH,
                     "and-right actives do not match the conjuncts")

    def rule_foralll(self, path, node) -> None:
        if not self._expect_premises(path, node, 1):
            return
        ps = self._principals(path, node, 1)
        acts = self._actives(path, node, [(0, "ante"), (0, "ante")])
        if ps is None or acts is None:
            return
        pside, p = ps[0]
        if pside != "ante" or not isinstance(p.formula, Forall):
            self.bad(path, MALFORMED_RULE,
                     "forall-left principal must be universal in the antecedent")
            return
        kept, inst = acts
        if kept.formula != p.formula:
            self.bad(path, PRINCIPAL_MISMATCH,
                     "forall-left must keep the universal formula in the premise")
            return
        if node.term is None:
            self.bad(path, WITNESS_MISMATCH, "forall-left is missing its witness term")
            return
        try:
            want = substitute(p.formula.body, p.formula.var, node.term)
        except CaptureError as e:
            self.bad(path, WITNESS_MISMATCH, f"witness capture: {e}")
            return
        if inst.formula != want:
            self.bad(path, WITNESS_MISMATCH,
                     f"forall-left instance is {inst.formula!r}, "
                     f"expected {want!r}")

    def rule_forallr(self, path, node) -> None:
        got = self._one_sided(path, node, "succ", "succ")
        if got is None:
            return
        p, a = got
        if not isinstance(p.formula, Forall):
            self.bad(path, MALFORMED_RULE,
                     "forall-right principal must be a universal formula")
            return
        y = node.var
        if y is None:
            self.bad(path, EIGENVAR_CLASH, "forall-right is missing its eigenvariable")
            return
        try:
            want = substitute(p.formula.body, p.formula.var, Var(y))
        except CaptureError as e:
            self.bad(path, EIGENVAR_CLASH, f"eigenvariable capture: {e}")
            return
        if a.formula != want:
            self.bad(path, PRINCIPAL_MISMATCH,
                     f"forall-right premise active is {a.formula!r}, "
                     f"expected {want!r}")
            return
        for o in node.conclusion.all_occurrences():
            if y in free_vars(o.formula):
                self.bad(path, EIGENVAR_CLASH,
                         f"eigenvariable {y} occurs free in the conclusion")
                return
        self.eigen_nodes.append((tuple(path), y))

    # geometric rules ------------------------------------------------------

    def rule_eq1(self, path, node) -> None:
        if not self._expect_premises(path, node, 1):
            return
        acts = self._actives(path, node, [(0, "ante")])
        if acts is None or node.principal:
            if node.principal:
                self.bad(path, MALFORMED_RULE, "eq1 has no principal formula")
            return
        f = acts[0].formula
        if not (isinstance(f, Eq) and f.left == f.right):
            self.bad(path, PRINCIPAL_MISMATCH,
                     f"eq1 discharges a reflexive equation, got {f!r}")

    def rule_eq2(self, path, node) -> None:
        if not self._expect_premises(path, node, 1):
            return
        acts = self._actives(path, node, [(0, "ante")])
        if acts is None:
            return
        if node.template is None or node.term is None or node.term2 is None:
            self.bad(path, TEMPLATE_MISMATCH,
                     "eq2 needs a replacement template and both equation sides")
            return
        v, chi = node.template
        s, t = node.term, node.term2
        if not is_base_atom(chi):
            self.bad(path, TEMPLATE_MISMATCH,
                     f"eq2 template must be an atomic T-free equation, got {chi!r}")
            return
        want_discharged = substitute(chi, v, s)
        if acts[0].formula != want_discharged:
            self.bad(path, TEMPLATE_MISMATCH,
                     f"eq2 discharges {acts[0].formula!r}, expected {want_discharged!r}")
            return
        ante = node.conclusion.ante_formulas()
        if Eq(s, t) not in ante:
            self.bad(path, TEMPLATE_MISMATCH,
                     f"eq2 requires the equation {Eq(s, t)!r} in the antecedent")
            return
        if substitute(chi, v, t) not in ante:
            self.bad(path, TEMPLATE_MISMATCH,
                     "eq2 requires the replaced instance in the antecedent")

    def rule_qg1(self, path, node) -> None:
        if not self._expect_premises(path, node, 0):
            return
        ps = self._principals(path, node, 1)
        if ps is None:
            return
        side, p = ps[0]
        f = p.formula
        if (
            side != "ante"
            or not isinstance(f, Eq)
            or not isinstance(f.left, Suc)
            or not _is_zero_term(f.right)
        ):
            self.bad(path, PRINCIPAL_MISMATCH,
                     f"qg1 axiom needs S(t)=0 in the antecedent, got {f!r}")

    def rule_qg2(self, path, node) -> None:
        if not self._expect_premises(path, node, 1):
            return
        acts = self._actives(path, node, [(0, "ante")])
        if acts is None:
            return
        f = acts[0].formula
        if not isinstance(f, Eq):
            self.bad(path, PRINCIPAL_MISMATCH, "qg2 discharges an equation")
            return
        succ_eq = Eq(Suc(f.left), Suc(f.right))
        if succ_eq not in node.conclusion.ante_formulas():
            self.bad(path, PRINCIPAL_MISMATCH,
                     f"qg2 requires {succ_eq!r} in the conclusion antecedent")

    def rule_qg3(self, path, node) -> None:
        if not self._expect_premises(path, node, 2):
            return
        acts = self._actives(path, node, [(0, "ante"), (1, "ante")])
        if acts is None:
            return
        x, y = node.term, node.var
        if x is None or y is None:
            self.bad(path, MALFORMED_RULE,
                     "qg3 needs its case term and eigenvariable")
            return
        f0, f1 = acts[0].formula, acts[1].formula
        if not (isinstance(f0, Eq) and f0.left == x and _is_zero_term(f0.right)):
            self.bad(path, PRINCIPAL_MISMATCH,
                     f"qg3 zero-case active must be {x!r}=0, got {f0!r}")
            return
        if f1 != Eq(Var(y), Suc(x)):
            self.bad(path, PRINCIPAL_MISMATCH,
                     f"qg3 successor-case active must be {y}=S({x!r}), got {f1!r}")
            return
        if y in free_vars(f0):
            self.bad(path, EIGENVAR_CLASH,
                     f"qg3 eigenvariable {y} occurs in the zero case")
            return
        for o in node.conclusion.all_occurrences():
            if y in free_vars(o.formula):
                self.bad(path, EIGENVAR_CLASH,
                         f"qg3 eigenvariable {y} occurs free in the conclusion")
                return
        self.eigen_nodes.append((tuple(path), y))

    def _axiom_discharge(self, path, node, build_axiom, nargs) -> None:
        if not self._expect_premises(path, node, 1):
            return
        acts = self._actives(path, node, [(0, "ante")])
        if acts is None:
            return
        args = (node.term, node.term2)[:nargs]
        if any(a is None for a in args):
            self.bad(path, MALFORMED_RULE,
                     f"{node.rule} needs {nargs} instantiating term(s)")
            return
        want = build_axiom(*args)
        if acts[0].formula != want:
            self.bad(path, PRINCIPAL_MISMATCH,
                     f"{node.rule} discharges {acts[0].formula!r}, "
                     f"expected {want!r}")

    def rule_qg4(self, path, node) -> None:
        self._axiom_discharge(path, node, lambda x: Eq(Plus(x, Zero()), x), 1)

    def rule_qg5(self, path, node) -> None:
        self._axiom_discharge(
            path, node, lambda x, y: Eq(Plus(x, Suc(y)), Suc(Plus(x, y))), 2
        )

    def rule_qg6(self, path, node) -> None:
        self._axiom_discharge(path, node, lambda x: Eq(Times(x, Zero()), Zero()), 1)

    def rule_qg7(self, path, node) -> None:
        self._axiom_discharge(
            path, node, lambda x, y: Eq(Times(x, Suc(y)), Plus(Times(x, y), x)), 2
        )

    # global conventions ---------------------------------------------------

    def check_pure_variables(self, d: Derivation) -> None:
        """Pure variable convention: eigenvariables are pairwise distinct and
        confined to the subtree above their node, and no variable occurs both
        free and bound in one sequent."""
        seen: dict[str, tuple[int, ...]] = {}
        for path, y in self.eigen_nodes:
            if y in seen:
                self.bad(path, PURE_VARIABLE_CLASH,
                         f"eigenvariable {y} reused (also at node "
                         f"{'/'.join(map(str, seen[y])) or 'root'})")
            else:
                seen[y] = path
        for path, y in self.eigen_nodes:
            for other_path, node in d.iter_nodes():
                if other_path[: len(path)] == path:
                    continue  # inside the eigenvariable's subtree
                for o in node.conclusion.all_occurrences():
                    if y in free_vars(o.formula):
                        self.bad(path, PURE_VARIABLE_CLASH,
                                 f"eigenvariable {y} occurs outside its subtree "
                                 f"(node {'/'.join(map(str, other_path)) or 'root'})")
                        break
                else:
                    continue
                break
        for path, node in d.iter_nodes():
            frees: set[str] = set()
            bounds: set[str] = set()
            for o in node.conclusion.all_occurrences():
                frees |= free_vars(o.formula)
                bounds |= bound_vars(o.formula)
            clash = frees & bounds
            if clash:
                self.bad(path, PURE_VARIABLE_CLASH,
                         f"variable(s) {sorted(clash)} occur both free and "
                         "bound in one sequent")


def check_derivation(d: Derivation, system: str) -> ValidationReport:
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}; expected one of {SYSTEMS}")
    ck = _Checker(system)
    ck.check_ids(d)
    for path, node in d.iter_nodes():
        ck.check_node(path, node)
    if system != "lgt":
        ck.check_pure_variables(d)
    return ValidationReport(system, tuple(ck.violations))


def check_lgt(d: Derivation) -> ValidationReport:
    return check_derivation(d, "lgt")


def check_qg(d: Derivation) -> ValidationReport:
    return check_derivation(d, "qg")


def check_lptn(d: Derivation, compositional: bool = False) -> ValidationReport:
    return check_derivation(d, "lptn_comp" if compositional else "lptn")


def validate(d: Derivation, system: str) -> None:
    """Raise :class:`InvalidDerivation` unless ``d`` checks out."""
    report = check_derivation(d, system)
    if not report.ok:
        raise InvalidDerivation(report)
