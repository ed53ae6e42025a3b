"""Line-oriented proof scripts.

One node per line, premises before use, exactly one root:

    <id>: <rule> [<premise-ids>] <antecedent> => <succedent>

with the prefix formula grammar of the syntax module.  Only rule tags and
sequents are written; occurrence wiring and rule instantiation data (cut
formulas, universal witnesses, eigenvariables, replacement templates) are
re-inferred from the sequent differences when a script is loaded, and the
kernel re-validates the result, so scripts cannot smuggle in bad wiring.
"""

from __future__ import annotations

import re

from . import build as B
from .deriv import Derivation, same_multiset
from .sexpr import ParseError, format_sequent, parse_sequent
from .syntax import (
    And,
    Bot,
    Eq,
    Forall,
    Formula,
    Not,
    Num,
    Plus,
    Suc,
    Term,
    Times,
    Top,
    Tr,
    Var,
    Zero,
    free_vars,
)


class ScriptError(Exception):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


_LINE = re.compile(r"^\s*(\d+)\s*:\s*([A-Za-z0-9_]+)\s*\[([^\]]*)\]\s*(.*)$")


# ---------------------------------------------------------------------------
# Printing


def print_script(d: Derivation) -> str:
    lines: list[str] = []
    counter = [0]

    def go(node: Derivation) -> int:
        pids = [go(p) for p in node.premises]
        counter[0] += 1
        nid = counter[0]
        seq = format_sequent(
            node.conclusion.ante_formulas(), node.conclusion.succ_formulas()
        )
        lines.append(f"{nid}: {node.rule} [{', '.join(map(str, pids))}] {seq}")
        return nid

    go(d)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Multiset helpers


def _multiset_minus(xs, ys):
    out = list(xs)
    for y in ys:
        try:
            out.remove(y)
        except ValueError:
            return None
    return out


def _ante_id(p: Derivation, f: Formula, skip=()):
    for o in p.conclusion.ante:
        if o.formula == f and o.id not in skip:
            return o.id
    return None


def _succ_id(p: Derivation, f: Formula, skip=()):
    for o in p.conclusion.succ:
        if o.formula == f and o.id not in skip:
            return o.id
    return None


# ---------------------------------------------------------------------------
# Pattern matching (for witness / eigenvariable / template inference)


def _match_term(pattern: Term, var: str, inst: Term, binding):
    if isinstance(pattern, Var) and pattern.name == var:
        if binding["t"] is None:
            binding["t"] = inst
            return True
        return binding["t"] == inst
    if type(pattern) is not type(inst):
        return False
    if isinstance(pattern, Var):
        return pattern.name == inst.name
    if isinstance(pattern, (Zero,)):
        return True
    if isinstance(pattern, Num):
        return pattern.value == inst.value
    if isinstance(pattern, Suc):
        return _match_term(pattern.child, var, inst.child, binding)
    if isinstance(pattern, (Plus, Times)):
        return _match_term(pattern.left, var, inst.left, binding) and \
            _match_term(pattern.right, var, inst.right, binding)
    from .syntax import SynApp

    if isinstance(pattern, SynApp):
        return pattern.symbol == inst.symbol and all(
            _match_term(a, var, b, binding)
            for a, b in zip(pattern.args, inst.args)
        )
    return False


def _match_formula(pattern: Formula, var: str, inst: Formula, binding):
    if type(pattern) is not type(inst):
        return False
    if isinstance(pattern, Eq):
        return _match_term(pattern.left, var, inst.left, binding) and \
            _match_term(pattern.right, var, inst.right, binding)
    if isinstance(pattern, Tr):
        return _match_term(pattern.term, var, inst.term, binding)
    if isinstance(pattern, (Top, Bot)):
        return True
    if isinstance(pattern, Not):
        return _match_formula(pattern.body, var, inst.body, binding)
    if isinstance(pattern, And):
        return _match_formula(pattern.left, var, inst.left, binding) and \
            _match_formula(pattern.right, var, inst.right, binding)
    if isinstance(pattern, Forall):
        if pattern.var != inst.var:
            return False
        if pattern.var == var:
            return pattern.body == inst.body
        return _match_formula(pattern.body, var, inst.body, binding)
    return False


def _infer_instance(quantified: Forall, inst: Formula) -> Term | None:
    """Term t with inst == quantified.body[var := t], if one exists."""
    binding = {"t": None}
    if _match_formula(quantified.body, quantified.var, inst, binding):
        return binding["t"] if binding["t"] is not None else Var(quantified.var)
    return None


def _generalize_term(d: Term, k: Term, s: Term, t: Term, var: str):
    if d == k:
        return d
    if d == s and k == t:
        return Var(var)
    if type(d) is type(k):
        if isinstance(d, Suc):
            c = _generalize_term(d.child, k.child, s, t, var)
            return None if c is None else Suc(c)
        if isinstance(d, (Plus, Times)):
            l = _generalize_term(d.left, k.left, s, t, var)
            r = _generalize_term(d.right, k.right, s, t, var)
            if l is None or r is None:
                return None
            return type(d)(l, r)
    return None


def _generalize_eq(d: Eq, k: Eq, s: Term, t: Term, var: str) -> Eq | None:
    l = _generalize_term(d.left, k.left, s, t, var)
    r = _generalize_term(d.right, k.right, s, t, var)
    if l is None or r is None:
        return None
    return Eq(l, r)


# ---------------------------------------------------------------------------
# Node reconstruction


def _rebuild(rule: str, premises, ante, succ, line: int) -> Derivation:
    def err(msg):
        raise ScriptError(f"{rule}: {msg}", line)

    def diff_one(p):
        removed_a = _multiset_minus(p.conclusion.ante_formulas(), ante)
        removed_s = _multiset_minus(p.conclusion.succ_formulas(), succ)
        return removed_a, removed_s

    if rule == "init":
        for f in succ:
            if f in ante and isinstance(f, Eq):
                return B.init_leaf(
                    _minus(ante, [f]), f, _minus(succ, [f])
                )
        for f in succ:
            if f in ante:
                return B.init_leaf(_minus(ante, [f]), f, _minus(succ, [f]))
        err("no formula shared between the two sides")
    if rule == "top":
        if Top() not in succ:
            err("needs top in the succedent")
        return B.top_leaf(list(ante), _minus(succ, [Top()]))
    if rule == "bot":
        if Bot() not in ante:
            err("needs bot in the antecedent")
        return B.bot_leaf(_minus(ante, [Bot()]), list(succ))
    if rule == "qg1":
        for f in ante:
            if (isinstance(f, Eq) and isinstance(f.left, Suc)
                    and isinstance(f.right, (Zero, Num))
                    and (isinstance(f.right, Zero) or f.right.value == 0)):
                return B.qg1_leaf(_minus(ante, [f]), f.left.child, list(succ))
        err("needs S(t)=0 in the antecedent")

    if rule in ("Tl", "Tr", "negl", "negr", "andl", "foralll", "forallr",
                "eq1", "eq2", "qg2", "qg4", "qg5", "qg6", "qg7"):
        if len(premises) != 1:
            err("needs exactly one premise")
        p = premises[0]
        ra = _multiset_minus(p.conclusion.ante_formulas(), ante)
        rs = _multiset_minus(p.conclusion.succ_formulas(), succ)
        if ra is None or rs is None:
            # the conclusion adds formulas the premise lacks; only the
            # principal may be new, so recompute against the overlap
            ra = _removed(p.conclusion.ante_formulas(), ante)
            rs = _removed(p.conclusion.succ_formulas(), succ)

        if rule == "Tl":
            if len(ra) != 1 or rs:
                err("discharges exactly one antecedent formula")
            return B.truth_left(p, _ante_id(p, ra[0]))
        if rule == "Tr":
            if len(rs) != 1 or ra:
                err("discharges exactly one succedent formula")
            return B.truth_right(p, _succ_id(p, rs[0]))
        if rule == "negl":
            if len(rs) != 1 or ra:
                err("moves exactly one formula from the succedent")
            return B.neg_left(p, _succ_id(p, rs[0]))
        if rule == "negr":
            if len(ra) != 1 or rs:
                err("moves exactly one formula from the antecedent")
            return B.neg_right(p, _ante_id(p, ra[0]))
        if rule == "andl":
            if len(ra) != 2 or rs:
                err("discharges exactly two antecedent formulas")
            for g in ante:
                if isinstance(g, And) and sorted(map(repr, ra)) == sorted(
                    map(repr, (g.left, g.right))
                ):
                    i0 = _ante_id(p, g.left)
                    i1 = _ante_id(p, g.right, skip=(i0,))
                    if i0 is not None and i1 is not None:
                        return B.and_left(p, i0, i1)
            err("no conjunction in the antecedent matches the discharge")
        if rule == "foralll":
            if len(ra) != 1 or rs:
                err("adds exactly one instance in the premise")
            inst = ra[0]
            for g in ante:
                if isinstance(g, Forall):
                    t = _infer_instance(g, inst)
                    if t is not None:
                        kept = _ante_id(p, g)
                        iid = _ante_id(p, inst, skip=(kept,))
                        if kept is not None and iid is not None:
                            return B.forall_left(p, kept, iid, t)
            err("no quantified antecedent formula matches the instance")
        if rule == "forallr":
            if len(rs) != 1 or ra:
                err("discharges exactly one succedent formula")
            inst = rs[0]
            p_succ = p.conclusion.succ_formulas()
            for g in succ:
                if isinstance(g, Forall) and succ.count(g) > p_succ.count(g):
                    t = _infer_instance(g, inst)
                    if isinstance(t, Var):
                        return B.forall_right(p, _succ_id(p, inst), g, t.name)
            err("no quantified succedent formula matches the instance")
        if rule == "eq1":
            if len(ra) != 1 or rs:
                err("discharges exactly one antecedent formula")
            return B.eq1(p, _ante_id(p, ra[0]))
        if rule == "qg2":
            if len(ra) != 1 or rs:
                err("discharges exactly one antecedent formula")
            return B.qg2(p, _ante_id(p, ra[0]))
        if rule == "eq2":
            if len(ra) != 1 or rs:
                err("discharges exactly one antecedent formula")
            d = ra[0]
            if not isinstance(d, Eq):
                err("discharged formula must be an equation")
            for trig in ante:
                if not isinstance(trig, Eq) or trig.left == trig.right:
                    continue
                for kept in ante:
                    if not isinstance(kept, Eq):
                        continue
                    chi = _generalize_eq(d, kept, trig.left, trig.right, "w_")
                    if chi is not None and Var("w_") in _vars_of(chi):
                        return B.eq2(
                            p, _ante_id(p, d), "w_", chi, trig.left, trig.right
                        )
            err("no trigger equation and kept instance fit the discharge")
        if rule in ("qg4", "qg5", "qg6", "qg7"):
            if len(ra) != 1 or rs:
                err("discharges exactly one antecedent formula")
            f = ra[0]
            aid = _ante_id(p, f)
            try:
                if rule == "qg4":
                    return B.qg4(p, aid, f.left.left)
                if rule == "qg5":
                    return B.qg5(p, aid, f.left.left, f.left.right.child)
                if rule == "qg6":
                    return B.qg6(p, aid, f.left.left)
                return B.qg7(p, aid, f.left.left, f.left.right.child)
            except AttributeError:
                err("discharged formula does not instantiate the axiom")

    if rule == "andr":
        if len(premises) != 2:
            err("needs exactly two premises")
        p0, p1 = premises
        for g in succ:
            if isinstance(g, And):
                i0 = _succ_id(p0, g.left)
                i1 = _succ_id(p1, g.right)
                if i0 is not None and i1 is not None:
                    return B.and_right(p0, i0, p1, i1)
        err("no conjunction in the succedent matches the premises")
    if rule == "cut":
        if len(premises) != 2:
            err("needs exactly two premises")
        p0, p1 = premises
        rs = _removed(p0.conclusion.succ_formulas(), succ)
        if len(rs) != 1:
            err("cannot identify the cut formula")
        f = rs[0]
        i0 = _succ_id(p0, f)
        i1 = _ante_id(p1, f)
        if i1 is None:
            err("cut formula missing from the right premise")
        return B.cut(p0, i0, p1, i1)
    if rule == "comp":
        if len(premises) != 2:
            err("needs exactly two premises")
        p0, p1 = premises
        rs0 = _removed(p0.conclusion.succ_formulas(), succ)
        rs1 = _removed(p1.conclusion.succ_formulas(), succ)
        if len(rs0) != 1 or len(rs1) != 1:
            err("each premise discharges one succedent sentence")
        return B.comp_node(p0, _succ_id(p0, rs0[0]), p1, _succ_id(p1, rs1[0]))
    if rule == "qg3":
        if len(premises) != 2:
            err("needs exactly two premises")
        p0, p1 = premises
        ra0 = _removed(p0.conclusion.ante_formulas(), ante)
        ra1 = _removed(p1.conclusion.ante_formulas(), ante)
        if len(ra0) != 1 or len(ra1) != 1:
            err("each premise discharges one case equation")
        f0, f1 = ra0[0], ra1[0]
        try:
            x = f0.left
            y = f1.left.name
        except AttributeError:
            err("case equations are malformed")
        return B.qg3(p0, _ante_id(p0, f0), p1, _ante_id(p1, f1), x, y)
    raise ScriptError(f"unknown rule tag {rule!r}", line)


def _minus(xs, ys):
    out = _multiset_minus(xs, ys)
    if out is None:
        raise ScriptError("sequent bookkeeping mismatch")
    return out


def _removed(premise_formulas, conclusion_formulas):
    """Formulas of the premise not carried into the conclusion (multiset)."""
    pool = list(conclusion_formulas)
    out = []
    for f in premise_formulas:
        try:
            pool.remove(f)
        except ValueError:
            out.append(f)
    return out


def _vars_of(phi: Formula):
    return {Var(v) for v in free_vars(phi)}


def _force_side(stated, built):
    """Pair the stated formulas of one side with the built occurrences.

    Exact formula matches keep their occurrence; leftover stated formulas are
    paired positionally with leftover built occurrences (keeping the built
    occurrence id so rule wiring survives), and any remainder gets fresh,
    lineage-less occurrences.  The kernel then reports the discrepancy."""
    from .deriv import Occurrence, fresh_id, occ as mk_occ

    remaining = list(built)
    out: list = [None] * len(stated)
    for i, f in enumerate(stated):
        for o in remaining:
            if o.formula == f:
                out[i] = o
                remaining.remove(o)
                break
    for i, f in enumerate(stated):
        if out[i] is None and remaining:
            o = remaining.pop(0)
            out[i] = Occurrence(f, o.id)
    for i, f in enumerate(stated):
        if out[i] is None:
            out[i] = mk_occ(f)
    return tuple(out)


def _force_conclusion(node: Derivation, ante, succ) -> Derivation:
    """Replace the built conclusion with the script's stated sequent."""
    from dataclasses import replace

    from .deriv import Sequent

    new_ante = _force_side(ante, node.conclusion.ante)
    new_succ = _force_side(succ, node.conclusion.succ)
    surviving = {o.id for o in new_ante + new_succ}
    return replace(
        node,
        conclusion=Sequent(new_ante, new_succ),
        principal=tuple(i for i in node.principal if i in surviving),
        lineage={i: ps for i, ps in node.lineage.items() if i in surviving},
    )


# ---------------------------------------------------------------------------
# Parsing


def parse_script(text: str) -> Derivation:
    nodes: dict[int, Derivation] = {}
    used: set[int] = set()
    order: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split(";", 1)[0].strip()
        if not stripped:
            continue
        m = _LINE.match(stripped)
        if m is None:
            raise ScriptError(f"malformed line: {raw!r}", lineno)
        nid = int(m.group(1))
        rule = m.group(2)
        pid_text = m.group(3).strip()
        pids = []
        if pid_text:
            for part in re.split(r"[,\s]+", pid_text):
                if part:
                    if not part.isdigit():
                        raise ScriptError(
                            f"bad premise id {part!r}", lineno
                        )
                    pids.append(int(part))
        if nid in nodes:
            raise ScriptError(f"duplicate node id {nid}", lineno)
        for pid in pids:
            if pid not in nodes:
                raise ScriptError(
                    f"premise {pid} not defined before use", lineno
                )
            if pid in used:
                raise ScriptError(f"premise {pid} used twice", lineno)
        try:
            ante, succ = parse_sequent(m.group(4))
        except ParseError as e:
            raise ScriptError(str(e), lineno) from e
        premises = [nodes[pid] for pid in pids]
        node = _rebuild(rule, premises, ante, succ, lineno)
        if not (
            same_multiset(node.conclusion.ante_formulas(), ante)
            and same_multiset(node.conclusion.succ_formulas(), succ)
        ):
            # the stated conclusion disagrees with the rule's actual output;
            # keep the stated sequent so the kernel can report the violation
            node = _force_conclusion(node, ante, succ)
        nodes[nid] = node
        used.update(pids)
        order.append(nid)
    roots = [nid for nid in order if nid not in used]
    if len(roots) != 1:
        raise ScriptError(
            f"script must have exactly one root, found {len(roots)}"
        )
    return nodes[roots[0]]


# ---------------------------------------------------------------------------
# Structural fingerprint (round-trip comparison ignores occurrence ids)


def fingerprint(d: Derivation):
    from .sexpr import format_formula

    return (
        d.rule,
        tuple(sorted(format_formula(f) for f in d.conclusion.ante_formulas())),
        tuple(sorted(format_formula(f) for f in d.conclusion.succ_formulas())),
        tuple(fingerprint(p) for p in d.premises),
    )
