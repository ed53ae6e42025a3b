"""Structural admissibility results as executable proof transformations.

Every public operation validates its output with the kernel, recomputes the
measure triple (length, cut rank, proof T-complexity), and checks it against
the bound the corresponding lemma promises.  A bound failure raises
:class:`CertificateError`; certificates are recomputed evidence, never
trusted bookkeeping.

Conventions:

* ``weaken`` and ``substitute_proof`` reuse occurrence ids, so their
  occurrence maps are identities.
* ``invert`` and ``contract`` thread exact occurrence maps so per-occurrence
  T-complexity bounds can be certified pointwise.
* ``reduce_cut`` and ``eliminate_cuts`` certify the measure triple only; where
  they must relocate occurrences across rebuilt subtrees they match by formula
  and side, which is sound because all rule side conditions are formula-level.
* ``reduce_cut`` output may contain cuts of strictly smaller rank (the
  compound-connective cases build them deliberately); only the truth-rule
  case recurses, driven by the decrease of T-complexity.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .coding import DecodeError, decode_sentence
from .deriv import (
    LEAF_RULES,
    Derivation,
    Measures,
    Occurrence,
    Sequent,
    compute_measures,
    copy_occ,
    fresh_id,
    occ,
    refresh_ids,
    same_multiset,
)
from .kernel import check_derivation
from .syntax import (
    And,
    Bot,
    CaptureError,
    Eq,
    Forall,
    Formula,
    Not,
    Term,
    Top,
    Tr,
    Var,
    bound_vars,
    free_vars,
    fresh_name,
    logical_complexity,
    numeral_value,
    subst_term,
    substitute,
)


class TransformError(Exception):
    pass


class CertificateError(TransformError):
    """The transformed proof violates the lemma's stated bound."""


@dataclass(frozen=True)
class Certificate:
    description: str
    input_measures: tuple[tuple[int, int, int], ...]
    output_measures: tuple[int, int, int]
    checks: tuple[tuple[str, int, int], ...]  # (name, bound, actual)

    def as_dict(self) -> dict:
        return {
            "description": self.description,
            "input_measures": [list(t) for t in self.input_measures],
            "output_measures": list(self.output_measures),
            "checks": [
                {"name": n, "bound": b, "actual": a, "ok": a <= b}
                for n, b, a in self.checks
            ],
        }


@dataclass(frozen=True)
class TransformResult:
    derivation: Derivation
    certificate: Certificate
    #: map from input conclusion occurrence ids to output occurrence id(s);
    #: None when only formula-level correspondence is meaningful
    occ_map: dict | None = None


def _certify(
    out: Derivation,
    system: str,
    description: str,
    inputs: tuple[Measures, ...],
    *,
    length: int,
    cut_rank: int,
    proof_tau: int,
    pointwise=(),
    expect: tuple[list[Formula], list[Formula]] | None = None,
    exact_triple: bool = False,
    require_cut_free: bool = False,
    occ_map=None,
) -> TransformResult:
    report = check_derivation(out, system)
    if not report.ok:
        raise CertificateError(
            f"{description}: output fails kernel validation: "
            + "; ".join(str(v) for v in report.violations)
        )
    m = compute_measures(out)
    checks = [
        ("length", length, m.length),
        ("cutRank", cut_rank, m.cut_rank),
        ("proofTau", proof_tau, m.proof_tau),
    ]
    for label, oid, bound in pointwise:
        checks.append((f"tau[{label}]", bound, m.tau[oid]))
    for name, bound, actual in checks:
        if actual > bound:
            raise CertificateError(
                f"{description}: {name} bound violated: {actual} > {bound}"
            )
    if exact_triple and m.triple() != (length, cut_rank, proof_tau):
        raise CertificateError(
            f"{description}: measures changed: {m.triple()} != "
            f"{(length, cut_rank, proof_tau)}"
        )
    if require_cut_free and _has_cut(out):
        raise CertificateError(f"{description}: output still contains cut")
    if expect is not None:
        ante, succ = expect
        if not (
            same_multiset(out.conclusion.ante_formulas(), list(ante))
            and same_multiset(out.conclusion.succ_formulas(), list(succ))
        ):
            raise CertificateError(
                f"{description}: end sequent mismatch"
            )
    return TransformResult(
        out,
        Certificate(
            description,
            tuple(mi.triple() for mi in inputs),
            m.triple(),
            tuple(checks),
        ),
        occ_map,
    )


# ---------------------------------------------------------------------------
# Shared helpers


def _has_cut(d: Derivation) -> bool:
    return any(node.rule == "cut" for _, node in d.iter_nodes())


def collect_eigenvars(d: Derivation) -> set[str]:
    return {
        node.var
        for _, node in d.iter_nodes()
        if node.rule in ("forallr", "qg3") and node.var is not None
    }


def all_var_names(d: Derivation) -> set[str]:
    names: set[str] = set(collect_eigenvars(d))
    for _, node in d.iter_nodes():
        for o in node.conclusion.all_occurrences():
            names |= free_vars(o.formula)
            names |= bound_vars(o.formula)
    return names


def _replace_premise(node: Derivation, idx: int, new_premise: Derivation) -> Derivation:
    premises = tuple(
        new_premise if i == idx else p for i, p in enumerate(node.premises)
    )
    return Derivation(
        node.rule, node.conclusion, premises,
        principal=node.principal, actives=node.actives, lineage=dict(node.lineage),
        term=node.term, term2=node.term2, var=node.var, template=node.template,
    )


def _with(node: Derivation, **kw) -> Derivation:
    base = dict(
        rule=node.rule, conclusion=node.conclusion, premises=node.premises,
        principal=node.principal, actives=node.actives,
        lineage=dict(node.lineage), term=node.term, term2=node.term2,
        var=node.var, template=node.template,
    )
    base.update(kw)
    return Derivation(**base)


def _find_occ(d: Derivation, occ_id: int) -> tuple[str, Occurrence]:
    hit = d.conclusion.find(occ_id)
    if hit is None:
        raise TransformError(f"occurrence {occ_id} not in the conclusion")
    return hit[0], hit[2]


def _fallback_map(old: Sequent, new: Sequent) -> dict[int, int]:
    """Match occurrences of two sequents by side and formula (first fit).
    Every old occurrence must find a partner; extras in ``new`` are ignored."""
    out: dict[int, int] = {}
    for old_side, new_side in ((old.ante, new.ante), (old.succ, new.succ)):
        pool = list(new_side)
        for o in old_side:
            for j, cand in enumerate(pool):
                if cand.formula == o.formula:
                    out[o.id] = pool.pop(j).id
                    break
            else:
                raise TransformError(
                    f"no matching occurrence for {o.formula!r} while "
                    "relocating occurrences"
                )
    return out


# ---------------------------------------------------------------------------
# Substitution


def _subst_tree(node: Derivation, x: str, t: Term) -> Derivation:
    premises = tuple(_subst_tree(p, x, t) for p in node.premises)

    def sf(phi: Formula) -> Formula:
        return substitute(phi, x, t)

    concl = Sequent(
        tuple(Occurrence(sf(o.formula), o.id) for o in node.conclusion.ante),
        tuple(Occurrence(sf(o.formula), o.id) for o in node.conclusion.succ),
    )
    template = node.template
    if template is not None:
        v, chi = template
        if v != x:
            if v in free_vars(t):
                v2 = fresh_name(v, free_vars(t) | free_vars(chi) | bound_vars(chi) | {x})
                chi = substitute(chi, v, Var(v2))
                v = v2
            template = (v, substitute(chi, x, t))
    return Derivation(
        node.rule, concl, premises,
        principal=node.principal, actives=node.actives, lineage=dict(node.lineage),
        term=None if node.term is None else subst_term(node.term, x, t),
        term2=None if node.term2 is None else subst_term(node.term2, x, t),
        var=node.var, template=template,
    )


def freshen_eigenvariables(d: Derivation, avoid) -> Derivation:
    """Rename every eigenvariable in ``avoid`` to a fresh name.  Occurrence
    ids and all measures are untouched (only formulas inside the renamed
    subtrees change)."""
    avoid = set(avoid)
    used = all_var_names(d) | avoid

    def go(node: Derivation) -> Derivation:
        node = _with(node, premises=tuple(go(p) for p in node.premises))
        if node.rule in ("forallr", "qg3") and node.var in avoid:
            y2 = fresh_name(node.var, used)
            used.add(y2)
            idx = 0 if node.rule == "forallr" else 1
            sub = node.premises[idx]
            if node.var in collect_eigenvars(sub):
                sub = freshen_eigenvariables(sub, {node.var})
            sub = _subst_tree(sub, node.var, Var(y2))
            node = _with(_replace_premise(node, idx, sub), var=y2)
        return node

    return go(d)


def substitute_proof(d: Derivation, x: str, t: Term, system: str) -> TransformResult:
    """Replace the free variable ``x`` by ``t`` throughout the proof.

    Measures and per-occurrence T-complexities are unchanged.  ``t`` must not
    contain eigenvariables of the proof, and ``x`` must not be one.
    """
    ev = collect_eigenvars(d)
    if x in ev:
        raise TransformError(f"cannot substitute for eigenvariable {x}")
    clash = free_vars(t) & ev
    if clash:
        raise TransformError(
            f"substituted term contains eigenvariable(s) {sorted(clash)}"
        )
    im = compute_measures(d)
    try:
        out = _subst_tree(d, x, t)
    except CaptureError as e:
        raise TransformError(f"substitution not capture-free: {e}") from e
    pointwise = [
        (f"{o.id}", o.id, im.tau[o.id])
        for o in d.conclusion.all_occurrences()
    ]
    return _certify(
        out, system, f"substitute {x}", (im,),
        length=im.length, cut_rank=im.cut_rank, proof_tau=im.proof_tau,
        pointwise=pointwise, exact_triple=True,
        occ_map={o.id: o.id for o in d.conclusion.all_occurrences()},
    )


# ---------------------------------------------------------------------------
# Weakening


def _weaken_rec(node: Derivation, theta, lam):
    subs = [_weaken_rec(p, theta, lam) for p in node.premises]
    add_a = tuple(occ(f) for f in theta)
    add_s = tuple(occ(f) for f in lam)
    lineage = dict(node.lineage)
    if node.premises:
        for j, o in enumerate(add_a):
            lineage[o.id] = tuple(
                (pi, subs[pi][1][j].id) for pi in range(len(subs))
            )
        for j, o in enumerate(add_s):
            lineage[o.id] = tuple(
                (pi, subs[pi][2][j].id) for pi in range(len(subs))
            )
    concl = Sequent(node.conclusion.ante + add_a, node.conclusion.succ + add_s)
    new = Derivation(
        node.rule, concl, tuple(s[0] for s in subs),
        principal=node.principal, actives=node.actives, lineage=lineage,
        term=node.term, term2=node.term2, var=node.var, template=node.template,
    )
    return new, add_a, add_s


def weaken(d: Derivation, theta, lam, system: str) -> TransformResult:
    """Add side formulas Theta to every antecedent and Lambda to every
    succedent.  Measures are unchanged; the new occurrences carry tau = 0.
    Eigenvariables colliding with the new formulas are renamed first."""
    theta = list(theta)
    lam = list(lam)
    new_free: set[str] = set()
    for f in theta + lam:
        new_free |= free_vars(f)
    clash = new_free & collect_eigenvars(d)
    if clash:
        d = freshen_eigenvariables(d, clash)
    im = compute_measures(d)
    out, add_a, add_s = _weaken_rec(d, tuple(theta), tuple(lam))
    pointwise = [
        (f"{o.id}", o.id, im.tau[o.id]) for o in d.conclusion.all_occurrences()
    ] + [(f"new:{o.id}", o.id, 0) for o in add_a + add_s]
    occ_map = {o.id: o.id for o in d.conclusion.all_occurrences()}
    return _certify(
        out, system, "weaken", (im,),
        length=im.length, cut_rank=im.cut_rank, proof_tau=im.proof_tau,
        pointwise=pointwise, exact_triple=True,
        expect=(d.conclusion.ante_formulas() + theta,
                d.conclusion.succ_formulas() + lam),
        occ_map=occ_map,
    )


# ---------------------------------------------------------------------------
# Inversion


def _parents_by_premise(node: Derivation, oid: int) -> dict[int, int]:
    return {pi: poid for pi, poid in node.lineage[oid]}


def _invert(node: Derivation, tid: int, rule: str, repl, selector, fresh_var):
    """Core inversion: replace the target occurrence (and its whole ancestry)
    by the replacement occurrences in ``repl`` ([(formula, side), ...]),
    splicing out the introducing ``rule`` node when the target is principal.

    Returns (derivation, map old-conclusion-occ-id -> tuple of new ids)."""
    side_t, _idx, target = (node.conclusion.find(tid)[0],
                            node.conclusion.find(tid)[1],
                            node.conclusion.find(tid)[2])
    if tid in node.principal:
        if node.rule != rule:
            raise TransformError(
                f"target introduced by {node.rule!r}, cannot invert as {rule!r}"
            )
        if rule in ("Tl", "Tr", "negl", "negr"):
            premise = node.premises[0]
            m = {tid: (node.actives[0][1],)}
            for o in node.conclusion.all_occurrences():
                if o.id != tid:
                    m[o.id] = tuple(oid for _, oid in node.lineage[o.id])
            return premise, m
        if rule == "andl":
            premise = node.premises[0]
            m = {tid: (node.actives[0][1], node.actives[1][1])}
            for o in node.conclusion.all_occurrences():
                if o.id != tid:
                    m[o.id] = tuple(oid for _, oid in node.lineage[o.id])
            return premise, m
        if rule == "andr":
            premise = node.premises[selector]
            m = {tid: (node.actives[selector][1],)}
            for o in node.conclusion.all_occurrences():
                if o.id != tid:
                    parents = _parents_by_premise(node, o.id)
                    m[o.id] = (parents[selector],)
            return premise, m
        if rule == "forallr":
            premise = node.premises[0]
            z = node.var
            if fresh_var != z:
                if z in collect_eigenvars(premise):
                    premise = freshen_eigenvariables(premise, {z})
                premise = _subst_tree(premise, z, Var(fresh_var))
            m = {tid: (node.actives[0][1],)}
            for o in node.conclusion.all_occurrences():
                if o.id != tid:
                    m[o.id] = tuple(oid for _, oid in node.lineage[o.id])
            return premise, m
        raise TransformError(f"no inversion for rule {rule!r}")

    new_occs = tuple(occ(f) for f, _ in repl)

    def rebuilt_sequent():
        ante = tuple(o for o in node.conclusion.ante if o.id != tid)
        succ = tuple(o for o in node.conclusion.succ if o.id != tid)
        ante += tuple(no for no, (_, sd) in zip(new_occs, repl) if sd == "ante")
        succ += tuple(no for no, (_, sd) in zip(new_occs, repl) if sd == "succ")
        return Sequent(ante, succ)

    base_map = {
        o.id: (o.id,) for o in node.conclusion.all_occurrences() if o.id != tid
    }
    base_map[tid] = tuple(o.id for o in new_occs)

    if not node.premises:
        leaf = Derivation(
            node.rule, rebuilt_sequent(), (),
            principal=node.principal, term=node.term, term2=node.term2,
            var=node.var, template=node.template,
        )
        return leaf, base_map

    parents = _parents_by_premise(node, tid)
    subs: dict[int, Derivation] = {}
    maps: dict[int, dict] = {}
    for pi, premise in enumerate(node.premises):
        subs[pi], maps[pi] = _invert(
            premise, parents[pi], rule, repl, selector, fresh_var
        )
    lineage = {}
    for o in node.conclusion.all_occurrences():
        if o.id == tid or o.id in node.principal:
            continue
        lineage[o.id] = tuple(
            (pi, maps[pi][oid][0]) for pi, oid in node.lineage[o.id]
        )
    for j, no in enumerate(new_occs):
        lineage[no.id] = tuple(
            (pi, maps[pi][parents[pi]][j]) for pi in range(len(node.premises))
        )
    actives = tuple((pi, maps[pi][oid][0]) for pi, oid in node.actives)
    new = Derivation(
        node.rule, rebuilt_sequent(),
        tuple(subs[pi] for pi in range(len(node.premises))),
        principal=node.principal, actives=actives, lineage=lineage,
        term=node.term, term2=node.term2, var=node.var, template=node.template,
    )
    return new, base_map


def invert(d: Derivation, target_id: int, system: str):
    """Invert the rule introducing the target occurrence.

    Supported targets: T-atoms over numerals (either side), negations (either
    side), conjunctions (antecedent: one output with both conjuncts;
    succedent: two outputs), universals (succedent; instantiated with a fresh
    variable).  Length, cut rank, and proof T-complexity do not increase;
    truth inversion strictly decreases the target's positive T-complexity.

    All four supported systems restrict initial sequents to T-free atoms,
    which is exactly what makes truth inversion available; with unrestricted
    initial sequents it would fail at T-principal axioms.
    """
    side, o = _find_occ(d, target_id)
    f = o.formula
    im = compute_measures(d)
    tau_t = im.tau[target_id]

    def run(rule, repl, selector=None, fresh_var=None):
        out, m = _invert(d, target_id, rule, repl, selector, fresh_var)
        pointwise = []
        for old in d.conclusion.all_occurrences():
            if old.id == target_id:
                continue
            for nid in m[old.id]:
                pointwise.append((f"{old.id}", nid, im.tau[old.id]))
        return out, m, pointwise

    if isinstance(f, Tr):
        n = numeral_value(f.term)
        if n is None:
            raise TransformError(
                "truth inversion requires a numeral term (pointwise "
                "compositional principals cannot be inverted)"
            )
        try:
            phi = decode_sentence(n)
        except DecodeError as e:
            raise TransformError(f"target numeral decodes to nothing: {e}") from e
        rule = "Tl" if side == "ante" else "Tr"
        out, m, pointwise = run(rule, ((phi, side),))
        bound = tau_t - 1 if tau_t > 0 else 0
        pointwise.append(("target", m[target_id][0], bound))
        return _certify(
            out, system, f"invert {rule}", (im,),
            length=im.length, cut_rank=im.cut_rank, proof_tau=im.proof_tau,
            pointwise=pointwise, occ_map=m,
        )
    if isinstance(f, Not):
        rule = "negl" if side == "ante" else "negr"
        flip = "succ" if side == "ante" else "ante"
        out, m, pointwise = run(rule, ((f.body, flip),))
        pointwise.append(("target", m[target_id][0], tau_t))
        return _certify(
            out, system, f"invert {rule}", (im,),
            length=im.length, cut_rank=im.cut_rank, proof_tau=im.proof_tau,
            pointwise=pointwise, occ_map=m,
        )
    if isinstance(f, And) and side == "ante":
        out, m, pointwise = run("andl", ((f.left, "ante"), (f.right, "ante")))
        pointwise.append(("target.left", m[target_id][0], tau_t))
        pointwise.append(("target.right", m[target_id][1], tau_t))
        return _certify(
            out, system, "invert andl", (im,),
            length=im.length, cut_rank=im.cut_rank, proof_tau=im.proof_tau,
            pointwise=pointwise, occ_map=m,
        )
    if isinstance(f, And) and side == "succ":
        results = []
        for selector, conj in ((0, f.left), (1, f.right)):
            out, m, pointwise = run("andr", ((conj, "succ"),), selector=selector)
            pointwise.append(("target", m[target_id][0], tau_t))
            results.append(_certify(
                out, system, f"invert andr[{selector}]", (im,),
                length=im.length, cut_rank=im.cut_rank, proof_tau=im.proof_tau,
                pointwise=pointwise, occ_map=m,
            ))
        return tuple(results)
    if isinstance(f, Forall) and side == "succ":
        y = fresh_name("y", all_var_names(d))
        inst = substitute(f.body, f.var, Var(y))
        out, m, pointwise = run("forallr", ((inst, "succ"),), fresh_var=y)
        pointwise.append(("target", m[target_id][0], tau_t))
        return _certify(
            out, system, "invert forallr", (im,),
            length=im.length, cut_rank=im.cut_rank, proof_tau=im.proof_tau,
            pointwise=pointwise, occ_map=m,
        )
    raise TransformError(
        f"target mismatch: cannot invert {f!r} in the {side}cedent"
    )


# ---------------------------------------------------------------------------
# Contraction


def _remap_node(node, new_premises, pms, drop_id, active_override=None):
    """Rebuild ``node`` over transformed premises.  ``pms[i]`` maps premise
    ``i``'s old conclusion occurrence ids to their new ids; ``drop_id`` is
    removed from the conclusion."""
    concl = Sequent(
        tuple(o for o in node.conclusion.ante if o.id != drop_id),
        tuple(o for o in node.conclusion.succ if o.id != drop_id),
    )
    lineage = {}
    for o in concl.all_occurrences():
        if o.id in node.principal:
            continue
        parents = node.lineage[o.id]
        seen = {}
        for pi, oid in parents:
            seen.setdefault(pi, pms[pi][oid])
        lineage[o.id] = tuple(sorted(seen.items()))
    actives = active_override
    if actives is None:
        actives = tuple((pi, pms[pi][oid]) for pi, oid in node.actives)
    return Derivation(
        node.rule, concl, tuple(new_premises),
        principal=node.principal, actives=actives, lineage=lineage,
        term=node.term, term2=node.term2, var=node.var, template=node.template,
    )


def _ident_minus(node, drop_id, keep_id):
    m = {
        o.id: o.id
        for o in node.conclusion.all_occurrences()
        if o.id != drop_id
    }
    m[drop_id] = keep_id
    return m


def _contract(node: Derivation, ida: int, idb: int, system: str):
    """Merge two same-side occurrences of one formula.  Returns
    (derivation, map old-conclusion-id -> new id)."""
    side_a, oa = _find_occ(node, ida)
    side_b, ob = _find_occ(node, idb)
    if side_a != side_b or oa.formula != ob.formula:
        raise TransformError("contraction needs two copies of one formula "
                             "on the same side")
    if not node.premises:
        keep, drop = (idb, ida) if idb in node.principal else (ida, idb)
        leaf = Derivation(
            node.rule,
            Sequent(
                tuple(o for o in node.conclusion.ante if o.id != drop),
                tuple(o for o in node.conclusion.succ if o.id != drop),
            ),
            (),
            principal=node.principal, term=node.term, term2=node.term2,
            var=node.var, template=node.template,
        )
        return leaf, _ident_minus(node, drop, keep)

    if ida in node.principal or idb in node.principal:
        pid, cid = (ida, idb) if ida in node.principal else (idb, ida)
        return _contract_principal(node, pid, cid, system)

    # both copies are context occurrences: contract in every premise
    pa = _parents_by_premise(node, ida)
    pb = _parents_by_premise(node, idb)
    subs = []
    pms = []
    for pi, premise in enumerate(node.premises):
        sub, m = _contract(premise, pa[pi], pb[pi], system)
        subs.append(sub)
        pms.append(m)
    new = _remap_node(node, subs, pms, idb)
    return new, _ident_minus(node, idb, ida)


def _contract_principal(node: Derivation, pid: int, cid: int, system: str):
    rule = node.rule
    premise = node.premises[0] if node.premises else None
    _, po = _find_occ(node, pid)
    f = po.formula

    def finish(new_premise, pm, active_override):
        new = _remap_node(node, [new_premise], [pm], cid,
                          active_override=active_override)
        return new, _ident_minus(node, cid, pid)

    if rule in ("Tl", "Tr"):
        act_id = node.actives[0][1]
        psi = premise.conclusion.find(act_id)[2].formula
        parent = _parents_by_premise(node, cid)[0]
        side = "ante" if rule == "Tl" else "succ"
        sub, minv = _invert(premise, parent, rule, ((psi, side),), None, None)
        new_copy = minv[parent][0]
        sub2, mc = _contract(sub, minv[act_id][0], new_copy, system)
        pm = {oid: mc[minv[oid][0]] for oid in minv if oid != parent}
        merged = mc[minv[act_id][0]]
        return finish(sub2, pm | {parent: merged}, ((0, merged),))

    if rule in ("negl", "negr"):
        act_id = node.actives[0][1]
        parent = _parents_by_premise(node, cid)[0]
        flip = "succ" if rule == "negl" else "ante"
        sub, minv = _invert(premise, parent, rule, ((f.body, flip),), None, None)
        sub2, mc = _contract(sub, minv[act_id][0], minv[parent][0], system)
        pm = {oid: mc[minv[oid][0]] for oid in minv if oid != parent}
        merged = mc[minv[act_id][0]]
        return finish(sub2, pm | {parent: merged}, ((0, merged),))

    if rule == "andl":
        a0, a1 = node.actives[0][1], node.actives[1][1]
        parent = _parents_by_premise(node, cid)[0]
        sub, minv = _invert(
            premise, parent, "andl",
            ((f.left, "ante"), (f.right, "ante")), None, None,
        )
        s2, m1 = _contract(sub, minv[a0][0], minv[parent][0], system)
        s3, m2 = _contract(s2, m1[minv[a1][0]], m1[minv[parent][1]], system)
        pm = {oid: m2[m1[minv[oid][0]]] for oid in minv if oid != parent}
        merged0 = m2[m1[minv[a0][0]]]
        merged1 = m2[m1[minv[a1][0]]]
        return finish(s3, pm | {parent: merged0},
                      ((0, merged0), (0, merged1)))

    if rule == "andr":
        parents = _parents_by_premise(node, cid)
        subs = []
        pms = []
        merged_actives = []
        for selector, conj in ((0, f.left), (1, f.right)):
            p = node.premises[selector]
            act_id = node.actives[selector][1]
            sub, minv = _invert(
                p, parents[selector], "andr", ((conj, "succ"),), selector, None
            )
            sub2, mc = _contract(sub, minv[act_id][0], minv[parents[selector]][0],
                                 system)
            merged = mc[minv[act_id][0]]
            pm = {oid: mc[minv[oid][0]] for oid in minv if oid != parents[selector]}
            pm[parents[selector]] = merged
            subs.append(sub2)
            pms.append(pm)
            merged_actives.append((selector, merged))
        new = _remap_node(node, subs, pms, cid,
                          active_override=tuple(merged_actives))
        return new, _ident_minus(node, cid, pid)

    if rule == "foralll":
        kept_id, inst_id = node.actives[0][1], node.actives[1][1]
        parent = _parents_by_premise(node, cid)[0]
        sub, mc = _contract(premise, kept_id, parent, system)
        return finish(sub, mc, ((0, mc[kept_id]), (0, mc[inst_id])))

    if rule == "forallr":
        act_id = node.actives[0][1]
        z = node.var
        parent = _parents_by_premise(node, cid)[0]
        y = fresh_name("y", all_var_names(node))
        inst = substitute(f.body, f.var, Var(y))
        sub, minv = _invert(premise, parent, "forallr", ((inst, "succ"),),
                            None, y)
        if z in collect_eigenvars(sub):
            sub = freshen_eigenvariables(sub, {z})
        sub = _subst_tree(sub, y, Var(z))
        sub2, mc = _contract(sub, minv[act_id][0], minv[parent][0], system)
        pm = {oid: mc[minv[oid][0]] for oid in minv if oid != parent}
        merged = mc[minv[act_id][0]]
        return finish(sub2, pm | {parent: merged}, ((0, merged),))

    if rule == "comp":
        raise TransformError(
            "contraction through a pointwise compositional principal is not "
            "supported"
        )
    raise TransformError(f"cannot contract principal of rule {rule!r}")


def contract(d: Derivation, ida: int, idb: int, system: str) -> TransformResult:
    """Contract two occurrences of one formula on the same side of the end
    sequent.  Length, cut rank, and proof T-complexity do not increase, and
    the merged occurrence's T-complexity is at most the maximum of the two."""
    im = compute_measures(d)
    out, m = _contract(d, ida, idb, system)
    merged = m[ida]
    pointwise = [("merged", merged, max(im.tau[ida], im.tau[idb]))]
    for o in d.conclusion.all_occurrences():
        if o.id in (ida, idb):
            continue
        pointwise.append((f"{o.id}", m[o.id], im.tau[o.id]))
    side, oa = _find_occ(d, ida)
    expect_ante = d.conclusion.ante_formulas()
    expect_succ = d.conclusion.succ_formulas()
    if side == "ante":
        expect_ante.remove(oa.formula)
    else:
        expect_succ.remove(oa.formula)
    return _certify(
        out, system, "contract", (im,),
        length=im.length, cut_rank=im.cut_rank, proof_tau=im.proof_tau,
        pointwise=pointwise, expect=(expect_ante, expect_succ), occ_map=m,
    )


def _contract_to(d: Derivation, target_ante, target_succ, system: str) -> Derivation:
    """Contract duplicate occurrences until the end sequent equals the target
    multiset pair."""
    while True:
        for side_name, target in (("ante", target_ante), ("succ", target_succ)):
            occs = getattr(d.conclusion, side_name)
            have = Counter(o.formula for o in occs)
            want = Counter(target)
            excess = next((f for f in have if have[f] > want[f]), None)
            if excess is not None:
                ids = [o.id for o in occs if o.formula == excess]
                d, _ = _contract(d, ids[0], ids[1], system)
                break
        else:
            break
    if not (
        same_multiset(d.conclusion.ante_formulas(), list(target_ante))
        and same_multiset(d.conclusion.succ_formulas(), list(target_succ))
    ):
        raise TransformError("contraction could not reach the target sequent")
    return d


# ---------------------------------------------------------------------------
# Dropping a never-principal context occurrence (top/bot monotonicity)


def drop_context(d: Derivation, occ_id: int) -> Derivation:
    """Remove an occurrence whose entire ancestry consists of side formulas
    (as is always the case for top in antecedents and bot in succedents)."""
    if occ_id in d.principal:
        raise TransformError("cannot drop a principal occurrence")
    if not d.premises:
        return Derivation(
            d.rule,
            Sequent(
                tuple(o for o in d.conclusion.ante if o.id != occ_id),
                tuple(o for o in d.conclusion.succ if o.id != occ_id),
            ),
            (),
            principal=d.principal, term=d.term, term2=d.term2,
            var=d.var, template=d.template,
        )
    parents = _parents_by_premise(d, occ_id)
    premises = tuple(
        drop_context(p, parents[pi]) for pi, p in enumerate(d.premises)
    )
    lineage = {k: v for k, v in d.lineage.items() if k != occ_id}
    return Derivation(
        d.rule,
        Sequent(
            tuple(o for o in d.conclusion.ante if o.id != occ_id),
            tuple(o for o in d.conclusion.succ if o.id != occ_id),
        ),
        premises,
        principal=d.principal, actives=d.actives, lineage=lineage,
        term=d.term, term2=d.term2, var=d.var, template=d.template,
    )


# ---------------------------------------------------------------------------
# Cut reduction


def _leaf_minus(leaf: Derivation, occ_id: int) -> Derivation:
    return Derivation(
        leaf.rule,
        Sequent(
            tuple(o for o in leaf.conclusion.ante if o.id != occ_id),
            tuple(o for o in leaf.conclusion.succ if o.id != occ_id),
        ),
        (),
        principal=leaf.principal, term=leaf.term, term2=leaf.term2,
        var=leaf.var, template=leaf.template,
    )


def _build_cut(d0: Derivation, aid: int, d1: Derivation, bid: int,
               m_allow: int) -> Derivation:
    from .build import cut as build_cut

    phi = d0.conclusion.find(aid)[2].formula
    if logical_complexity(phi) + 1 > m_allow:
        raise TransformError(
            f"reduction would need a cut of rank {logical_complexity(phi) + 1} "
            f"> allowed {m_allow}"
        )
    return build_cut(d0, aid, d1, bid)


class _Fuel:
    def __init__(self, amount: int):
        self.left = amount

    def burn(self):
        self.left -= 1
        if self.left <= 0:
            raise TransformError(
                "cut reduction fuel exhausted (termination guard)"
            )


def _reduce(d0, aid, d1, bid, system, m_allow, fuel) -> Derivation:
    fuel.burn()
    phi = d0.conclusion.find(aid)[2].formula

    # --- axiom cases ------------------------------------------------------
    if d0.rule in LEAF_RULES:
        if aid in d0.principal:
            if d0.rule == "init":
                others = [o.id for o in d1.conclusion.ante
                          if o.formula == phi and o.id != bid]
                out, _ = _contract(d1, bid, others[0], system)
                return out
            if d0.rule == "top":
                return drop_context(d1, bid)
            raise TransformError(
                f"unexpected succedent principal in leaf {d0.rule}"
            )
        return _leaf_minus(d0, aid)
    if d1.rule in LEAF_RULES:
        if bid in d1.principal:
            if d1.rule == "init":
                others = [o.id for o in d0.conclusion.succ
                          if o.formula == phi and o.id != aid]
                out, _ = _contract(d0, aid, others[0], system)
                return out
            if d1.rule == "bot":
                return drop_context(d0, aid)
            # qg1: the cut formula S(t)=0 must be chased into d0, whose last
            # rule cannot have it principal (it is not a leaf here)
        else:
            return _leaf_minus(d1, bid)

    # --- cut formula parametric (non-principal) in one premise ------------
    if aid not in d0.principal:
        return _push(d0, aid, d1, bid, True, system, m_allow, fuel)
    if bid not in d1.principal:
        return _push(d1, bid, d0, aid, False, system, m_allow, fuel)

    # --- principal on both sides ------------------------------------------
    gamma = d0.conclusion.ante_formulas()
    delta = [o.formula for o in d0.conclusion.succ if o.id != aid]

    if isinstance(phi, Tr) and d0.rule == "Tr" and d1.rule == "Tl":
        p0 = d0.premises[0]
        p1 = d1.premises[0]
        return _reduce(
            p0, d0.actives[0][1], p1, d1.actives[0][1], system, m_allow, fuel
        )
    if isinstance(phi, Not) and d0.rule == "negr" and d1.rule == "negl":
        p0 = d0.premises[0]  # psi, Gamma => Delta
        p1 = d1.premises[0]  # Gamma => psi, Delta
        return _build_cut(p1, d1.actives[0][1], p0, d0.actives[0][1], m_allow)
    if isinstance(phi, And) and d0.rule == "andr" and d1.rule == "andl":
        p0a = d0.premises[0]  # Gamma => psi, Delta
        p0b = d0.premises[1]  # Gamma => chi, Delta
        p1 = d1.premises[0]   # psi, chi, Gamma => Delta
        w = weaken(p0b, [phi.left], [], system).derivation
        chi_id = next(o.id for o in w.conclusion.succ
                      if o.formula == phi.right)
        chi_in_p1 = d1.actives[1][1]
        inner = _build_cut(w, chi_id, p1, chi_in_p1, m_allow)
        psi_id0 = d0.actives[0][1]
        psi_in_inner = next(o.id for o in inner.conclusion.ante
                            if o.formula == phi.left)
        outer = _build_cut(p0a, psi_id0, inner, psi_in_inner, m_allow)
        return _contract_to(outer, gamma, delta, system)
    if isinstance(phi, Forall) and d0.rule == "forallr" and d1.rule == "foralll":
        p0 = d0.premises[0]   # Gamma => psi(y), Delta
        p1 = d1.premises[0]   # forall x psi, psi(t), Gamma' => Delta
        t = d1.term
        y = d0.var
        inst = substitute(phi.body, phi.var, t)
        s0 = p0
        tvars = free_vars(t)
        if tvars & collect_eigenvars(s0):
            s0 = freshen_eigenvariables(s0, tvars & collect_eigenvars(s0))
        s0 = _subst_tree(s0, y, t)  # Gamma => psi(t), Delta
        # chase the universal into d1's premise: Gamma, psi(t) => Delta
        d0w = weaken(d0, [inst], [], system).derivation
        aid_w = aid  # weaken reuses ids
        kept_id = d1.actives[0][1]
        rec = _reduce(d0w, aid_w, p1, kept_id, system, m_allow, fuel)
        rec = _contract_to(rec, gamma + [inst], delta, system)
        inst_in_s0 = next(o.id for o in s0.conclusion.succ if o.formula == inst)
        inst_in_rec = next(o.id for o in rec.conclusion.ante if o.formula == inst)
        outer = _build_cut(s0, inst_in_s0, rec, inst_in_rec, m_allow)
        return _contract_to(outer, gamma, delta, system)
    raise TransformError(
        f"no reduction for principal pair ({d0.rule}, {d1.rule}) on {phi!r}"
    )


def _push(main, main_id, other, other_id, main_is_left, system, m_allow, fuel):
    """The cut formula is a side formula of ``main``'s last rule: push the cut
    into each premise (after weakening both sides to a common context),
    reapply the rule, and contract the duplicated context away.

    ``main_is_left`` says whether ``main`` proves the sequent with the cut
    formula on the right (i.e. plays the left role of the cut)."""
    node = main
    parents = _parents_by_premise(node, main_id)
    phi_side = "succ" if main_is_left else "ante"

    if main_is_left:
        o_ante = [o.formula for o in other.conclusion.ante if o.id != other_id]
        o_succ = other.conclusion.succ_formulas()
    else:
        o_ante = other.conclusion.ante_formulas()
        o_succ = [o.formula for o in other.conclusion.succ if o.id != other_id]

    target_ante = node.conclusion.ante_formulas()
    target_succ = node.conclusion.succ_formulas()
    (target_succ if main_is_left else target_ante).remove(
        node.conclusion.find(main_id)[2].formula
    )

    new_premises = []
    pms = []
    used_by_premise: list[set[int]] = []
    for pi, premise in enumerate(node.premises):
        parent = parents[pi]
        p_ante = [o.formula for o in premise.conclusion.ante
                  if o.id != parent]
        p_succ = [o.formula for o in premise.conclusion.succ
                  if o.id != parent]
        theta = list((Counter(o_ante) - Counter(p_ante)).elements())
        lam = list((Counter(o_succ) - Counter(p_succ)).elements())
        piw = weaken(premise, theta, lam, system).derivation

        oth = other if pi == 0 else refresh_ids(other)
        if pi == 0:
            oth_phi = other_id
        else:
            side = oth.conclusion.ante if main_is_left else oth.conclusion.succ
            phi = node.conclusion.find(main_id)[2].formula
            oth_phi = next(o.id for o in side if o.formula == phi)
        th_o = list((Counter(p_ante) - Counter(o_ante)).elements())
        la_o = list((Counter(p_succ) - Counter(o_succ)).elements())
        othw = weaken(oth, th_o, la_o, system).derivation

        if main_is_left:
            ci = _reduce(piw, parent, othw, oth_phi, system, m_allow, fuel)
        else:
            ci = _reduce(othw, oth_phi, piw, parent, system, m_allow, fuel)
        reduced_premise = Sequent(
            tuple(o for o in premise.conclusion.ante if o.id != parent),
            tuple(o for o in premise.conclusion.succ if o.id != parent),
        )
        pm = _fallback_map(reduced_premise, ci.conclusion)
        new_premises.append(ci)
        pms.append(pm)
        used_by_premise.append(set(pm.values()))

    # reapply the rule, carrying unmatched (other-context) occurrences along
    for pi, oid in node.actives:
        used_by_premise[pi].add(pms[pi][oid])
    concl_ante = [o for o in node.conclusion.ante if o.id != main_id]
    concl_succ = [o for o in node.conclusion.succ if o.id != main_id]
    lineage = {}
    for o in concl_ante + concl_succ:
        if o.id in node.principal:
            continue
        lineage[o.id] = tuple(
            (pi, pms[pi][oid]) for pi, oid in node.lineage[o.id]
        )
        for pi, oid in node.lineage[o.id]:
            used_by_premise[pi].add(pms[pi][oid])

    extras = []
    for pi, ci in enumerate(new_premises):
        extras.append([
            o for o in ci.conclusion.all_occurrences()
            if o.id not in used_by_premise[pi]
        ])
    if len(new_premises) == 1:
        for e in extras[0]:
            side = new_premises[0].conclusion.side_of(e.id)
            no = copy_occ(e)
            lineage[no.id] = ((0, e.id),)
            (concl_ante if side == "ante" else concl_succ).append(no)
    else:
        pool = list(extras[1])
        for e0 in extras[0]:
            side = new_premises[0].conclusion.side_of(e0.id)
            for j, e1 in enumerate(pool):
                if (e1.formula == e0.formula
                        and new_premises[1].conclusion.side_of(e1.id) == side):
                    pool.pop(j)
                    no = copy_occ(e0)
                    lineage[no.id] = ((0, e0.id), (1, e1.id))
                    (concl_ante if side == "ante" else concl_succ).append(no)
                    break
            else:
                raise TransformError(
                    "unpaired context occurrence while reapplying "
                    f"{node.rule} after cut reduction"
                )
        if pool:
            raise TransformError(
                "unpaired context occurrence while reapplying "
                f"{node.rule} after cut reduction"
            )

    reapplied = Derivation(
        node.rule, Sequent(tuple(concl_ante), tuple(concl_succ)),
        tuple(new_premises),
        principal=node.principal,
        actives=tuple((pi, pms[pi][oid]) for pi, oid in node.actives),
        lineage=lineage,
        term=node.term, term2=node.term2, var=node.var, template=node.template,
    )
    return _contract_to(reapplied, target_ante, target_succ, system)


def reduce_cut(d0: Derivation, aid: int, d1: Derivation, bid: int,
               system: str, max_rank: int | None = None) -> TransformResult:
    """Eliminate one cut: from proofs of Gamma => Delta, phi and
    phi, Gamma => Delta produce a proof of Gamma => Delta of length at most
    n0 + n1, cut rank at most max_rank, and proof T-complexity at most the
    maximum of the inputs.  The output may contain cuts on proper
    subformulas of phi (their rank is strictly below phi's)."""
    side0, oa = _find_occ(d0, aid)
    side1, ob = _find_occ(d1, bid)
    if side0 != "succ" or side1 != "ante":
        raise TransformError("cut formula must be right in d0 and left in d1")
    if oa.formula != ob.formula:
        raise TransformError("cut formulas differ")
    phi = oa.formula
    gamma = d0.conclusion.ante_formulas()
    delta = [o.formula for o in d0.conclusion.succ if o.id != aid]
    if not (
        same_multiset([o.formula for o in d1.conclusion.ante if o.id != bid],
                      gamma)
        and same_multiset(d1.conclusion.succ_formulas(), delta)
    ):
        raise TransformError("cut contexts do not match")
    m0 = compute_measures(d0)
    m1 = compute_measures(d1)
    rank = logical_complexity(phi) + 1
    if max_rank is None:
        max_rank = max(m0.cut_rank, m1.cut_rank, rank - 1)
    if rank > max_rank + 1:
        raise TransformError(
            f"cut formula rank {rank} exceeds allowed {max_rank} + 1"
        )
    if max(m0.cut_rank, m1.cut_rank) > max_rank:
        raise TransformError("input proofs exceed the allowed cut rank")
    fuel = _Fuel(200_000)
    out = _reduce(d0, aid, d1, bid, system, max_rank, fuel)
    return _certify(
        out, system, "reduceCut", (m0, m1),
        length=m0.length + m1.length,
        cut_rank=max_rank,
        proof_tau=max(m0.proof_tau, m1.proof_tau),
        expect=(gamma, delta),
    )


# ---------------------------------------------------------------------------
# Cut elimination


def hyperexp(m: int, n: int) -> int:
    for _ in range(m):
        n = 2 ** n
    return n


def _cut_rank_of(node: Derivation) -> int:
    pi, oid = node.actives[0]
    return logical_complexity(
        node.premises[pi].conclusion.find(oid)[2].formula
    ) + 1


def _max_cut_rank(d: Derivation) -> int:
    return max(
        (_cut_rank_of(node) for _, node in d.iter_nodes() if node.rule == "cut"),
        default=0,
    )


def _elim_rank(node: Derivation, r: int, system: str, fuel) -> Derivation:
    new_premises = [_elim_rank(p, r, system, fuel) for p in node.premises]
    pms = [
        _fallback_map(old.conclusion, new.conclusion)
        for old, new in zip(node.premises, new_premises)
    ]
    if node.rule == "cut" and _cut_rank_of(node) == r:
        (p0i, a_old), (p1i, b_old) = node.actives
        return _reduce(
            new_premises[p0i], pms[p0i][a_old],
            new_premises[p1i], pms[p1i][b_old],
            system, r - 1, fuel,
        )
    if not node.premises:
        return node
    lineage = {
        cid: tuple((pi, pms[pi][oid]) for pi, oid in parents)
        for cid, parents in node.lineage.items()
    }
    return Derivation(
        node.rule, node.conclusion, tuple(new_premises),
        principal=node.principal,
        actives=tuple((pi, pms[pi][oid]) for pi, oid in node.actives),
        lineage=lineage,
        term=node.term, term2=node.term2, var=node.var, template=node.template,
    )


def eliminate_cuts(d: Derivation, system: str) -> TransformResult:
    """Full cut elimination, topmost maximal-rank cuts first, one rank at a
    time.  The output is cut-free, proves the same end sequent, keeps proof
    T-complexity at most the input's, and has length at most hyperexp(m, n)
    (where hyperexp(0, n) = n and hyperexp(j+1, n) = 2^hyperexp(j, n))."""
    im = compute_measures(d)
    out = d
    fuel = _Fuel(500_000)
    r = _max_cut_rank(out)
    while r > 0:
        out = _elim_rank(out, r, system, fuel)
        r2 = _max_cut_rank(out)
        if r2 >= r:
            raise TransformError(
                f"cut elimination failed to reduce the maximal rank ({r})"
            )
        r = r2
    return _certify(
        out, system, "eliminateCuts", (im,),
        length=hyperexp(im.cut_rank, im.length),
        cut_rank=0,
        proof_tau=im.proof_tau,
        expect=(d.conclusion.ante_formulas(), d.conclusion.succ_formulas()),
        require_cut_free=True,
    )
