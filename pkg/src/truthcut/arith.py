"""Cut-free geometric-rule derivations deciding closed equations.

``prove_equation`` and ``refute_equation`` build linear derivations from a
leaf (initial sequent or zero-successor axiom) through a planned sequence of
discharging rule applications.  The plan rewrites the equation to numeral
form using the recursion axioms for + and x as replacement triggers, strips
successors pairwise, and cleans up every auxiliary hypothesis, so the end
sequent carries no residue.

Terms must be closed and built from {0, S, +, x} (no numeral literals, no
syntax functions), except that syntactically identical sides are handled for
arbitrary terms via reflexivity alone.
"""

from __future__ import annotations

from . import build as B
from .deriv import Derivation
from .syntax import (
    Eq,
    Formula,
    Plus,
    Suc,
    Term,
    Times,
    Var,
    Zero,
    free_vars,
    is_closed,
    substitute,
)
from .coding import eval_term


class ArithError(Exception):
    pass


_TEMPLATE_VAR = "w_"


def chain_numeral(k: int) -> Term:
    """S^k(0) as an explicit successor chain."""
    t: Term = Zero()
    for _ in range(k):
        t = Suc(t)
    return t


def is_chain_closed(t: Term) -> bool:
    """Closed term over {0, S, +, x} only."""
    if isinstance(t, Zero):
        return True
    if isinstance(t, Suc):
        return is_chain_closed(t.child)
    if isinstance(t, (Plus, Times)):
        return is_chain_closed(t.left) and is_chain_closed(t.right)
    return False


# ---------------------------------------------------------------------------
# Innermost rewriting with the recursion axioms


def _children(t: Term):
    if isinstance(t, Suc):
        return (t.child,)
    if isinstance(t, (Plus, Times)):
        return (t.left, t.right)
    return ()


def _rebuild(t: Term, kids) -> Term:
    if isinstance(t, Suc):
        return Suc(kids[0])
    if isinstance(t, Plus):
        return Plus(kids[0], kids[1])
    if isinstance(t, Times):
        return Times(kids[0], kids[1])
    return t


def _find_redex(t: Term, path=()):
    """Innermost-leftmost redex: (path, redex, contractum, axiom_step)."""
    for i, c in enumerate(_children(t)):
        r = _find_redex(c, path + (i,))
        if r is not None:
            return r
    if isinstance(t, Plus) and isinstance(t.right, Zero):
        return (path, t, t.left, ("qg4", (t.left,)))
    if isinstance(t, Plus) and isinstance(t.right, Suc):
        x, y = t.left, t.right.child
        return (path, t, Suc(Plus(x, y)), ("qg5", (x, y)))
    if isinstance(t, Times) and isinstance(t.right, Zero):
        return (path, t, Zero(), ("qg6", (t.left,)))
    if isinstance(t, Times) and isinstance(t.right, Suc):
        x, y = t.left, t.right.child
        return (path, t, Plus(Times(x, y), x), ("qg7", (x, y)))
    return None


def _replace_at(t: Term, path, new: Term) -> Term:
    if not path:
        return new
    kids = list(_children(t))
    kids[path[0]] = _replace_at(kids[path[0]], path[1:], new)
    return _rebuild(t, kids)


def _eq_redex(f: Eq):
    """First redex inside an equation: (side, path, redex, contractum, step)."""
    for side, term in (("l", f.left), ("r", f.right)):
        r = _find_redex(term)
        if r is not None:
            path, u, v, step = r
            return side, path, u, v, step
    return None


def _eq_replace(f: Eq, side, path, new) -> Eq:
    if side == "l":
        return Eq(_replace_at(f.left, path, new), f.right)
    return Eq(f.left, _replace_at(f.right, path, new))


def _eq_template(f: Eq, side, path) -> Eq:
    return _eq_replace(f, side, path, Var(_TEMPLATE_VAR))


def _rewrite_chain(f0: Eq):
    """Normalize both sides.  Returns (forms, rw, triggers) with
    forms[0] = f0, forms[-1] in numeral form, rw[i] = (template, redex,
    contractum) carrying forms[i] to forms[i+1], and triggers[i] the axiom
    discharge step for the equation redex=contractum."""
    forms = [f0]
    rw = []
    triggers = []
    cur = f0
    while True:
        hit = _eq_redex(cur)
        if hit is None:
            break
        side, path, u, v, step = hit
        rw.append((_eq_template(cur, side, path), u, v))
        triggers.append(step)
        cur = _eq_replace(cur, side, path, v)
        forms.append(cur)
    return forms, rw, triggers


# ---------------------------------------------------------------------------
# Plan execution


def _find_ante(d: Derivation, f: Formula) -> int:
    for o in d.conclusion.ante:
        if o.formula == f:
            return o.id
    raise ArithError(f"planned hypothesis {f!r} missing from the antecedent")


_AX_BUILDER = {"qg4": B.qg4, "qg5": B.qg5, "qg6": B.qg6, "qg7": B.qg7}


def _apply_axiom(d: Derivation, step) -> Derivation:
    kind, args = step
    builder = _AX_BUILDER[kind]
    axiom = {
        "qg4": B.qg4_axiom, "qg5": B.qg5_axiom,
        "qg6": B.qg6_axiom, "qg7": B.qg7_axiom,
    }[kind](*args)
    return builder(d, _find_ante(d, axiom), *args)


def _axiom_formula(step) -> Eq:
    kind, args = step
    return {
        "qg4": B.qg4_axiom, "qg5": B.qg5_axiom,
        "qg6": B.qg6_axiom, "qg7": B.qg7_axiom,
    }[kind](*args)


def prove_equation(gamma, s: Term, t: Term, delta) -> Derivation:
    """Cut-free geometric derivation of Gamma => s=t, Delta for a true closed
    equation."""
    goal = Eq(s, t)
    if s == t:
        leaf = B.init_leaf(list(gamma), goal, list(delta))
        return B.eq1(leaf, _find_ante(leaf, goal))
    if not (is_chain_closed(s) and is_chain_closed(t)):
        raise ArithError(
            "non-identical sides must be closed {0,S,+,x} terms"
        )
    if eval_term(s) != eval_term(t):
        raise ArithError(f"{goal!r} is false; cannot prove it")
    forms, rw, triggers = _rewrite_chain(goal)
    if forms[-1].left != forms[-1].right:
        raise ArithError("normalization did not reach a reflexive equation")
    hyps = list(forms[1:]) + [Eq(u, v) for _, u, v in rw]
    d = B.init_leaf(list(gamma) + hyps, goal, list(delta))
    for i, (chi, u, v) in enumerate(rw):
        d = B.eq2(d, _find_ante(d, forms[i]), _TEMPLATE_VAR, chi, u, v)
    d = B.eq1(d, _find_ante(d, forms[-1]))
    for step in triggers:
        d = _apply_axiom(d, step)
    return d


def refute_equation(gamma, s: Term, t: Term, delta) -> Derivation:
    """Cut-free geometric derivation of Gamma, s=t => Delta for a false
    closed equation."""
    goal = Eq(s, t)
    if not (is_chain_closed(s) and is_chain_closed(t)):
        raise ArithError("refutation needs closed {0,S,+,x} terms")
    a, b = eval_term(s), eval_term(t)
    if a == b:
        raise ArithError(f"{goal!r} is true; cannot refute it")
    forms, rw, _triggers = _rewrite_chain(goal)
    r = len(rw)
    # forms[-1] == Eq(chain(a), chain(b))
    flip = a < b
    p, q = (b, a) if flip else (a, b)
    strips = [
        Eq(chain_numeral(p - j), chain_numeral(q - j)) for j in range(q + 1)
    ]
    if flip:
        strips[0] = Eq(chain_numeral(p), chain_numeral(q))  # == flipped form
    principal = strips[q]  # Eq(S(chain(p-q-1)), 0)

    # hypothesis multiset (everything discharged above the root)
    hyps: list[Formula] = []
    hyps += strips[1:q + 1]
    if flip:
        hyps.append(strips[0])
        hyps.append(Eq(chain_numeral(p), chain_numeral(p)))
    hyps += forms[1:]
    rev_triggers = [(Eq(v, u), Eq(u, v), Eq(v, v), step)
                    for (chi, u, v), step in zip(rw, _triggers)]
    for rvu, auv, evv, _step in rev_triggers:
        hyps += [rvu, auv, evv]
    # the qg1 leaf supplies one copy of its principal formula
    gamma_leaf = list(gamma) + [goal] + hyps
    gamma_leaf.remove(principal)

    d = B.qg1_leaf(gamma_leaf, chain_numeral(p - q - 1), list(delta))

    # phase 1: strip successors (top-down j = q .. 1)
    for j in range(q, 0, -1):
        f = strips[j]
        d = B.qg2(d, _find_ante(d, f))
    # phase 2: un-flip
    if flip:
        nb = chain_numeral(p)
        na = chain_numeral(q)
        chi = Eq(nb, Var(_TEMPLATE_VAR))
        d = B.eq2(d, _find_ante(d, strips[0]), _TEMPLATE_VAR, chi, na, nb)
        d = B.eq1(d, _find_ante(d, Eq(nb, nb)))
    # phase 3: rewind the rewrite chain with reversed triggers
    for i in range(r - 1, -1, -1):
        chi, u, v = rw[i]
        d = B.eq2(d, _find_ante(d, forms[i + 1]), _TEMPLATE_VAR, chi, v, u)
    # phase 4: discharge reversed triggers by symmetry, then axioms
    for rvu, auv, evv, step in rev_triggers:
        w2 = "w2_"
        chi = Eq(rvu.left, Var(w2))
        d = B.eq2(d, _find_ante(d, rvu), w2, chi, auv.left, auv.right)
        d = B.eq1(d, _find_ante(d, evv))
        d = _apply_axiom(d, step)
    return d


def can_prove(s: Term, t: Term) -> bool:
    if s == t:
        return True
    return (
        is_chain_closed(s) and is_chain_closed(t)
        and eval_term(s) == eval_term(t)
    )


def can_refute(s: Term, t: Term) -> bool:
    return (
        is_chain_closed(s) and is_chain_closed(t)
        and eval_term(s) != eval_term(t)
    )
