"""Terms and formulas of the truth language over arithmetic.

The term signature is {0, S, +, x} plus a fixed family of function symbols
for primitive recursive syntax operations (num, sub, negdot, anddot, alldot,
eqdot, tdot, tr, val).  Numerals have a compact literal representation
``Num(n)`` denoting S^n(0); explicit S-chains over 0 remain legal terms and
the two spellings are distinct syntactic objects with the same value.

Formulas are built from =, T, top, bot, not, and, forall.  ``or`` and
``exists`` are derived (see :func:`lor`, :func:`lexists`).  top and bot are
not atomic; equations and truth ascriptions are.
"""

from __future__ import annotations

from dataclasses import dataclass


class SyntaxError_(Exception):
    """Malformed term or formula construction."""


class CaptureError(SyntaxError_):
    """Substitution would capture a free variable of the substituted term."""


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class Suc(Term):
    child: Term


@dataclass(frozen=True)
class Plus(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Times(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Num(Term):
    """Numeral literal: the canonical name of the natural number ``value``."""

    value: int

    def __post_init__(self):
        if self.value < 0:
            raise SyntaxError_(f"numeral value must be a natural: {self.value}")


#: symbol -> arity for the syntax-function fragment
SYNTAX_FN_ARITY = {
    "num": 1,
    "sub": 3,
    "negdot": 1,
    "anddot": 2,
    "alldot": 2,
    "eqdot": 2,
    "tdot": 1,
    "tr": 2,
    "val": 1,
}


@dataclass(frozen=True)
class SynApp(Term):
    symbol: str
    args: tuple[Term, ...]

    def __post_init__(self):
        arity = SYNTAX_FN_ARITY.get(self.symbol)
        if arity is None:
            raise SyntaxError_(f"unknown syntax function symbol: {self.symbol}")
        if len(self.args) != arity:
            raise SyntaxError_(
                f"{self.symbol} expects {arity} argument(s), got {len(self.args)}"
            )


ZERO = Zero()


def numeral(n: int) -> Term:
    """Canonical numeral for ``n``."""
    return Num(n)


def numeral_value(t: Term) -> int | None:
    """Value of ``t`` if it is a numeral (Num literal or S-chain), else None."""
    k = 0
    while isinstance(t, Suc):
        k += 1
        t = t.child
    if isinstance(t, Zero):
        return k
    if isinstance(t, Num):
        return k + t.value
    return None


def is_numeral(t: Term) -> bool:
    return numeral_value(t) is not None


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Tr(Formula):
    term: Term


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


TOP = Top()
BOT = Bot()


def lor(a: Formula, b: Formula) -> Formula:
    """Derived disjunction: not(not a and not b)."""
    return Not(And(Not(a), Not(b)))


def lexists(x: str, body: Formula) -> Formula:
    """Derived existential: not forall x not body."""
    return Not(Forall(x, Not(body)))


def is_atomic(phi: Formula) -> bool:
    """Atomic formulas are equations and truth ascriptions; top/bot are not."""
    return isinstance(phi, (Eq, Tr))


def is_truth_free(x: Term | Formula) -> bool:
    """True iff no T predicate and no tdot/tr syntax-function symbol occurs."""
    if isinstance(x, Tr):
        return False
    if isinstance(x, SynApp) and x.symbol in ("tdot", "tr"):
        return False
    return all(is_truth_free(c) for c in _children(x))


def is_arithmetical(t: Term) -> bool:
    """True iff ``t`` is built from {0, S, +, x}, numerals, and variables only."""
    if isinstance(t, SynApp):
        return False
    return all(is_arithmetical(c) for c in _children(t))


def is_base_atom(phi: Formula) -> bool:
    """Atomic formula of the T-free base language: an equation.  All terms
    (including syntax-function applications) belong to the base language; only
    the truth predicate does not.  These are the only admissible principal
    formulas of restricted initial sequents."""
    return isinstance(phi, Eq)


def is_base_formula(phi: Formula) -> bool:
    """Formula of the T-free base language (no occurrence of the T predicate)."""
    if isinstance(phi, Tr):
        return False
    return all(is_base_formula(c) for c in _children(phi) if isinstance(c, Formula))


def _children(x: Term | Formula):
    if isinstance(x, (Var, Zero, Num, Top, Bot)):
        return ()
    if isinstance(x, Suc):
        return (x.child,)
    if isinstance(x, (Plus, Times)):
        return (x.left, x.right)
    if isinstance(x, SynApp):
        return x.args
    if isinstance(x, Eq):
        return (x.left, x.right)
    if isinstance(x, Tr):
        return (x.term,)
    if isinstance(x, Not):
        return (x.body,)
    if isinstance(x, And):
        return (x.left, x.right)
    if isinstance(x, Forall):
        return (x.body,)
    raise TypeError(f"not a term or formula: {x!r}")


# ---------------------------------------------------------------------------
# Free variables, closedness


def free_vars(x: Term | Formula) -> frozenset[str]:
    if isinstance(x, Var):
        return frozenset((x.name,))
    if isinstance(x, Forall):
        return free_vars(x.body) - {x.var}
    out: frozenset[str] = frozenset()
    for c in _children(x):
        out |= free_vars(c)
    return out


def bound_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Forall):
        return bound_vars(phi.body) | {phi.var}
    out: frozenset[str] = frozenset()
    for c in _children(phi):
        if isinstance(c, Formula):
            out |= bound_vars(c)
    return out


def is_closed(x: Term | Formula) -> bool:
    return not free_vars(x)


def is_sentence(phi: Formula) -> bool:
    return is_closed(phi)


# ---------------------------------------------------------------------------
# Logical complexity: depth of the maximal branch of the syntax tree,
# counting only logical constants.


def logical_complexity(phi: Formula) -> int:
    if is_atomic(phi) or isinstance(phi, (Top, Bot)):
        return 0
    if isinstance(phi, Not):
        return logical_complexity(phi.body) + 1
    if isinstance(phi, Forall):
        return logical_complexity(phi.body) + 1
    if isinstance(phi, And):
        return max(logical_complexity(phi.left), logical_complexity(phi.right)) + 1
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# Substitution (capture-avoiding by refusal, not by renaming)


def subst_term(t: Term, x: str, s: Term) -> Term:
    if isinstance(t, Var):
        return s if t.name == x else t
    if isinstance(t, (Zero, Num)):
        return t
    if isinstance(t, Suc):
        return Suc(subst_term(t.child, x, s))
    if isinstance(t, Plus):
        return Plus(subst_term(t.left, x, s), subst_term(t.right, x, s))
    if isinstance(t, Times):
        return Times(subst_term(t.left, x, s), subst_term(t.right, x, s))
    if isinstance(t, SynApp):
        return SynApp(t.symbol, tuple(subst_term(a, x, s) for a in t.args))
    raise TypeError(f"not a term: {t!r}")


def substitute(phi: Formula, x: str, t: Term) -> Formula:
    """Replace all free occurrences of ``x`` in ``phi`` by ``t``.

    Raises :class:`CaptureError` when ``t`` is not free for ``x`` in ``phi``.
    """
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.left, x, t), subst_term(phi.right, x, t))
    if isinstance(phi, Tr):
        return Tr(subst_term(phi.term, x, t))
    if isinstance(phi, (Top, Bot)):
        return phi
    if isinstance(phi, Not):
        return Not(substitute(phi.body, x, t))
    if isinstance(phi, And):
        return And(substitute(phi.left, x, t), substitute(phi.right, x, t))
    if isinstance(phi, Forall):
        if phi.var == x:
            return phi
        if x in free_vars(phi.body) and phi.var in free_vars(t):
            raise CaptureError(
                f"substituting {t!r} for {x} under binder of {phi.var} would capture"
            )
        return Forall(phi.var, substitute(phi.body, x, t))
    raise TypeError(f"not a formula: {phi!r}")


def rename_var(phi: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of variable ``old`` to ``new``."""
    return substitute(phi, old, Var(new))


def fresh_name(base: str, avoid) -> str:
    """A variable name not in ``avoid``, derived from ``base``."""
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"
