"""Injective coding of terms and formulas into naturals, closed-term
evaluation, and diagonal sentences.

The scheme is a deterministic tagged Cantor pairing: every expression gets
``pair(tag, payload) + 1`` where the payload folds the children's codes.
Code 0 is deliberately not in the image, so ``decode(0)`` fails.

Self-reference uses a dedicated DIAG tag.  ``diag_code(f, v)`` is the code of
the sentence obtained by plugging its *own* numeral into the formula coded by
``f`` at variable ``v``; encode recognises the resulting pattern, so the
decoded fixed point is literal: ``decode(#lam) == substitute(phi, v,
numeral(#lam))``.  A plain monotone structural coding cannot deliver that
equation, which is why the tag exists.
"""

from __future__ import annotations

import math

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
    SynApp,
    Term,
    Times,
    Top,
    Tr,
    Var,
    Zero,
    free_vars,
    is_closed,
    is_sentence,
    numeral,
    substitute,
)


class CodingError(Exception):
    pass


class DecodeError(CodingError):
    """The given natural is not the code of any expression."""


class EvalError(Exception):
    pass


class OpenTermError(EvalError):
    pass


class NonCodeArgumentError(EvalError):
    """A syntax-function argument does not code an expression of the right kind."""


class DiagonalizationError(Exception):
    pass


# ---------------------------------------------------------------------------
# Cantor pairing


def pair(a: int, b: int) -> int:
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(c: int) -> tuple[int, int]:
    w = (math.isqrt(8 * c + 1) - 1) // 2
    t = w * (w + 1) // 2
    b = c - t
    a = w - b
    return a, b


def _str_code(s: str) -> int:
    raw = s.encode("utf-8")
    return int.from_bytes(b"\x01" + raw, "big")


def _str_decode(c: int) -> str:
    raw = c.to_bytes((c.bit_length() + 7) // 8, "big")
    if not raw or raw[0] != 1:
        raise DecodeError(f"{c} is not a variable-name code")
    try:
        return raw[1:].decode("utf-8")
    except UnicodeDecodeError as e:
        raise DecodeError(f"{c} is not a variable-name code") from e


# tags
_VAR, _ZERO, _SUC, _PLUS, _TIMES, _NUM = 0, 1, 2, 3, 4, 5
_SYN_BASE = 6  # one tag per syntax-function symbol, in _SYN_ORDER
_SYN_ORDER = ("num", "sub", "negdot", "anddot", "alldot", "eqdot", "tdot", "tr", "val")
_EQ, _TR, _TOP, _BOT, _NEG, _AND, _FORALL, _DIAG = 15, 16, 17, 18, 19, 20, 21, 22


def _fold(codes: list[int]) -> int:
    if not codes:
        return 0
    acc = codes[-1]
    for c in reversed(codes[:-1]):
        acc = pair(c, acc)
    return acc


def _unfold(c: int, n: int) -> list[int]:
    out = []
    for _ in range(n - 1):
        a, c = unpair(c)
        out.append(a)
    out.append(c)
    return out


def _tagged(tag: int, payload: int) -> int:
    return pair(tag, payload) + 1


def encode(e: Term | Formula) -> int:
    """Injective Goedel code of a term or formula."""
    if isinstance(e, Formula):
        d = _diag_match(e)
        if d is not None:
            return d
    if isinstance(e, Var):
        return _tagged(_VAR, _str_code(e.name))
    if isinstance(e, Zero):
        return _tagged(_ZERO, 0)
    if isinstance(e, Suc):
        return _tagged(_SUC, encode(e.child))
    if isinstance(e, Plus):
        return _tagged(_PLUS, pair(encode(e.left), encode(e.right)))
    if isinstance(e, Times):
        return _tagged(_TIMES, pair(encode(e.left), encode(e.right)))
    if isinstance(e, Num):
        return _tagged(_NUM, e.value)
    if isinstance(e, SynApp):
        tag = _SYN_BASE + _SYN_ORDER.index(e.symbol)
        return _tagged(tag, _fold([encode(a) for a in e.args]))
    if isinstance(e, Eq):
        return _tagged(_EQ, pair(encode(e.left), encode(e.right)))
    if isinstance(e, Tr):
        return _tagged(_TR, encode(e.term))
    if isinstance(e, Top):
        return _tagged(_TOP, 0)
    if isinstance(e, Bot):
        return _tagged(_BOT, 0)
    if isinstance(e, Not):
        return _tagged(_NEG, encode(e.body))
    if isinstance(e, And):
        return _tagged(_AND, pair(encode(e.left), encode(e.right)))
    if isinstance(e, Forall):
        return _tagged(_FORALL, pair(_str_code(e.var), encode(e.body)))
    raise TypeError(f"not a term or formula: {e!r}")


def _diag_candidates(e: Term | Formula, out: set[int]) -> None:
    if isinstance(e, Num) and e.value >= 1:
        tag, _ = unpair(e.value - 1)
        if tag == _DIAG:
            out.add(e.value)
    from .syntax import _children

    for c in _children(e):
        _diag_candidates(c, out)


def _diag_match(phi: Formula) -> int | None:
    """Smallest DIAG code whose decoding is exactly ``phi``, if any."""
    cands: set[int] = set()
    _diag_candidates(phi, cands)
    best = None
    for c in sorted(cands):
        try:
            if decode(c) == phi:
                best = c
                break
        except (DecodeError, CaptureError):
            continue
    return best


def decode(c: int) -> Term | Formula:
    """Inverse of :func:`encode` on its image; raises DecodeError elsewhere."""
    if c < 1:
        raise DecodeError(f"{c} is not a code")
    tag, payload = unpair(c - 1)
    if tag == _VAR:
        return Var(_str_decode(payload))
    if tag == _ZERO:
        if payload != 0:
            raise DecodeError(f"{c} is not a code")
        return Zero()
    if tag == _SUC:
        return Suc(_decode_term(payload))
    if tag == _PLUS:
        a, b = unpair(payload)
        return Plus(_decode_term(a), _decode_term(b))
    if tag == _TIMES:
        a, b = unpair(payload)
        return Times(_decode_term(a), _decode_term(b))
    if tag == _NUM:
        return Num(payload)
    if _SYN_BASE <= tag < _SYN_BASE + len(_SYN_ORDER):
        symbol = _SYN_ORDER[tag - _SYN_BASE]
        from .syntax import SYNTAX_FN_ARITY

        parts = _unfold(payload, SYNTAX_FN_ARITY[symbol])
        return SynApp(symbol, tuple(_decode_term(p) for p in parts))
    if tag == _EQ:
        a, b = unpair(payload)
        return Eq(_decode_term(a), _decode_term(b))
    if tag == _TR:
        return Tr(_decode_term(payload))
    if tag == _TOP:
        return Top()
    if tag == _BOT:
        return Bot()
    if tag == _NEG:
        return Not(_decode_formula(payload))
    if tag == _AND:
        a, b = unpair(payload)
        return And(_decode_formula(a), _decode_formula(b))
    if tag == _FORALL:
        v, b = unpair(payload)
        return Forall(_str_decode(v), _decode_formula(b))
    if tag == _DIAG:
        f, v = unpair(payload)
        phi = _decode_formula(f)
        name = _str_decode(v)
        return substitute(phi, name, Num(c))
    raise DecodeError(f"{c} is not a code (unknown tag {tag})")


def _decode_term(c: int) -> Term:
    e = decode(c)
    if not isinstance(e, Term):
        raise DecodeError(f"{c} codes a formula where a term was expected")
    return e


def _decode_formula(c: int) -> Formula:
    e = decode(c)
    if not isinstance(e, Formula):
        raise DecodeError(f"{c} codes a term where a formula was expected")
    return e


def decode_term(c: int) -> Term:
    return _decode_term(c)


def decode_formula(c: int) -> Formula:
    return _decode_formula(c)


def decode_sentence(c: int) -> Formula:
    phi = _decode_formula(c)
    if not is_sentence(phi):
        raise DecodeError(f"{c} does not code a sentence")
    return phi


def codes_sentence(c: int) -> bool:
    try:
        decode_sentence(c)
        return True
    except DecodeError:
        return False


def quote(phi: Formula) -> Term:
    """The canonical name of ``phi``: the numeral of its code."""
    return numeral(encode(phi))


def truth_of(phi: Formula) -> Formula:
    """T applied to the canonical name of ``phi``."""
    return Tr(quote(phi))


# ---------------------------------------------------------------------------
# Closed-term evaluation


def eval_term(t: Term) -> int:
    if isinstance(t, Var):
        raise OpenTermError(f"cannot evaluate open term: variable {t.name}")
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Suc):
        return eval_term(t.child) + 1
    if isinstance(t, Plus):
        return eval_term(t.left) + eval_term(t.right)
    if isinstance(t, Times):
        return eval_term(t.left) * eval_term(t.right)
    if isinstance(t, SynApp):
        args = [eval_term(a) for a in t.args]
        return _eval_syn(t.symbol, args)
    raise TypeError(f"not a term: {t!r}")


def _eval_syn(symbol: str, args: list[int]) -> int:
    try:
        if symbol == "num":
            return encode(Num(args[0]))
        if symbol == "negdot":
            return encode(Not(decode_formula(args[0])))
        if symbol == "anddot":
            return encode(And(decode_formula(args[0]), decode_formula(args[1])))
        if symbol == "eqdot":
            return encode(Eq(decode_term(args[0]), decode_term(args[1])))
        if symbol == "alldot":
            v = decode_term(args[0])
            if not isinstance(v, Var):
                raise NonCodeArgumentError(
                    f"alldot expects a variable code, got {v!r}"
                )
            return encode(Forall(v.name, decode_formula(args[1])))
        if symbol == "tdot":
            return encode(Tr(Num(args[0])))
        if symbol == "tr":
            n, m = args
            c = n
            for _ in range(m):
                c = encode(Tr(Num(c)))
            return c
        if symbol == "sub":
            phi = decode_formula(args[0])
            v = decode_term(args[1])
            if not isinstance(v, Var):
                raise NonCodeArgumentError(f"sub expects a variable code, got {v!r}")
            s = decode_term(args[2])
            return encode(substitute(phi, v.name, s))
        if symbol == "val":
            inner = decode_term(args[0])
            if not is_closed(inner):
                raise NonCodeArgumentError("val applied to the code of an open term")
            return eval_term(inner)
    except DecodeError as e:
        raise NonCodeArgumentError(str(e)) from e
    raise TypeError(f"unknown syntax function: {symbol}")


# ---------------------------------------------------------------------------
# Diagonalization


def diag_code(phi: Formula, var: str) -> int:
    return _tagged(_DIAG, pair(encode(phi), _str_code(var)))


def diagonalize(phi: Formula, var: str | None = None) -> Formula:
    """A sentence lam with lam == substitute(phi, v, numeral(#lam)).

    ``phi`` must have exactly one free variable (``var``, when given).
    """
    fv = free_vars(phi)
    if len(fv) != 1:
        raise DiagonalizationError(
            f"diagonalization needs exactly one free variable, got {sorted(fv)}"
        )
    (v,) = fv
    if var is not None and var != v:
        raise DiagonalizationError(f"free variable is {v}, not {var}")
    c = diag_code(phi, v)
    lam = substitute(phi, v, Num(c))
    if encode(lam) != c or decode(c) != lam:
        raise DiagonalizationError(
            "diagonal fixed point failed the post-hoc decode check"
        )
    return lam


def liar() -> Formula:
    """The liar sentence: lam with lam == not T(numeral(#lam))."""
    return diagonalize(Not(Tr(Var("v"))))


def truth_teller() -> Formula:
    return diagonalize(Tr(Var("v")))
