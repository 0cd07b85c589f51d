"""Generalised-polynomial expressions over one integer variable.

AST + parser + pretty-printer + exact evaluator, the discrete derivatives
(shift, symmetric, iterated symmetric), and the classifier that compares
the vanishing of the second symmetric derivative of g(n) = nint(b*n*nint(a*n))
against its carry/fractional-part characterisation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import chain, combinations
from typing import Callable, Union

from .errors import ArityTooSmall, ExprSyntaxError, UnknownConstant
from .exactnum import HALF, AlgebraicReal

Number = Union[int, Fraction, AlgebraicReal]

# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Add:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Sub:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Mul:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Floor:
    arg: "Expr"


@dataclass(frozen=True)
class Nint:
    arg: "Expr"


@dataclass(frozen=True)
class FracSigned:
    arg: "Expr"


@dataclass(frozen=True)
class CircleNorm:
    arg: "Expr"


@dataclass(frozen=True)
class IndicatorLess:
    lhs: "Expr"
    rhs: "Expr"


Expr = Union[IntLit, Const, Var, Add, Sub, Mul, Neg, Floor, Nint,
             FracSigned, CircleNorm, IndicatorLess]

INT_SORT = "int"
REAL_SORT = "real"


def expr_sort(expr: Expr) -> str:
    """Static sort of an expression; integer-sort nodes evaluate to int."""
    if isinstance(expr, (IntLit, Var, Floor, Nint, IndicatorLess)):
        return INT_SORT
    if isinstance(expr, Const):
        return REAL_SORT
    if isinstance(expr, (FracSigned, CircleNorm)):
        return REAL_SORT
    if isinstance(expr, Neg):
        return expr_sort(expr.arg)
    if isinstance(expr, (Add, Sub, Mul)):
        a, b = expr_sort(expr.lhs), expr_sort(expr.rhs)
        return INT_SORT if a == b == INT_SORT else REAL_SORT
    raise TypeError(f"not an expression node: {expr!r}")


# ---------------------------------------------------------------------------
# Parser (grammar: expr/term/factor with floor/nint/frac/norm/ind keywords)
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[a-z][a-z0-9_]*)|(?P<op>[-+*()<]))")
_FUNCS = ("floor", "nint", "frac", "norm", "ind")


class _Tokens:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.tok: tuple[str, str] | None = None
        self.tok_pos = 0
        self.advance()

    def advance(self) -> None:
        m = _TOKEN.match(self.text, self.pos)
        if m is None:
            rest = self.text[self.pos:].strip()
            if rest:
                raise ExprSyntaxError(f"unrecognised input {rest[:10]!r}", self.pos)
            self.tok = None
            self.tok_pos = len(self.text)
            return
        self.tok_pos = m.start(m.lastgroup)  # type: ignore[arg-type]
        self.pos = m.end()
        self.tok = (m.lastgroup, m.group(m.lastgroup))  # type: ignore[arg-type]

    def expect_op(self, op: str) -> None:
        if self.tok is None or self.tok[0] != "op" or self.tok[1] != op:
            raise ExprSyntaxError(f"expected {op!r}", self.tok_pos, expected=(op,))
        self.advance()

    def peek_op(self, *ops: str) -> str | None:
        if self.tok is not None and self.tok[0] == "op" and self.tok[1] in ops:
            return self.tok[1]
        return None


def parse(text: str) -> Expr:
    """Parse an expression; raises ExprSyntaxError with position on failure."""
    toks = _Tokens(text)
    expr = _parse_expr(toks)
    if toks.tok is not None:
        raise ExprSyntaxError(f"trailing input {toks.tok[1]!r}", toks.tok_pos)
    return expr


def _parse_expr(toks: _Tokens) -> Expr:
    node = _parse_term(toks)
    while (op := toks.peek_op("+", "-")) is not None:
        toks.advance()
        rhs = _parse_term(toks)
        node = Add(node, rhs) if op == "+" else Sub(node, rhs)
    return node


def _parse_term(toks: _Tokens) -> Expr:
    node = _parse_factor(toks)
    while toks.peek_op("*") is not None:
        toks.advance()
        node = Mul(node, _parse_factor(toks))
    return node


def _parse_factor(toks: _Tokens) -> Expr:
    tok = toks.tok
    if tok is None:
        raise ExprSyntaxError("unexpected end of input", toks.tok_pos,
                              expected=("INT", "NAME", "(", "-"))
    kind, value = tok
    if kind == "int":
        toks.advance()
        return IntLit(int(value))
    if kind == "op" and value == "-":
        toks.advance()
        return Neg(_parse_factor(toks))
    if kind == "op" and value == "(":
        toks.advance()
        inner = _parse_expr(toks)
        toks.expect_op(")")
        return inner
    if kind == "name":
        if value in _FUNCS:
            toks.advance()
            toks.expect_op("(")
            if value == "ind":
                pos = toks.tok_pos
                if not (toks.tok and toks.tok == ("name", "norm")):
                    raise ExprSyntaxError("ind() requires norm(...) < ...", pos,
                                          expected=("norm",))
                toks.advance()
                toks.expect_op("(")
                lhs = _parse_expr(toks)
                toks.expect_op(")")
                toks.expect_op("<")
                rhs = _parse_expr(toks)
                toks.expect_op(")")
                return IndicatorLess(CircleNorm(lhs), rhs)
            inner = _parse_expr(toks)
            toks.expect_op(")")
            return {"floor": Floor, "nint": Nint, "frac": FracSigned,
                    "norm": CircleNorm}[value](inner)
        toks.advance()
        if value == "n":
            return Var()
        return Const(value)
    raise ExprSyntaxError(f"unexpected token {value!r}", toks.tok_pos,
                          expected=("INT", "NAME", "(", "-"))


def pretty(expr: Expr) -> str:
    """Grammar-conformant text; parse(pretty(e)) == e for parser output."""
    return _pp(expr, 0)


def _pp(expr: Expr, level: int) -> str:
    # level 0 = expr (+/-), 1 = term (*), 2 = factor
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, Const):
        return expr.name
    if isinstance(expr, Var):
        return "n"
    if isinstance(expr, Neg):
        return "-" + _pp(expr.arg, 2)
    if isinstance(expr, Floor):
        return f"floor({_pp(expr.arg, 0)})"
    if isinstance(expr, Nint):
        return f"nint({_pp(expr.arg, 0)})"
    if isinstance(expr, FracSigned):
        return f"frac({_pp(expr.arg, 0)})"
    if isinstance(expr, CircleNorm):
        return f"norm({_pp(expr.arg, 0)})"
    if isinstance(expr, IndicatorLess):
        if isinstance(expr.lhs, CircleNorm):
            return f"ind(norm({_pp(expr.lhs.arg, 0)}) < {_pp(expr.rhs, 0)})"
        return f"ind(norm({_pp(expr.lhs, 0)}) < {_pp(expr.rhs, 0)})"
    if isinstance(expr, Mul):
        s = f"{_pp(expr.lhs, 1)}*{_pp(expr.rhs, 2)}"
        return f"({s})" if level > 1 else s
    if isinstance(expr, (Add, Sub)):
        op = "+" if isinstance(expr, Add) else "-"
        s = f"{_pp(expr.lhs, 0)}{op}{_pp(expr.rhs, 1)}"
        return f"({s})" if level > 0 else s
    raise TypeError(f"not an expression node: {expr!r}")


# ---------------------------------------------------------------------------
# Exact evaluation
# ---------------------------------------------------------------------------


def _nint_of(v: Number) -> int:
    if isinstance(v, AlgebraicReal):
        return v.nint()
    f = Fraction(v) + HALF
    return f.numerator // f.denominator


def _floor_of(v: Number) -> int:
    if isinstance(v, AlgebraicReal):
        return v.floor()
    f = Fraction(v)
    return f.numerator // f.denominator


def _frac_of(v: Number) -> Number:
    return v - _nint_of(v)


def _norm_of(v: Number) -> Number:
    f = _frac_of(v)
    if isinstance(f, AlgebraicReal):
        return -f if f.sign() < 0 else f
    return -f if f < 0 else f


def _less(a: Number, b: Number) -> bool:
    d = _sub(a, b)
    if isinstance(d, AlgebraicReal):
        return d.sign() < 0
    return d < 0


def _add(a: Number, b: Number) -> Number:
    return a + b


def _sub(a: Number, b: Number) -> Number:
    if isinstance(b, AlgebraicReal) and not isinstance(a, AlgebraicReal):
        return (-b) + a
    return a - b


def _mul(a: Number, b: Number) -> Number:
    return a * b


def eval_expr(expr: Expr, context: dict[str, Number], n: int) -> Number:
    """Exact value at n; integer-sort expressions return Python ints."""
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, Var):
        return n
    if isinstance(expr, Const):
        try:
            return context[expr.name]
        except KeyError:
            raise UnknownConstant(expr.name) from None
    if isinstance(expr, Add):
        return _add(eval_expr(expr.lhs, context, n), eval_expr(expr.rhs, context, n))
    if isinstance(expr, Sub):
        return _sub(eval_expr(expr.lhs, context, n), eval_expr(expr.rhs, context, n))
    if isinstance(expr, Mul):
        return _mul(eval_expr(expr.lhs, context, n), eval_expr(expr.rhs, context, n))
    if isinstance(expr, Neg):
        return -eval_expr(expr.arg, context, n)
    if isinstance(expr, Floor):
        return _floor_of(eval_expr(expr.arg, context, n))
    if isinstance(expr, Nint):
        return _nint_of(eval_expr(expr.arg, context, n))
    if isinstance(expr, FracSigned):
        return _frac_of(eval_expr(expr.arg, context, n))
    if isinstance(expr, CircleNorm):
        return _norm_of(eval_expr(expr.arg, context, n))
    if isinstance(expr, IndicatorLess):
        return 1 if _less(eval_expr(expr.lhs, context, n),
                          eval_expr(expr.rhs, context, n)) else 0
    raise TypeError(f"not an expression node: {expr!r}")


class SequenceHandle:
    """Integer sequence n -> Z backed by an expression, with a bounded memo.

    The LRU cache is thread-safe; cached hits always equal fresh evaluation.
    """

    def __init__(self, expr: Expr, context: dict[str, Number],
                 memo_size: int = 1 << 20) -> None:
        if expr_sort(expr) != INT_SORT:
            raise TypeError("sequence expression must have integer sort")
        self.expr = expr
        self.context = dict(context)
        self._cached = lru_cache(maxsize=memo_size)(self._fresh)

    def _fresh(self, n: int) -> int:
        return eval_expr(self.expr, self.context, n)  # type: ignore[return-value]

    def fresh(self, n: int) -> int:
        """Evaluation bypassing the memo (for cache-transparency checks)."""
        return self._fresh(n)

    def __call__(self, n: int) -> int:
        return self._cached(n)


def make_sequence(text_or_expr, context: dict[str, Number]) -> SequenceHandle:
    expr = parse(text_or_expr) if isinstance(text_or_expr, str) else text_or_expr
    return SequenceHandle(expr, context)


QUADRATIC_SEQUENCE_TEXT = "nint(beta*n*nint(alpha*n))"
BOHR_TEXT = "ind(norm(alpha*n*n) < rho)"


def quadratic_sequence(alpha: AlgebraicReal, beta: Number,
                       memo_size: int = 1 << 20) -> SequenceHandle:
    """g(n) = nint(beta * n * nint(alpha * n))."""
    return SequenceHandle(parse(QUADRATIC_SEQUENCE_TEXT), {"alpha": alpha, "beta": beta},
                          memo_size=memo_size)


def bohr_indicator_sequence(alpha: AlgebraicReal, rho: Number) -> SequenceHandle:
    """g(n) = 1 if the circle norm of alpha*n^2 is < rho, else 0."""
    return SequenceHandle(parse(BOHR_TEXT), {"alpha": alpha, "rho": rho})


# ---------------------------------------------------------------------------
# Discrete calculus
# ---------------------------------------------------------------------------

IntSeq = Callable[[int], int]


def delta_shift(f: IntSeq, m: int, n: int) -> int:
    """f(n+m) - f(n)."""
    return f(n + m) - f(n)


def delta_sym(f: IntSeq, m: int, n: int) -> int:
    """f(n+m) - f(n) - f(m) + f(0)."""
    return f(n + m) - f(n) - f(m) + f(0)


def delta_sym_iter(f: IntSeq, args: list[int]) -> int:
    """Iterated symmetric derivative at (n0, n1, ..., nr), r >= 1.

    Peels the last argument: each step replaces f by its symmetric
    derivative in that direction, then recurses.
    """
    if len(args) < 2:
        raise ArityTooSmall("need n0 plus at least one derivative direction")
    if len(args) == 2:
        return delta_sym(f, args[1], args[0])
    last = args[-1]
    c = f(last) - f(0)
    g: IntSeq = lambda n: f(n + last) - f(n) - c
    return delta_sym_iter(g, args[:-1])


def delta_sym_iter_subsets(f: IntSeq, args: list[int]) -> int:
    """Independent inclusion-exclusion form of the iterated derivative."""
    if len(args) < 2:
        raise ArityTooSmall("need n0 plus at least one derivative direction")
    n0, rest = args[0], args[1:]
    r = len(rest)
    total = 0
    for k in range(r + 1):
        for idx in combinations(range(r), k):
            s = sum(rest[i] for i in idx)
            total += (-1) ** (r - k) * (f(n0 + s) - f(s))
    return total


# ---------------------------------------------------------------------------
# Second-derivative vanishing classifier for g(n) = nint(b n nint(a n))
# ---------------------------------------------------------------------------

GAMMA_ALL_PAIRS = "all-pairs"
GAMMA_OFF_DIAGONAL = "off-diagonal"

_SUBSETS = tuple(
    frozenset(s) for s in chain.from_iterable(
        combinations((0, 1, 2), k) for k in range(4))
)
_PAIRS = (frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 0}))


@dataclass
class Lemma31Report:
    """Exact classification of one triple for the vanishing criterion."""

    triple: tuple[int, int, int]
    lhs_zero: bool
    cond1: bool
    cond2: bool
    gamma_mode: str
    gammas: dict = dc_field(default_factory=dict)
    gamma_nints: dict = dc_field(default_factory=dict)
    carries_e: dict = dc_field(default_factory=dict)
    carries_f: dict = dc_field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        """True when lhs vanishing matches cond1 and cond2."""
        return self.lhs_zero == (self.cond1 and self.cond2)


def lemma31_classify(n0: int, n1: int, n2: int, alpha: AlgebraicReal,
                     beta: Number, gamma_mode: str = GAMMA_ALL_PAIRS,
                     g: SequenceHandle | None = None) -> Lemma31Report:
    """Classify a positive triple: exact second-derivative vanishing vs the
    carry condition (cond1) and the gamma identity (cond2)."""
    if min(n0, n1, n2) < 1:
        raise ValueError("triple entries must be >= 1")
    if gamma_mode not in (GAMMA_ALL_PAIRS, GAMMA_OFF_DIAGONAL):
        raise ValueError(f"unknown gamma_mode {gamma_mode!r}")
    if g is None:
        g = quadratic_sequence(alpha, beta)
    ns = (n0, n1, n2)

    lhs = delta_sym_iter(g, [n0, n1, n2])

    s = [(alpha * ni).frac_signed() for ni in ns]
    cond1 = True
    for I in _SUBSETS:
        acc: Number = Fraction(0)
        for i in I:
            acc = _add(acc, s[i])
        if _nint_of(acc) != 0:
            cond1 = False
            break

    a_ints = [(alpha * ni).nint() for ni in ns]
    frac_table = {}
    for i in range(3):
        for j in range(3):
            frac_table[(i, j)] = _frac_of(_mul(_mul(beta, ns[i]), a_ints[j]))

    gammas = {}
    gamma_nints = {}
    for I in _SUBSETS:
        acc = Fraction(0)
        for i in I:
            for j in I:
                if gamma_mode == GAMMA_OFF_DIAGONAL and i == j:
                    continue
                acc = _add(acc, frac_table[(i, j)])
        gammas[I] = acc
        gamma_nints[I] = _nint_of(acc)
    full = frozenset({0, 1, 2})
    cond2 = gamma_nints[full] == sum(gamma_nints[p] for p in _PAIRS)

    carries_e = {}
    for I in (_PAIRS + (full,)):
        acc = Fraction(0)
        for i in I:
            acc = _add(acc, s[i])
        carries_e[I] = _nint_of(acc)

    carries_f = {}
    for I in _PAIRS:
        i, j = sorted(I)
        dg = delta_sym(g, ns[j], ns[i])
        nij = _nint_of(_mul(_mul(beta, ns[i]), a_ints[j]))
        nji = _nint_of(_mul(_mul(beta, ns[j]), a_ints[i]))
        bsum = _nint_of(_mul(beta, ns[i] + ns[j]))
        carries_f[I] = dg - nij - nji - bsum * carries_e[I]

    return Lemma31Report(
        triple=ns,
        lhs_zero=(lhs == 0),
        cond1=cond1,
        cond2=cond2,
        gamma_mode=gamma_mode,
        gammas=gammas,
        gamma_nints=gamma_nints,
        carries_e=carries_e,
        carries_f=carries_f,
    )
