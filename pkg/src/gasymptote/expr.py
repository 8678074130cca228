"""
Expression trees for meromorphic functions of one variable ``s``.

The grammar accepted by :func:`parse` (see ``docs/grammar.md``)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" unary)?
    atom   := number | "I" | "pi" | "s" | "(" expr ")"
            | ("sin" | "cos" | "exp" | "sqrt") "(" expr ")"
            | "pow" "(" expr "," expr ["," integer] ")"

Exponents must fold to exact rationals. ``pow(w, p/q, k)`` selects the
``k``-th sheet of ``w^(p/q)``, i.e. ``exp(p/q * (Log w + 2*pi*I*k))``; every
other fractional power is the principal one (argument in ``(-pi, pi]``).
"""

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

__all__ = [
    "Expr", "Const", "Num", "ImagUnit", "PiConst", "Var", "Add", "Sub", "Mul",
    "Div", "Pow", "Neg", "Func", "CurveParam", "ParseError", "PoleError",
    "parse", "evaluate", "evaluate_mp", "substitute", "substitute_power", "split",
    "as_polynomial", "is_constant", "S", "I", "PI",
]

FUNCTIONS = ("sin", "cos", "exp")

# |value| beyond this during evaluation is treated as hitting a pole
POLE_THRESHOLD = 1e300


class ParseError(ValueError):
    """Raised for malformed input; ``position`` is the 0-based offset."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class PoleError(ArithmeticError):
    """Raised when evaluation lands on a pole or a singular power."""


# ====
# Tree
# ====

class Expr:
    """Base node. Nodes are immutable and hashable."""

    __slots__ = ()

    def __str__(self):
        return to_string(self)

    # operator sugar, used heavily in tests and when building asymptote curves
    def __add__(self, other):
        return make_add(self, _lift(other))

    def __radd__(self, other):
        return make_add(_lift(other), self)

    def __sub__(self, other):
        return make_sub(self, _lift(other))

    def __rsub__(self, other):
        return make_sub(_lift(other), self)

    def __mul__(self, other):
        return make_mul(self, _lift(other))

    def __rmul__(self, other):
        return make_mul(_lift(other), self)

    def __truediv__(self, other):
        return make_div(self, _lift(other))

    def __rtruediv__(self, other):
        return make_div(_lift(other), self)

    def __neg__(self):
        return make_neg(self)

    def __pow__(self, other):
        return make_pow(self, Fraction(other))


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Num(Expr):
    """Inexact complex constant (numerically located poles, fitted values)."""
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True)
class ImagUnit(Expr):
    pass


@dataclass(frozen=True)
class PiConst(Expr):
    pass


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Fraction
    sheet: int = 0

    def __post_init__(self):
        object.__setattr__(self, "exponent", Fraction(self.exponent))


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise ValueError(f"unsupported function {self.name!r}")


S = Var()
I = ImagUnit()
PI = PiConst()


def _lift(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(x)
    if isinstance(x, (float, complex)):
        return Num(x)
    raise TypeError(f"cannot use {type(x).__name__} in an expression")


# ==================
# Smart constructors
# ==================
# Only exact rational constants are folded; I, pi and Num stay symbolic.

def make_add(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def make_sub(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Sub(a, b)


def make_mul(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Mul(a, b)


def make_div(a, b):
    if isinstance(b, Const) and b.value == 0:
        raise ZeroDivisionError("division by a constant zero")
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value / b.value)
    return Div(a, b)


def make_neg(a):
    if isinstance(a, Const):
        return Const(-a.value)
    return Neg(a)


def make_pow(base, exponent, sheet=0):
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        sheet = 0
    if exponent == 1:
        return base
    if isinstance(base, Const) and exponent.denominator == 1:
        if base.value == 0 and exponent < 0:
            raise ZeroDivisionError("zero raised to a negative power")
        return Const(base.value ** exponent.numerator)
    return Pow(base, exponent, sheet)


# =======
# Printer
# =======

_ATOMS = (Var, ImagUnit, PiConst, Func)


def _fmt_rational(q):
    q = Fraction(q)
    if q.denominator == 1 and q >= 0:
        return str(q.numerator)
    return f"({q})"


def _fmt_complex(z):
    return f"({z.real!r}+{z.imag!r}*I)"


def _wrap(e, parenthesize):
    text = to_string(e)
    return f"({text})" if parenthesize else text


def to_string(e):
    """Render ``e`` in the input grammar; ``parse(to_string(e)) == e``."""
    if isinstance(e, Const):
        return _fmt_rational(e.value)
    if isinstance(e, Num):
        return _fmt_complex(e.value)
    if isinstance(e, ImagUnit):
        return "I"
    if isinstance(e, PiConst):
        return "pi"
    if isinstance(e, Var):
        return "s"
    if isinstance(e, Add):
        return f"{to_string(e.left)} + {_wrap(e.right, isinstance(e.right, (Add, Sub)))}"
    if isinstance(e, Sub):
        return f"{to_string(e.left)} - {_wrap(e.right, isinstance(e.right, (Add, Sub)))}"
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        left = _wrap(e.left, isinstance(e.left, (Add, Sub)))
        right = _wrap(e.right, isinstance(e.right, (Add, Sub, Mul, Div)))
        return f"{left}{op}{right}"
    if isinstance(e, Neg):
        inner = e.operand
        simple = isinstance(inner, _ATOMS + (Pow,)) or (
            isinstance(inner, Const) and inner.value >= 0 and inner.value.denominator == 1)
        return "-" + _wrap(inner, not simple)
    if isinstance(e, Pow):
        if e.sheet:
            return f"pow({to_string(e.base)}, {e.exponent}, {e.sheet})"
        simple = isinstance(e.base, _ATOMS) or (
            isinstance(e.base, Const) and e.base.value >= 0 and e.base.value.denominator == 1)
        return f"{_wrap(e.base, not simple)}^{_fmt_rational(e.exponent)}"
    if isinstance(e, Func):
        return f"{e.name}({to_string(e.arg)})"
    raise TypeError(f"not an expression: {e!r}")


# ======
# Parser
# ======

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+(?:[eE][-+]?\d+)?)|([A-Za-z_]\w*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:

    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.next()
        if val != value:
            found = val or "end of input"
            raise ParseError(f"expected {value!r}, found {found!r}", pos)

    def fail(self, message, pos):
        raise ParseError(message, pos)

    def guard(self, builder, pos, *args):
        try:
            return builder(*args)
        except ZeroDivisionError as exc:
            raise ParseError(str(exc), pos) from None

    def parse(self):
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            self.fail(f"unexpected {val!r}", pos)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, pos = self.next()
            rhs = self.term()
            e = make_add(e, rhs) if op == "+" else make_sub(e, rhs)
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.next()
            rhs = self.unary()
            e = make_mul(e, rhs) if op == "*" else self.guard(make_div, pos, e, rhs)
        return e

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val in ("-", "+"):
            self.next()
            operand = self.unary()
            return make_neg(operand) if val == "-" else operand
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            _, _, pos = self.next()
            exp_expr = self.unary()
            return self.guard(make_pow, pos, base, self.rational(exp_expr, pos))
        return base

    def rational(self, e, pos):
        if not isinstance(e, Const):
            self.fail(f"exponent {to_string(e)!r} is not a rational constant", pos)
        return e.value

    def atom(self):
        kind, val, pos = self.next()
        if kind == "num":
            return Const(Fraction(val))
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            if val == "s":
                return S
            if val == "I":
                return I
            if val == "pi":
                return PI
            if val in FUNCTIONS or val == "sqrt":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                if val == "sqrt":
                    return make_pow(arg, Fraction(1, 2))
                return Func(val, arg)
            if val == "pow":
                self.expect("(")
                base = self.expr()
                self.expect(",")
                exp_pos = self.peek()[2]
                exponent = self.rational(self.expr(), exp_pos)
                sheet = 0
                if self.peek()[1] == ",":
                    self.next()
                    sheet_pos = self.peek()[2]
                    k = self.expr()
                    if not isinstance(k, Const) or k.value.denominator != 1:
                        self.fail("sheet index must be an integer", sheet_pos)
                    sheet = int(k.value)
                self.expect(")")
                return self.guard(make_pow, pos, base, exponent, sheet)
            self.fail(f"unknown name {val!r}", pos)
        found = val or "end of input"
        self.fail(f"unexpected {found!r}", pos)


def parse(text):
    """Parse ``text`` into a canonical :class:`Expr`.

    Raises
    ------
    ParseError
        On syntax errors (with position), a constant zero denominator, or a
        non-rational exponent.
    """
    return _Parser(text).parse()


# ==========
# Evaluation
# ==========

def _power(w, r, sheet=0):
    if r.denominator == 1:
        if w == 0 and r < 0:
            raise PoleError("zero raised to a negative power")
        return w ** r.numerator
    if w == 0:
        if r < 0:
            raise PoleError("zero raised to a negative fractional power")
        return 0j
    return cmath.exp(float(r) * (cmath.log(w) + 2j * math.pi * sheet))


def evaluate(e, z):
    """Evaluate ``e`` at the complex point ``z``.

    Fractional powers use the principal branch unless a sheet is attached.
    Raises :class:`PoleError` on a zero division or overflow past
    ``POLE_THRESHOLD``.
    """
    z = complex(z)
    value = _eval(e, z)
    if not cmath.isfinite(value) or abs(value) > POLE_THRESHOLD:
        raise PoleError(f"value overflow at {z}")
    return value


def _eval(e, z):
    if isinstance(e, Const):
        return complex(e.value)
    if isinstance(e, Num):
        return e.value
    if isinstance(e, ImagUnit):
        return 1j
    if isinstance(e, PiConst):
        return complex(math.pi)
    if isinstance(e, Var):
        return z
    if isinstance(e, Add):
        return _eval(e.left, z) + _eval(e.right, z)
    if isinstance(e, Sub):
        return _eval(e.left, z) - _eval(e.right, z)
    if isinstance(e, Mul):
        return _eval(e.left, z) * _eval(e.right, z)
    if isinstance(e, Div):
        den = _eval(e.right, z)
        if den == 0:
            raise PoleError(f"division by zero at {z}")
        value = _eval(e.left, z) / den
        if not cmath.isfinite(value) or abs(value) > POLE_THRESHOLD:
            raise PoleError(f"value overflow at {z}")
        return value
    if isinstance(e, Neg):
        return -_eval(e.operand, z)
    if isinstance(e, Pow):
        try:
            return _power(_eval(e.base, z), e.exponent, e.sheet)
        except OverflowError:
            raise PoleError(f"value overflow at {z}") from None
    if isinstance(e, Func):
        arg = _eval(e.arg, z)
        try:
            return {"sin": cmath.sin, "cos": cmath.cos, "exp": cmath.exp}[e.name](arg)
        except OverflowError:
            raise PoleError(f"value overflow at {z}") from None
    raise TypeError(f"not an expression: {e!r}")


def evaluate_mp(e, z, dps=60):
    """Evaluate ``e`` at ``z`` with mpmath at ``dps`` decimal digits.

    Same branch conventions as :func:`evaluate`; used where double
    precision cancels (e.g. ``cos(s) - 1`` very close to 0). Returns an
    ``mpmath.mpc``.
    """
    with mpmath.workdps(dps):
        return _eval_mp(e, mpmath.mpc(z))


def _eval_mp(e, z):
    mp = mpmath
    if isinstance(e, Const):
        return mp.mpc(mp.mpf(e.value.numerator) / e.value.denominator)
    if isinstance(e, Num):
        return mp.mpc(e.value)
    if isinstance(e, ImagUnit):
        return mp.mpc(0, 1)
    if isinstance(e, PiConst):
        return mp.mpc(mp.pi)
    if isinstance(e, Var):
        return z
    if isinstance(e, (Add, Sub, Mul, Div)):
        a, b = _eval_mp(e.left, z), _eval_mp(e.right, z)
        if isinstance(e, Add):
            return a + b
        if isinstance(e, Sub):
            return a - b
        if isinstance(e, Mul):
            return a * b
        if b == 0:
            raise PoleError(f"division by zero at {z}")
        return a / b
    if isinstance(e, Neg):
        return -_eval_mp(e.operand, z)
    if isinstance(e, Pow):
        w = _eval_mp(e.base, z)
        r = e.exponent
        if r.denominator == 1:
            if w == 0 and r < 0:
                raise PoleError("zero raised to a negative power")
            return w ** r.numerator
        if w == 0:
            if r < 0:
                raise PoleError("zero raised to a negative fractional power")
            return mp.mpc(0)
        q = mp.mpf(r.numerator) / r.denominator
        return mp.exp(q * (mp.log(w) + 2j * mp.pi * e.sheet))
    if isinstance(e, Func):
        return {"sin": mp.sin, "cos": mp.cos, "exp": mp.exp}[e.name](_eval_mp(e.arg, z))
    raise TypeError(f"not an expression: {e!r}")


# ============
# Substitution
# ============

def substitute(e, replacement):
    """Replace every occurrence of ``s`` in ``e`` by ``replacement``."""
    return _subst(e, lambda: replacement, None)


def substitute_power(e, gamma):
    """Return ``e`` with ``s`` replaced by ``s^gamma``.

    Powers sitting directly on ``s`` absorb the factor, so ``sqrt(s)`` with
    ``gamma=2`` becomes ``s``. This matches the series convention that the
    leading coefficient takes the principal root; pointwise it agrees with
    ``e(z^gamma)`` for ``|arg z| < pi/gamma``.
    """
    gamma = int(gamma)
    if gamma < 1:
        raise ValueError("gamma must be a positive integer")
    return _subst(e, lambda: make_pow(S, gamma), gamma)


def _subst(e, repl, gamma):
    if isinstance(e, Var):
        return repl()
    if isinstance(e, (Const, Num, ImagUnit, PiConst)):
        return e
    if isinstance(e, Pow):
        if gamma is not None and isinstance(e.base, Var) and e.sheet == 0:
            return make_pow(S, e.exponent * gamma)
        return make_pow(_subst(e.base, repl, gamma), e.exponent, e.sheet)
    if isinstance(e, Neg):
        return make_neg(_subst(e.operand, repl, gamma))
    if isinstance(e, Func):
        return Func(e.name, _subst(e.arg, repl, gamma))
    builder = {Add: make_add, Sub: make_sub, Mul: make_mul, Div: make_div}[type(e)]
    return builder(_subst(e.left, repl, gamma), _subst(e.right, repl, gamma))


# =====================
# Structural inspection
# =====================

def is_constant(e):
    """True when ``e`` does not mention ``s``."""
    if isinstance(e, Var):
        return False
    if isinstance(e, (Const, Num, ImagUnit, PiConst)):
        return True
    if isinstance(e, (Pow, Neg)):
        return is_constant(e.base if isinstance(e, Pow) else e.operand)
    if isinstance(e, Func):
        return is_constant(e.arg)
    return is_constant(e.left) and is_constant(e.right)


def split(e):
    """Structural numerator/denominator split ``e == num/den``.

    Quotients split, products and sums combine over the product of the
    denominators, powers distribute. Transcendental heads stay atomic.
    """
    num, den = _split(e)
    return num, (den if den is not None else Const(1))


def _mul_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return make_mul(a, b)


def _split(e):
    # den is None when it is structurally 1
    if isinstance(e, Div):
        na, da = _split(e.left)
        nb, db = _split(e.right)
        return _mul_opt(na, db) if db is not None else na, _mul_opt(da, nb)
    if isinstance(e, Mul):
        na, da = _split(e.left)
        nb, db = _split(e.right)
        return make_mul(na, nb), _mul_opt(da, db)
    if isinstance(e, (Add, Sub)):
        na, da = _split(e.left)
        nb, db = _split(e.right)
        builder = make_add if isinstance(e, Add) else make_sub
        if da is None and db is None:
            return builder(na, nb), None
        return builder(_mul_opt(na, db), _mul_opt(nb, da)), _mul_opt(da, db)
    if isinstance(e, Neg):
        n, d = _split(e.operand)
        return make_neg(n), d
    if isinstance(e, Pow):
        n, d = _split(e.base)
        r = e.exponent
        if r > 0:
            return make_pow(n, r, e.sheet), (make_pow(d, r, e.sheet) if d is not None else None)
        if d is None:
            return Const(1), make_pow(n, -r, e.sheet)
        return make_pow(d, -r, e.sheet), make_pow(n, -r, e.sheet)
    return e, None


def as_polynomial(e):
    """Ascending coefficient list of ``e`` as a polynomial in ``s``, or None.

    Coefficients are ``Fraction`` where exact, ``complex`` otherwise.
    """
    if isinstance(e, Const):
        return [e.value]
    if isinstance(e, Num):
        return [e.value]
    if isinstance(e, ImagUnit):
        return [1j]
    if isinstance(e, PiConst):
        return [math.pi]
    if isinstance(e, Var):
        return [Fraction(0), Fraction(1)]
    if isinstance(e, Neg):
        p = as_polynomial(e.operand)
        return None if p is None else [-c for c in p]
    if isinstance(e, Pow):
        if e.exponent.denominator != 1 or e.exponent < 0:
            return None
        p = as_polynomial(e.base)
        if p is None:
            return None
        out = [Fraction(1)]
        for _ in range(e.exponent.numerator):
            out = _poly_mul(out, p)
        return out
    if isinstance(e, (Add, Sub, Mul)):
        a, b = as_polynomial(e.left), as_polynomial(e.right)
        if a is None or b is None:
            return None
        if isinstance(e, Mul):
            return _poly_mul(a, b)
        if isinstance(e, Sub):
            b = [-c for c in b]
        n = max(len(a), len(b))
        a = a + [Fraction(0)] * (n - len(a))
        b = b + [Fraction(0)] * (n - len(b))
        return [x + y for x, y in zip(a, b)]
    if isinstance(e, Div):
        a, b = as_polynomial(e.left), as_polynomial(e.right)
        if a is None or b is None or any(c != 0 for c in b[1:]):
            return None
        return [c / b[0] for c in a]
    return None


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


# ================
# Curve parameters
# ================

@dataclass(frozen=True)
class CurveParam:
    """A parametrization ``s -> (p_1(s), ..., p_n(s))`` with ``n >= 2``.

    Each component carries its numerator/denominator split.
    """

    components: tuple
    splits: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        comps = tuple(parse(c) if isinstance(c, str) else c for c in self.components)
        if len(comps) < 2:
            raise ValueError("a curve needs at least two components")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "splits", tuple(split(c) for c in comps))

    @classmethod
    def from_strings(cls, *texts):
        if len(texts) == 1 and not isinstance(texts[0], str):
            texts = tuple(texts[0])
        return cls(tuple(parse(t) for t in texts))

    @property
    def dimension(self):
        return len(self.components)

    def numerator(self, i):
        return self.splits[i][0]

    def denominator(self, i):
        return self.splits[i][1]

    def __call__(self, z):
        return tuple(evaluate(c, z) for c in self.components)

    def __str__(self):
        return "(" + ", ".join(to_string(c) for c in self.components) + ")"
