"""Exact scalar arithmetic for the tensor engine.

Scalars are multivariate rational functions with rational coefficients.
Every Expr is held in canonical form: numerator and denominator are coprime
polynomials, the denominator is monic under graded lexicographic order, and
a zero numerator forces denominator 1.  Equality of canonical forms is plain
structural equality, so ``a == b`` decides ``a - b == 0`` exactly.

Instances are immutable and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


KIND_COORDINATE = "coordinate"
KIND_PARAMETER = "parameter"
_KINDS = (KIND_COORDINATE, KIND_PARAMETER)


class ExprError(Exception):
    """Raised for invalid scalar arithmetic (zero division, bad symbols)."""


class ExprParseError(ExprError):
    """Raised when an expression string does not parse; carries the offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class PoleError(ExprError):
    """Raised when evaluation or substitution hits a vanishing denominator."""


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: str

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ExprError(f"unknown symbol kind {self.kind!r}")
        if not self.name or not self.name[0].isalpha() and self.name[0] != "_":
            raise ExprError(f"invalid symbol name {self.name!r}")
        if not all(ch.isalnum() or ch == "_" for ch in self.name):
            raise ExprError(f"invalid symbol name {self.name!r}")


class SymbolTable:
    """Registry of the symbols legal in one manifold's expressions.

    Names are unique; the kind decides differentiation (parameters are
    constant along the manifold, so they differentiate to zero).
    """

    def __init__(self):
        self._by_name: dict[str, Symbol] = {}

    def add(self, name: str, kind: str) -> Symbol:
        if name in self._by_name:
            raise ExprError(f"symbol {name!r} already declared")
        sym = Symbol(name, kind)
        self._by_name[name] = sym
        return sym

    def get(self, name: str) -> Symbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise ExprError(f"unknown symbol {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __iter__(self):
        return iter(self._by_name.values())

    def __len__(self) -> int:
        return len(self._by_name)

    def coordinates(self) -> tuple[Symbol, ...]:
        return tuple(s for s in self if s.kind == KIND_COORDINATE)

    def parameters(self) -> tuple[Symbol, ...]:
        return tuple(s for s in self if s.kind == KIND_PARAMETER)


# ---------------------------------------------------------------------------
# sparse polynomials
#
# A monomial is a tuple of (name, exponent) pairs, sorted by name, with all
# exponents positive.  The empty tuple is the constant monomial.  Term order
# is graded lexicographic: total degree first, then alphabetically earlier
# names take priority and the larger exponent wins.

Mono = tuple

_M_ONE: Mono = ()


def _mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for name, e in b:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


def _mono_div(a: Mono, b: Mono) -> Mono | None:
    # a / b, or None when b does not divide a
    exps = dict(a)
    for name, e in b:
        r = exps.get(name, 0) - e
        if r < 0:
            return None
        if r == 0:
            exps.pop(name, None)
        else:
            exps[name] = r
    return tuple(sorted(exps.items()))


def _mono_cmp(a: Mono, b: Mono) -> int:
    da, db = _mono_degree(a), _mono_degree(b)
    if da != db:
        return 1 if da > db else -1
    ea, eb = dict(a), dict(b)
    for name in sorted(set(ea) | set(eb)):
        xa, xb = ea.get(name, 0), eb.get(name, 0)
        if xa != xb:
            return 1 if xa > xb else -1
    return 0


def _dict_leading(terms: dict[Mono, Fraction]) -> tuple[Mono, Fraction]:
    best = None
    for m in terms:
        if best is None or _mono_cmp(m, best) > 0:
            best = m
    return best, terms[best]


class Poly:
    """Sparse distributed polynomial over the rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Mono, Fraction]):
        self.terms = {m: c for m, c in terms.items() if c != 0}

    @staticmethod
    def const(c) -> "Poly":
        c = Fraction(c)
        return Poly({_M_ONE: c}) if c else Poly({})

    @staticmethod
    def var(name: str) -> "Poly":
        return Poly({((name, 1),): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == _M_ONE for m in self.terms)

    def constant_value(self) -> Fraction:
        # valid only when is_constant()
        return self.terms.get(_M_ONE, Fraction(0))

    def variables(self) -> set[str]:
        return {name for m in self.terms for name, _ in m}

    def leading(self) -> tuple[Mono, Fraction]:
        if not self.terms:
            raise ExprError("zero polynomial has no leading term")
        return _dict_leading(self.terms)

    def scale(self, c: Fraction) -> "Poly":
        if c == 0:
            return Poly({})
        return Poly({m: co * c for m, co in self.terms.items()})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict[Mono, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                v = out.get(m, 0) + ca * cb
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Poly(out)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ExprError("negative power of a polynomial")
        out = _P_ONE
        for _ in range(k):
            out = out * self
        return out

    def diff(self, name: str) -> "Poly":
        out: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            exps = dict(m)
            e = exps.get(name, 0)
            if not e:
                continue
            if e == 1:
                exps.pop(name)
            else:
                exps[name] = e - 1
            key = tuple(sorted(exps.items()))
            v = out.get(key, 0) + c * e
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return Poly(out)

    def eval(self, bindings: dict[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for name, e in m:
                v *= bindings[name] ** e
            total += v
        return total

    def sorted_terms(self) -> list[tuple[Mono, Fraction]]:
        # graded lex, descending; deterministic render order
        terms = list(self.terms.items())
        for i in range(1, len(terms)):
            j = i
            while j > 0 and _mono_cmp(terms[j - 1][0], terms[j][0]) < 0:
                terms[j - 1], terms[j] = terms[j], terms[j - 1]
                j -= 1
        return terms

    def __repr__(self) -> str:
        return f"Poly({_poly_str(self)})"


_P_ZERO = Poly({})
_P_ONE = Poly.const(1)


def _poly_divexact(f: Poly, g: Poly) -> Poly:
    """Exact polynomial division; the caller guarantees g divides f."""
    if g.is_zero():
        raise ExprError("division by the zero polynomial")
    q: dict[Mono, Fraction] = {}
    rem = dict(f.terms)
    glm, glc = g.leading()
    while rem:
        rlm, rlc = _dict_leading(rem)
        m = _mono_div(rlm, glm)
        if m is None:
            raise ExprError("inexact polynomial division")
        c = rlc / glc
        q[m] = c
        for gm, gc in g.terms.items():
            key = _mono_mul(m, gm)
            v = rem.get(key, 0) - c * gc
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    return Poly(q)


def _deg_in(f: Poly, name: str) -> int:
    d = 0
    for m in f.terms:
        for n, e in m:
            if n == name and e > d:
                d = e
    return d


def _univar(f: Poly, name: str) -> dict[int, Poly]:
    """View f as univariate in `name` with polynomial coefficients."""
    out: dict[int, dict[Mono, Fraction]] = {}
    for m, c in f.terms.items():
        exps = dict(m)
        e = exps.pop(name, 0)
        rest = tuple(sorted(exps.items()))
        out.setdefault(e, {})[rest] = c
    return {e: Poly(d) for e, d in out.items()}


def _prem(f: Poly, g: Poly, name: str) -> Poly:
    # pseudo-remainder of f by g in the main variable `name`
    dg = _deg_in(g, name)
    lg = _univar(g, name)[dg]
    out = f
    while out and _deg_in(out, name) >= dg:
        df = _deg_in(out, name)
        lf = _univar(out, name)[df]
        shift = Poly({((name, df - dg),): Fraction(1)}) if df > dg else _P_ONE
        out = lg * out - lf * g * shift
    return out


def _content_primitive(f: Poly, name: str) -> tuple[Poly, Poly]:
    coeffs = list(_univar(f, name).values())
    content = _P_ZERO
    for c in coeffs:
        content = poly_gcd(content, c)
    return content, _poly_divexact(f, content)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """A gcd of f and g, unique up to a rational unit.

    Recursive content-primitive computation with a primitive pseudo-remainder
    sequence in the alphabetically first variable.
    """
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    if f.is_constant() or g.is_constant():
        return _P_ONE
    name = sorted(f.variables() | g.variables())[0]
    cf, pf = _content_primitive(f, name)
    cg, pg = _content_primitive(g, name)
    c = poly_gcd(cf, cg)
    if _deg_in(pf, name) < _deg_in(pg, name):
        pf, pg = pg, pf
    while pg:
        r = _prem(pf, pg, name)
        pf = pg
        pg = _content_primitive(r, name)[1] if r else _P_ZERO
    return c * _content_primitive(pf, name)[1]


# ---------------------------------------------------------------------------
# rational functions


class Expr:
    """Canonical multivariate rational function.

    Construct through the classmethods or `parse`; arithmetic keeps the
    canonical form, so two Exprs are equal exactly when they denote the same
    rational function.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, _trusted: bool = False):
        if not _trusted:
            num, den = _canonical(num, den)
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "Expr":
        return _E_ZERO

    @staticmethod
    def one() -> "Expr":
        return _E_ONE

    @staticmethod
    def integer(n: int) -> "Expr":
        return Expr(Poly.const(n), _P_ONE, _trusted=True)

    @staticmethod
    def rational(p, q=1) -> "Expr":
        return Expr(Poly.const(Fraction(p, q) if q != 1 else Fraction(p)),
                    _P_ONE, _trusted=True)

    @staticmethod
    def symbol(sym) -> "Expr":
        name = sym.name if isinstance(sym, Symbol) else str(sym)
        return Expr(Poly.var(name), _P_ONE, _trusted=True)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den == _P_ONE

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ExprError(f"{self} is not a constant")
        return self.num.constant_value()

    def variables(self) -> frozenset[str]:
        return frozenset(self.num.variables() | self.den.variables())

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "Expr":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Expr(self.num * other.den + other.num * self.den,
                    self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr(-self.num, self.den, _trusted=True)

    def __sub__(self, other) -> "Expr":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Expr":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Expr":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Expr(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Expr":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ExprError("division by an identically zero expression")
        return Expr(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "Expr":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k: int) -> "Expr":
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return _E_ONE
        if k < 0:
            if self.is_zero():
                raise ExprError("negative power of zero")
            return Expr(self.den ** (-k), self.num ** (-k))
        return Expr(self.num ** k, self.den ** k)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- calculus -----------------------------------------------------------

    def diff(self, sym: Symbol) -> "Expr":
        """Partial derivative; parameters are constants, so they give 0."""
        if sym.kind != KIND_COORDINATE:
            return _E_ZERO
        n, d = self.num, self.den
        return Expr(n.diff(sym.name) * d - n * d.diff(sym.name), d * d)

    def eval(self, bindings: dict) -> Fraction:
        """Evaluate at rational bindings; every variable must be bound."""
        vals: dict[str, Fraction] = {}
        for key, value in bindings.items():
            name = key.name if isinstance(key, Symbol) else str(key)
            vals[name] = Fraction(value)
        missing = sorted(self.variables() - set(vals))
        if missing:
            raise ExprError(f"unbound symbol {missing[0]!r} in eval")
        dv = self.den.eval(vals)
        if dv == 0:
            raise PoleError(f"denominator of {self} vanishes at the binding")
        return self.num.eval(vals) / dv

    def substitute(self, sym, replacement) -> "Expr":
        """Replace a symbol by an expression and recanonicalize."""
        name = sym.name if isinstance(sym, Symbol) else str(sym)
        rep = _coerce(replacement)
        if rep is NotImplemented:
            raise ExprError(f"cannot substitute {replacement!r}")
        if name not in self.variables():
            return self
        num = _subs_poly(self.num, name, rep)
        den = _subs_poly(self.den, name, rep)
        if den.is_zero():
            raise PoleError(
                f"substituting {name} makes the denominator of {self} "
                "identically zero")
        return num / den

    # -- rendering ----------------------------------------------------------

    def __str__(self) -> str:
        ns = _poly_str(self.num)
        if self.den == _P_ONE:
            return ns
        if len(self.num.terms) > 1:
            ns = f"({ns})"
        ds = _poly_str(self.den)
        if not _den_bare(self.den):
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self) -> str:
        return f"Expr({self})"


def _canonical(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if den.is_zero():
        raise ExprError("zero denominator")
    if num.is_zero():
        return _P_ZERO, _P_ONE
    if not den.is_constant():
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = _poly_divexact(num, g)
            den = _poly_divexact(den, g)
    lc = den.leading()[1]
    if lc != 1:
        inv = 1 / lc
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


def _coerce(value) -> "Expr":
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Expr(Poly.const(value), _P_ONE, _trusted=True)
    return NotImplemented


def _subs_poly(p: Poly, name: str, rep: Expr) -> Expr:
    total = _E_ZERO
    for m, c in p.terms.items():
        exps = dict(m)
        e = exps.pop(name, 0)
        rest = tuple(sorted(exps.items()))
        term = Expr(Poly({rest: c}), _P_ONE, _trusted=True)
        if e:
            term = term * rep ** e
        total = total + term
    return total


_E_ZERO = Expr(_P_ZERO, _P_ONE, _trusted=True)
_E_ONE = Expr(_P_ONE, _P_ONE, _trusted=True)


# ---------------------------------------------------------------------------
# rendering

def _poly_str(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for m, c in p.sorted_terms():
        mag = -c if c < 0 else c
        factors = []
        if mag != 1 or not m:
            factors.append(str(mag))
        for name, e in m:
            factors.append(name if e == 1 else f"{name}^{e}")
        body = "*".join(factors)
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"-{body}" if c < 0 else f"+{body}")
    return "".join(parts)


def _den_bare(den: Poly) -> bool:
    # a denominator may be rendered without parentheses only when it is a
    # single monomial in one variable with coefficient 1: "x" or "x^3"
    if len(den.terms) != 1:
        return False
    (m, c), = den.terms.items()
    return c == 1 and len(m) == 1


# ---------------------------------------------------------------------------
# parsing
#
# expr   := term (('+'|'-') term)*
# term   := factor (('*'|'/') factor)*
# factor := '-' factor | power
# power  := atom ('^' ['-'] INT)?
# atom   := INT | NAME | '(' expr ')'

_T_INT, _T_NAME, _T_OP, _T_END = "int", "name", "op", "end"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append((_T_INT, text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((_T_NAME, text[i:j], i))
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append((_T_OP, ch, i))
            i += 1
            continue
        raise ExprParseError(f"unexpected character {ch!r}", i)
    tokens.append((_T_END, "", n))
    return tokens


class _Parser:
    def __init__(self, tokens, table: SymbolTable):
        self.tokens = tokens
        self.table = table
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.peek()
        if kind != _T_OP or text != op:
            raise ExprParseError(f"expected {op!r}", pos)
        return self.take()

    def parse(self) -> Expr:
        e = self.sum()
        kind, text, pos = self.peek()
        if kind != _T_END:
            raise ExprParseError(f"unexpected {text!r}", pos)
        return e

    def sum(self) -> Expr:
        e = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == _T_OP and text in "+-":
                self.take()
                rhs = self.term()
                e = e + rhs if text == "+" else e - rhs
            else:
                return e

    def term(self) -> Expr:
        e = self.factor()
        while True:
            kind, text, pos = self.peek()
            if kind == _T_OP and text in "*/":
                self.take()
                rhs = self.factor()
                if text == "*":
                    e = e * rhs
                else:
                    if rhs.is_zero():
                        raise ExprParseError("division by zero", pos)
                    e = e / rhs
            else:
                return e

    def factor(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == _T_OP and text == "-":
            self.take()
            return -self.factor()
        return self.power()

    def power(self) -> Expr:
        e = self.atom()
        kind, text, pos = self.peek()
        if kind == _T_OP and text == "^":
            self.take()
            sign = 1
            kind, text, pos = self.peek()
            if kind == _T_OP and text == "-":
                self.take()
                sign = -1
            kind, text, pos = self.peek()
            if kind != _T_INT:
                raise ExprParseError("expected an integer exponent", pos)
            self.take()
            k = sign * int(text)
            if k < 0 and e.is_zero():
                raise ExprParseError("negative power of zero", pos)
            e = e ** k
        return e

    def atom(self) -> Expr:
        kind, text, pos = self.take()
        if kind == _T_INT:
            return Expr.integer(int(text))
        if kind == _T_NAME:
            if text not in self.table:
                raise ExprParseError(f"unknown symbol {text!r}", pos)
            return Expr.symbol(self.table.get(text))
        if kind == _T_OP and text == "(":
            e = self.sum()
            self.expect_op(")")
            return e
        raise ExprParseError(
            f"unexpected {text!r}" if text else "unexpected end of input", pos)


def parse(text: str, table: SymbolTable) -> Expr:
    """Parse an expression string against a symbol table.

    Grammar: integers, rationals via division, declared symbols, + - * /,
    ^ with integer exponents, parentheses.  Errors carry the offset of the
    offending token.
    """
    return _Parser(_tokenize(text), table).parse()


__all__ = [
    "KIND_COORDINATE",
    "KIND_PARAMETER",
    "Expr",
    "ExprError",
    "ExprParseError",
    "PoleError",
    "Symbol",
    "SymbolTable",
    "parse",
]
