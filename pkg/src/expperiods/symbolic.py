"""Exact arithmetic over Q(t) and over Laurent polynomials Q[t][u, 1/u].

Everything downstream (degree reduction, connection matrices, scalar
operators, singular sets) is built on three small exact types:

* :class:`TPoly` — dense univariate polynomials in ``t`` over ``Fraction``;
* :class:`RatFun` — reduced fractions of two ``TPoly`` with monic denominator;
* :class:`LaurentPoly` — finite sums ``sum_k c_k(t) * u^k`` with ``k`` ranging
  over the integers and ``c_k`` a ``TPoly``.

Rational scalars are plain :class:`fractions.Fraction`, which already keeps
``gcd(num, den) = 1`` and ``den > 0``.  A tiny expression parser and canonical
printers make every object round-trip through strings, which is what the CLI
serializes.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import AtSingularT, SingularOverQt, SpecFormatError

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class TPoly:
    """Dense polynomial in ``t`` with ``Fraction`` coefficients.

    ``coeffs[k]`` is the coefficient of ``t^k``; trailing zeros are trimmed,
    and the zero polynomial stores an empty tuple (degree ``-1``).
    """

    __slots__ = ("coeffs", "_fc")

    def __init__(self, coeffs: Iterable[Union[int, Fraction]] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_fc", None)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls) -> "TPoly":
        return cls(())

    @classmethod
    def one(cls) -> "TPoly":
        return cls((1,))

    @classmethod
    def const(cls, c) -> "TPoly":
        return cls((_as_fraction(c),))

    @classmethod
    def t(cls) -> "TPoly":
        return cls((0, 1))

    # -- structure ---------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (_ONE,)

    def lc(self) -> Fraction:
        if not self.coeffs:
            return _ZERO
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return _ZERO

    # -- ring operations ----------------------------------------------------
    def __add__(self, other: "TPoly") -> "TPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return TPoly(out)

    def __neg__(self) -> "TPoly":
        return TPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __mul__(self, other) -> "TPoly":
        if isinstance(other, (int, Fraction)):
            f = _as_fraction(other)
            return TPoly(tuple(c * f for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return TPoly(())
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] += ca * cb
        return TPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        r = TPoly.one()
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def __divmod__(self, other: "TPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return TPoly(()), TPoly(rem)
        quo = [_ZERO] * (dq + 1)
        dlc = other.lc()
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / dlc
            quo[k] = c
            if c:
                for j, oc in enumerate(other.coeffs):
                    rem[k + j] -= c * oc
        return TPoly(quo), TPoly(rem)

    def exact_div(self, other: "TPoly") -> "TPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division was expected to be exact")
        return q

    def derivative(self) -> "TPoly":
        return TPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))

    def monic(self) -> "TPoly":
        if self.is_zero():
            return self
        inv = 1 / self.lc()
        return TPoly(tuple(c * inv for c in self.coeffs))

    def content(self) -> Fraction:
        """Positive rational content, gcd of numerators over lcm of denominators."""
        if self.is_zero():
            return _ZERO
        ng = 0
        dl = 1
        for c in self.coeffs:
            ng = math.gcd(ng, abs(c.numerator))
            dl = dl * c.denominator // math.gcd(dl, c.denominator)
        return Fraction(ng, dl)

    # -- evaluation ----------------------------------------------------------
    def eval_exact(self, x: Fraction) -> Fraction:
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _float_coeffs(self):
        fc = self._fc
        if fc is None:
            fc = tuple(float(c) for c in self.coeffs)
            object.__setattr__(self, "_fc", fc)
        return fc

    def eval(self, x):
        """Horner evaluation; ``x`` may be complex, float, or an mpmath number."""
        if isinstance(x, (float, complex)):
            acc = 0j if isinstance(x, complex) else 0.0
            for c in reversed(self._float_coeffs()):
                acc = acc * x + c
            return acc
        acc = x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + (x * 0 + c.numerator) / c.denominator
        return acc

    # -- comparison / printing ------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("TPoly", self.coeffs))

    def __repr__(self):
        return f"TPoly({self.to_str()!r})"

    def to_str(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            parts.append(_term_str(c, var, k))
        return _join_terms(parts)


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _term_str(c: Fraction, var: str, k: int) -> str:
    if k == 0:
        return _frac_str(c)
    v = var if k == 1 else f"{var}^{k}"
    if c == 1:
        return v
    if c == -1:
        return f"-{v}"
    return f"{_frac_str(c)}*{v}"


def _join_terms(parts: Sequence[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


def tpoly_gcd(a: TPoly, b: TPoly) -> TPoly:
    """Monic gcd by the Euclidean algorithm."""
    while not b.is_zero():
        a, b = b, divmod(a, b)[1]
    return a.monic() if not a.is_zero() else a


class RatFun:
    """Reduced rational function ``num/den`` in ``t``; the denominator is monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: TPoly, den: TPoly = None):
        if den is None:
            den = TPoly.one()
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = TPoly.zero(), TPoly.one()
        else:
            g = tpoly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            inv = 1 / den.lc()
            if inv != 1:
                num = num * inv
                den = den * inv
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def zero(cls) -> "RatFun":
        return cls(TPoly.zero())

    @classmethod
    def one(cls) -> "RatFun":
        return cls(TPoly.one())

    @classmethod
    def const(cls, c) -> "RatFun":
        return cls(TPoly.const(c))

    @classmethod
    def t(cls) -> "RatFun":
        return cls(TPoly.t())

    @classmethod
    def from_tpoly(cls, p: TPoly) -> "RatFun":
        return cls(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def __add__(self, other) -> "RatFun":
        other = _as_ratfun(other)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den)

    def __sub__(self, other) -> "RatFun":
        return self + (-_as_ratfun(other))

    def __rsub__(self, other) -> "RatFun":
        return _as_ratfun(other) + (-self)

    def __mul__(self, other) -> "RatFun":
        other = _as_ratfun(other)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFun":
        other = _as_ratfun(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFun":
        return _as_ratfun(other) / self

    def derivative(self) -> "RatFun":
        return RatFun(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def eval(self, x):
        dv = self.den.eval(x)
        if dv == 0 or (isinstance(dv, complex) and abs(dv) < 1e-300):
            raise AtSingularT(f"evaluation at a pole of {self.to_str()}")
        return self.num.eval(x) / dv

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFun.const(other)
        return isinstance(other, RatFun) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RatFun", self.num, self.den))

    def __repr__(self):
        return f"RatFun({self.to_str()!r})"

    def to_str(self, var: str = "t") -> str:
        if self.den.is_one():
            return self.num.to_str(var)
        return f"({self.num.to_str(var)})/({self.den.to_str(var)})"


def _as_ratfun(x) -> RatFun:
    if isinstance(x, RatFun):
        return x
    if isinstance(x, TPoly):
        return RatFun(x)
    if isinstance(x, (int, Fraction)):
        return RatFun.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to RatFun")


class LaurentPoly:
    """Finite sum ``sum_k c_k(t) u^k`` with integer ``k`` and ``TPoly`` coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for k, c in (terms or {}).items():
            if isinstance(c, (int, Fraction)):
                c = TPoly.const(c)
            if not c.is_zero():
                clean[int(k)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls({})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: TPoly.one()})

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: TPoly.const(c)})

    @classmethod
    def u(cls, k: int = 1) -> "LaurentPoly":
        return cls({k: TPoly.one()})

    @classmethod
    def t(cls) -> "LaurentPoly":
        return cls({0: TPoly.t()})

    @classmethod
    def monomial(cls, k: int, coeff: TPoly) -> "LaurentPoly":
        return cls({k: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def u_degree(self):
        """Largest u-exponent present, or ``None`` for the zero element."""
        return max(self.terms) if self.terms else None

    @property
    def u_order(self):
        """Smallest u-exponent present, or ``None`` for the zero element."""
        return min(self.terms) if self.terms else None

    def coeff(self, k: int) -> TPoly:
        return self.terms.get(k, TPoly.zero())

    def top_coeff(self) -> TPoly:
        return self.coeff(self.u_degree) if self.terms else TPoly.zero()

    def bottom_coeff(self) -> TPoly:
        return self.coeff(self.u_order) if self.terms else TPoly.zero()

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction, TPoly)):
            c = other if isinstance(other, TPoly) else TPoly.const(other)
            return LaurentPoly({k: v * c for k, v in self.terms.items()})
        out: dict = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                k = i + j
                p = a * b
                out[k] = out[k] + p if k in out else p
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self.terms) == 1:
                ((k, c),) = self.terms.items()
                if c.degree == 0:
                    return LaurentPoly({k * n: TPoly.const(1 / c.coeffs[0]) ** (-n)})
            raise ValueError("negative power of a non-monomial")
        r = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def partial_u(self) -> "LaurentPoly":
        return LaurentPoly({k - 1: c * k for k, c in self.terms.items() if k != 0})

    def partial_t(self) -> "LaurentPoly":
        return LaurentPoly({k: c.derivative() for k, c in self.terms.items()})

    def coeffs_at(self, t) -> dict:
        """Numeric coefficient map ``{k: c_k(t)}`` for a fixed parameter value."""
        return {k: c.eval(t) for k, c in self.terms.items()}

    def eval(self, t, u):
        acc = 0
        for k, c in self.terms.items():
            acc = acc + c.eval(t) * u ** k
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(("LaurentPoly", frozenset(self.terms.items())))

    def __repr__(self):
        return f"LaurentPoly({self.to_str()!r})"

    def to_str(self, uvar: str = "u", tvar: str = "t") -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            if k == 0:
                s = c.to_str(tvar)
                parts.append(f"({s})" if len(_nonzero_terms(c)) > 1 else s)
                continue
            up = uvar if k == 1 else f"{uvar}^{k}"
            if c.is_one():
                parts.append(up)
            elif c == TPoly.const(-1):
                parts.append(f"-{up}")
            elif len(_nonzero_terms(c)) > 1:
                parts.append(f"({c.to_str(tvar)})*{up}")
            else:
                parts.append(f"{c.to_str(tvar)}*{up}")
        return _join_terms(parts)


def _nonzero_terms(p: TPoly):
    return [c for c in p.coeffs if c]


# ---------------------------------------------------------------------------
# Expression parsing
# ---------------------------------------------------------------------------
#
# Grammar (whitespace-insensitive):
#   expr   := term (('+'|'-') term)*
#   term   := unary (('*'|'/') unary)*
#   unary  := ('+'|'-')* power
#   power  := atom (('^'|'**') exponent)?
#   atom   := INT | 't' | 'u' | '(' expr ')'
#   exponent := INT | ('-'|'+') INT | '(' ('-'|'+')? INT ')'
#
# Values are Laurent polynomials in u whose coefficients live in Q(t);
# division requires a u-free, nonzero divisor.


class _Tok:
    __slots__ = ("kind", "text")

    def __init__(self, kind, text):
        self.kind = kind
        self.text = text


def _tokenize(s: str):
    toks = []
    i, n = 0, len(s)
    while i < n:
        ch = s[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and s[j].isdigit():
                j += 1
            toks.append(_Tok("int", s[i:j]))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (s[j].isalnum() or s[j] == "_"):
                j += 1
            toks.append(_Tok("name", s[i:j]))
            i = j
            continue
        if s.startswith("**", i):
            toks.append(_Tok("op", "^"))
            i += 2
            continue
        if ch in "+-*/^()":
            toks.append(_Tok("op", ch))
            i += 1
            continue
        raise SpecFormatError(f"unexpected character {ch!r} in expression")
    toks.append(_Tok("end", ""))
    return toks


class _Parser:
    """Recursive-descent evaluator into {u-exponent: RatFun} maps."""

    def __init__(self, s: str):
        self.toks = _tokenize(s)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect_op(self, text):
        t = self.take()
        if t.kind != "op" or t.text != text:
            raise SpecFormatError(f"expected {text!r}")

    def parse(self):
        v = self.expr()
        if self.peek().kind != "end":
            raise SpecFormatError(f"trailing input near {self.peek().text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            w = self.term()
            v = _map_add(v, w) if op == "+" else _map_add(v, _map_neg(w))
        return v

    def term(self):
        v = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            w = self.unary()
            if op == "*":
                v = _map_mul(v, w)
            else:
                v = _map_div(v, w)
        return v

    def unary(self):
        sign = 1
        while self.peek().kind == "op" and self.peek().text in "+-":
            if self.take().text == "-":
                sign = -sign
        v = self.power()
        return v if sign == 1 else _map_neg(v)

    def power(self):
        v = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            e = self.exponent()
            v = _map_pow(v, e)
        return v

    def exponent(self) -> int:
        t = self.peek()
        sign = 1
        if t.kind == "op" and t.text == "(":
            self.take()
            e = self.exponent()
            self.expect_op(")")
            return e
        if t.kind == "op" and t.text in "+-":
            self.take()
            sign = -1 if t.text == "-" else 1
            t = self.peek()
        if t.kind != "int":
            raise SpecFormatError("expected an integer exponent")
        self.take()
        return sign * int(t.text)

    def atom(self):
        t = self.take()
        if t.kind == "int":
            return {0: RatFun.const(int(t.text))}
        if t.kind == "name":
            if t.text == "t":
                return {0: RatFun.t()}
            if t.text == "u":
                return {1: RatFun.one()}
            raise SpecFormatError(f"unknown symbol {t.text!r} (only t and u are allowed)")
        if t.kind == "op" and t.text == "(":
            v = self.expr()
            self.expect_op(")")
            return v
        raise SpecFormatError(f"unexpected token {t.text!r}")


def _map_add(a, b):
    out = dict(a)
    for k, c in b.items():
        s = out[k] + c if k in out else c
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _map_neg(a):
    return {k: -c for k, c in a.items()}


def _map_mul(a, b):
    out = {}
    for i, ca in a.items():
        for j, cb in b.items():
            k = i + j
            p = ca * cb
            if k in out:
                p = out[k] + p
            if p.is_zero():
                out.pop(k, None)
            else:
                out[k] = p
    return out


def _map_div(a, b):
    if list(b) not in ([0], []):
        raise SpecFormatError("division by a u-dependent expression is not allowed")
    if not b or b[0].is_zero():
        raise SpecFormatError("division by zero")
    inv = RatFun.one() / b[0]
    return {k: c * inv for k, c in a.items()}


def _map_pow(a, e: int):
    if e >= 0:
        r = {0: RatFun.one()}
        base = a
        while e:
            if e & 1:
                r = _map_mul(r, base)
            base = _map_mul(base, base)
            e >>= 1
        return r
    if len(a) == 1:
        ((k, c),) = a.items()
        return _map_pow({-k: RatFun.one() / c}, -e)
    raise SpecFormatError("negative power of a non-monomial expression")


def parse_laurent(s: str) -> LaurentPoly:
    """Parse an expression in ``t`` and ``u`` into a LaurentPoly over Q[t].

    Division is restricted to u-free constants; a genuine denominator in ``t``
    is rejected because phase functions live in Q[t][u, 1/u].
    """
    m = _Parser(s).parse()
    terms = {}
    for k, c in m.items():
        if not c.is_polynomial():
            raise SpecFormatError(f"coefficient of u^{k} has a t-denominator: {c.to_str()}")
        terms[k] = c.num
    return LaurentPoly(terms)


def parse_ratfun(s: str) -> RatFun:
    """Parse a u-free expression into a rational function of ``t``."""
    m = _Parser(s).parse()
    if any(k != 0 for k in m):
        raise SpecFormatError("expected a u-free expression")
    return m.get(0, RatFun.zero())


def parse_tpoly(s: str) -> TPoly:
    r = parse_ratfun(s)
    if not r.is_polynomial():
        raise SpecFormatError("expected a polynomial in t (no denominators)")
    return r.num


# ---------------------------------------------------------------------------
# Exact linear algebra over Q(t)
# ---------------------------------------------------------------------------


def _pivot_size(r: RatFun) -> int:
    return r.num.degree + r.den.degree


def solve_linear_ratfun(A: Sequence[Sequence[RatFun]], b: Sequence[RatFun]) -> list:
    """Solve the square system ``A x = b`` exactly over Q(t).

    Raises:
        SingularOverQt: if the matrix is singular as a matrix over Q(t).
    """
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("shape mismatch")
    M = [[_as_ratfun(x) for x in row] + [_as_ratfun(b[i])] for i, row in enumerate(A)]
    for col in range(n):
        pivot = None
        best = None
        for r in range(col, n):
            if not M[r][col].is_zero():
                sz = _pivot_size(M[r][col])
                if best is None or sz < best:
                    pivot, best = r, sz
        if pivot is None:
            raise SingularOverQt("matrix is singular over Q(t)")
        M[col], M[pivot] = M[pivot], M[col]
        inv = RatFun.one() / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and not M[r][col].is_zero():
                f = M[r][col]
                M[r] = [M[r][j] - f * M[col][j] for j in range(n + 1)]
    return [M[i][n] for i in range(n)]


class IncrementalSpan:
    """Grow an echelonized span of Q(t)-row-vectors, recording combinations.

    ``insert(v)`` either reports that ``v`` is dependent on the rows inserted
    so far — returning the coefficients of that dependence — or adds it.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows = []  # (pivot_col, reduced_vector, combo_over_inserted)
        self.count = 0

    def insert(self, v: Sequence[RatFun]):
        """Return ``None`` if independent (and keep it), else coefficients
        ``c`` with ``v = sum_j c[j] * v_j`` over previously inserted rows."""
        vec = [_as_ratfun(x) for x in v]
        combo = [RatFun.zero()] * self.count
        for pc, row, rcombo in self.rows:
            if not vec[pc].is_zero():
                f = vec[pc]
                vec = [vec[j] - f * row[j] for j in range(self.width)]
                combo = [combo[j] + f * rcombo[j] for j in range(self.count)]
        pivot = next((j for j in range(self.width) if not vec[j].is_zero()), None)
        if pivot is None:
            return combo
        inv = RatFun.one() / vec[pivot]
        vec = [x * inv for x in vec]
        combo = [x * inv for x in combo]
        # reduced row = inv * v_new - sum_j combo[j] * v_j over the originals
        newcombo = [-c for c in combo] + [inv]
        self.rows = [
            (pc, row, rc + [RatFun.zero()]) for pc, row, rc in self.rows
        ]
        self.rows.append((pivot, vec, newcombo))
        self.count += 1
        return None


def normalize_coefficient_list(cs: Sequence[RatFun]):
    """Clear denominators and remove content from an ODE coefficient list.

    Returns ``TPoly`` coefficients with trivial common polynomial factor,
    integer content 1, and positive leading coefficient in the last entry.
    """
    cs = [_as_ratfun(c) for c in cs]
    den = TPoly.one()
    for c in cs:
        g = tpoly_gcd(den, c.den)
        den = den * c.den.exact_div(g)
    polys = [(c * RatFun(den)).num for c in cs]
    g = TPoly.zero()
    for p in polys:
        g = tpoly_gcd(g, p) if not g.is_zero() else p.monic()
        if g.degree == 0:
            break
    if not g.is_zero() and g.degree > 0:
        polys = [p.exact_div(g) for p in polys]
    content = _ZERO
    for p in polys:
        c = p.content()
        if c:
            content = Fraction(
                math.gcd(content.numerator, c.numerator),
                (content.denominator * c.denominator)
                // math.gcd(content.denominator, c.denominator),
            ) if content else c
    if content and content != 1:
        polys = [p * (1 / content) for p in polys]
    lead = next((p for p in reversed(polys) if not p.is_zero()), None)
    if lead is not None and lead.lc() < 0:
        polys = [-p for p in polys]
    return polys
