"""Truncated Laurent series over a finite field, with precision tracking.

A :class:`LaurentSeries` is either *exact* (a Laurent polynomial; every
coefficient outside the stored window is zero) or known only modulo
``t^prec``.  Nothing is ever reported at an exponent ``>= prec``; a value
whose known coefficients all vanish is the "unknown zero" ``O(t^prec)`` and
is never silently promoted to an exact zero.

Textual format (bit-exact interchange)::

    1 + 2*t^2 + O(t^5)          terms ordered by exponent
    (u+1)*t^-1 + u              extension coefficients, parenthesised if
                                they have more than one term
"""

from __future__ import annotations

import contextlib
import contextvars
import math
import re
from typing import Iterable

from .errors import (
    DivisionByZero,
    FieldMismatch,
    InsufficientPrecision,
    InvalidInput,
    SeriesSyntaxError,
    ValuationOfZero,
)
from .gf import FieldElement, FieldSpec, embedding_table

DEFAULT_WORKING_PRECISION = 32
_working_precision = contextvars.ContextVar("working_precision", default=DEFAULT_WORKING_PRECISION)


def get_working_precision() -> int:
    return _working_precision.get()


def set_working_precision(w: int) -> None:
    if not isinstance(w, int) or w < 1:
        raise InvalidInput(f"working precision must be a positive integer, got {w!r}")
    _working_precision.set(w)


@contextlib.contextmanager
def working_precision(w: int):
    """Temporarily change the precision used when inverting exact series."""
    if not isinstance(w, int) or w < 1:
        raise InvalidInput(f"working precision must be a positive integer, got {w!r}")
    token = _working_precision.set(w)
    try:
        yield w
    finally:
        _working_precision.reset(token)


def require_precision_for(max_valuation: int) -> None:
    """Fail loudly unless W >= 4 * max_valuation."""
    w = get_working_precision()
    if 4 * max_valuation > w:
        raise InsufficientPrecision(
            f"valuations up to {max_valuation} need working precision >= {4 * max_valuation}, have {w}"
        )


class LaurentSeries:
    __slots__ = ("field", "lead", "_c", "prec")

    def __init__(self, field: FieldSpec, coeffs: Iterable = (), lead: int = 0, prec: int | None = None):
        codes = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.field is not field:
                    raise FieldMismatch(f"coefficient from F_{c.field} in series over F_{field}")
                codes.append(c.code)
            else:
                codes.append(field.from_int(c))
        self._init(field, codes, lead, prec)

    @classmethod
    def _raw(cls, field, codes, lead, prec) -> LaurentSeries:
        obj = object.__new__(cls)
        obj._init(field, codes, lead, prec)
        return obj

    def _init(self, field, codes, lead, prec):
        codes = list(codes)
        if prec is not None:
            keep = prec - lead
            if keep <= 0:
                codes, lead = [], prec
            else:
                del codes[keep:]
                codes.extend([0] * (keep - len(codes)))
        i = 0
        while i < len(codes) and codes[i] == 0:
            i += 1
        if i:
            del codes[:i]
            lead += i
        if prec is None:
            while codes and codes[-1] == 0:
                codes.pop()
            if not codes:
                lead = 0
        elif not codes:
            lead = prec
        self.field = field
        self.lead = lead
        self._c = tuple(codes)
        self.prec = prec

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec) -> LaurentSeries:
        return cls._raw(field, (), 0, None)

    @classmethod
    def one(cls, field: FieldSpec) -> LaurentSeries:
        return cls._raw(field, (1,), 0, None)

    @classmethod
    def monomial(cls, field: FieldSpec, coeff, k: int) -> LaurentSeries:
        return cls(field, [coeff], k)

    @classmethod
    def t_power(cls, field: FieldSpec, k: int) -> LaurentSeries:
        return cls._raw(field, (1,), k, None)

    @classmethod
    def big_o(cls, field: FieldSpec, m: int) -> LaurentSeries:
        return cls._raw(field, (), m, m)

    @classmethod
    def from_dict(cls, field: FieldSpec, terms: dict, prec: int | None = None) -> LaurentSeries:
        """``{exponent: coefficient}``; int coefficients are prime-field residues."""
        return cls.from_codes(
            field,
            {k: (c.code if isinstance(c, FieldElement) else field.from_int(c)) for k, c in terms.items()},
            prec,
        )

    @classmethod
    def from_codes(cls, field: FieldSpec, terms: dict[int, int], prec: int | None = None) -> LaurentSeries:
        if not terms:
            return cls._raw(field, (), prec if prec is not None else 0, prec)
        lo, hi = min(terms), max(terms)
        codes = [0] * (hi - lo + 1)
        for k, c in terms.items():
            codes[k - lo] = c
        return cls._raw(field, codes, lo, prec)

    @classmethod
    def parse(cls, text: str, field: FieldSpec) -> LaurentSeries:
        return _parse(text, field)

    # -- inspection -------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.prec is None

    @property
    def is_zero(self) -> bool:
        """True only for the exact zero."""
        return self.prec is None and not self._c

    @property
    def is_unknown(self) -> bool:
        """True for O(t^m): no known nonzero coefficient."""
        return self.prec is not None and not self._c

    @property
    def codes(self) -> tuple[int, ...]:
        return self._c

    def valuation(self, allow_zero: bool = False):
        if self._c:
            return self.lead
        if self.prec is None:
            if allow_zero:
                return math.inf
            raise ValuationOfZero("valuation of the exact zero")
        raise InsufficientPrecision(f"valuation of O(t^{self.prec}) is unknown")

    def lower_bound(self):
        """A k with self in t^k o (the valuation when it is known)."""
        if self._c:
            return self.lead
        return math.inf if self.prec is None else self.prec

    def coefficient(self, k: int) -> FieldElement:
        if self.prec is not None and k >= self.prec:
            raise InsufficientPrecision(f"coefficient of t^{k} beyond precision O(t^{self.prec})")
        i = k - self.lead
        code = self._c[i] if 0 <= i < len(self._c) else 0
        return FieldElement(self.field, code)

    def terms(self) -> dict[int, FieldElement]:
        return {self.lead + i: FieldElement(self.field, c) for i, c in enumerate(self._c) if c}

    def is_monomial(self) -> bool:
        return self.prec is None and len(self._c) == 1

    def is_integral(self) -> bool:
        if self._c:
            return self.lead >= 0
        if self.prec is None:
            return True
        raise InsufficientPrecision(f"integrality of O(t^{self.prec}) is not decided")

    def is_surely_integral(self) -> bool:
        """Integrality read off the lower bound; O(t^m) with m >= 0 counts as integral."""
        return self.lower_bound() >= 0

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> LaurentSeries:
        if isinstance(other, LaurentSeries):
            if other.field is not self.field:
                raise FieldMismatch(f"series over F_{self.field} and F_{other.field}")
            return other
        if isinstance(other, (int, FieldElement)):
            return LaurentSeries(self.field, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other)

    __radd__ = __add__

    def _add(self, other: LaurentSeries) -> LaurentSeries:
        field = self.field
        pa, pb = self.prec, other.prec
        prec = pa if pb is None else (pb if pa is None else min(pa, pb))
        a, b = self._c, other._c
        if not a and not b:
            return LaurentSeries._raw(field, (), 0 if prec is None else prec, prec)
        if not b:
            return LaurentSeries._raw(field, a, self.lead, prec) if prec != pa else self
        if not a:
            return LaurentSeries._raw(field, b, other.lead, prec) if prec != pb else other
        lo = min(self.lead, other.lead)
        hi = max(self.lead + len(a), other.lead + len(b))
        if prec is not None:
            hi = min(hi, prec)
            if hi <= lo:
                return LaurentSeries._raw(field, (), prec, prec)
        out = [0] * (hi - lo)
        off = self.lead - lo
        for i, c in enumerate(a):
            if i + off >= len(out):
                break
            out[i + off] = c
        off = other.lead - lo
        if field.d == 1:
            p = field.p
            for i, c in enumerate(b):
                j = i + off
                if j >= len(out):
                    break
                out[j] = (out[j] + c) % p
        else:
            add = field.add
            for i, c in enumerate(b):
                j = i + off
                if j >= len(out):
                    break
                out[j] = add(out[j], c)
        return LaurentSeries._raw(field, out, lo, prec)

    def __neg__(self):
        neg = self.field.neg
        return LaurentSeries._raw(self.field, [neg(c) for c in self._c], self.lead, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._add(-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._mul(other)

    __rmul__ = __mul__

    def _mul(self, other: LaurentSeries) -> LaurentSeries:
        field = self.field
        if self.is_zero or other.is_zero:
            return LaurentSeries._raw(field, (), 0, None)
        la, lb = self.lower_bound(), other.lower_bound()
        cands = []
        if self.prec is not None:
            cands.append(self.prec + lb)
        if other.prec is not None:
            cands.append(other.prec + la)
        prec = min(cands) if cands else None
        a, b = self._c, other._c
        if not a or not b:
            return LaurentSeries._raw(field, (), prec, prec)
        lead = self.lead + other.lead
        n = len(a) + len(b) - 1
        if prec is not None:
            n = min(n, prec - lead)
        if len(a) == 1 or len(b) == 1:
            (s, seq) = (a[0], b) if len(a) == 1 else (b[0], a)
            if field.d == 1:
                p = field.p
                out = [s * c % p for c in seq[:n]]
            else:
                mul = field.mul
                out = [mul(s, c) for c in seq[:n]]
            return LaurentSeries._raw(field, out, lead, prec)
        if field.d == 1:
            p = field.p
            out = [0] * n
            for i, x in enumerate(a):
                if i >= n:
                    break
                if x:
                    for j in range(min(len(b), n - i)):
                        out[i + j] += x * b[j]
            out = [c % p for c in out]
        else:
            mul, add = field.mul, field.add
            out = [0] * n
            for i, x in enumerate(a):
                if i >= n:
                    break
                if x:
                    for j in range(min(len(b), n - i)):
                        y = b[j]
                        if y:
                            out[i + j] = add(out[i + j], mul(x, y))
        return LaurentSeries._raw(field, out, lead, prec)

    def inverse(self) -> LaurentSeries:
        """Multiplicative inverse.

        Exact monomials invert exactly.  Other exact inputs are inverted to
        relative precision W (the working precision); an inexact input with
        ``r`` known coefficients yields ``r`` known coefficients.
        """
        field = self.field
        if self.is_zero:
            raise DivisionByZero("inverse of the exact zero")
        if not self._c:
            raise InsufficientPrecision(f"cannot invert O(t^{self.prec})")
        v = self.lead
        c = self._c
        if self.prec is None and len(c) == 1:
            return LaurentSeries._raw(field, (field.inv(c[0]),), -v, None)
        rel = get_working_precision() if self.prec is None else len(c)
        b0 = field.inv(c[0])
        out = [b0]
        if field.d == 1:
            p = field.p
            nb0 = (-b0) % p
            for k in range(1, rel):
                acc = 0
                for i in range(1, min(k, len(c) - 1) + 1):
                    acc += c[i] * out[k - i]
                out.append(nb0 * (acc % p) % p)
        else:
            mul, add = field.mul, field.add
            nb0 = field.neg(b0)
            for k in range(1, rel):
                acc = 0
                for i in range(1, min(k, len(c) - 1) + 1):
                    if c[i]:
                        acc = add(acc, mul(c[i], out[k - i]))
                out.append(mul(nb0, acc))
        return LaurentSeries._raw(field, out, -v, -v + rel)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._mul(other.inverse())

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._mul(self.inverse())

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = LaurentSeries.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result._mul(base)
            base = base._mul(base)
            e >>= 1
        return result

    def exact_quotient(self, other: LaurentSeries) -> LaurentSeries:
        """self / other in the Laurent polynomial ring; both must be exact.

        Raises ValueError when ``other`` does not divide ``self`` there.
        """
        if self.prec is not None or other.prec is not None:
            raise ValueError("exact_quotient needs exact operands")
        if other.is_zero:
            raise DivisionByZero("division by the exact zero")
        if self.is_zero:
            return self
        field = self.field
        b = other._c
        if len(b) == 1:
            inv = field.inv(b[0])
            return LaurentSeries._raw(field, [field.mul(inv, c) for c in self._c], self.lead - other.lead, None)
        # long division on the reversed (highest first) coefficient lists
        num = list(self._c)
        db = len(b) - 1
        if len(num) - 1 < db:
            raise ValueError("not divisible")
        inv_top = field.inv(b[-1])
        q = [0] * (len(num) - db)
        for k in range(len(num) - 1, db - 1, -1):
            coef = num[k]
            if coef:
                f = field.mul(coef, inv_top)
                q[k - db] = f
                for i, y in enumerate(b):
                    num[k - db + i] = field.sub(num[k - db + i], field.mul(f, y))
        if any(num[:db]):
            raise ValueError("not divisible")
        return LaurentSeries._raw(field, q, self.lead - other.lead, None)

    # -- precision management ----------------------------------------------

    def truncate(self, m: int) -> LaurentSeries:
        """The same value known only modulo t^m."""
        if self.prec is not None and self.prec <= m:
            return self
        return LaurentSeries._raw(self.field, self._c, self.lead, m)

    def polynomial_part(self, below: int) -> LaurentSeries:
        """The exact Laurent polynomial of terms with exponent < ``below``."""
        if self.prec is not None and self.prec < below:
            raise InsufficientPrecision(f"need coefficients below t^{below}, known only to O(t^{self.prec})")
        keep = max(0, below - self.lead)
        return LaurentSeries._raw(self.field, self._c[:keep], self.lead, None)

    def agrees(self, other: LaurentSeries) -> bool:
        """Equal at every exponent known on both sides."""
        diff = self - other
        return not diff._c

    def map_field(self, target: FieldSpec) -> LaurentSeries:
        if target is self.field:
            return self
        table = embedding_table(self.field, target)
        return LaurentSeries._raw(target, [table[c] for c in self._c], self.lead, self.prec)

    # -- protocol ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            if isinstance(other, (int, FieldElement)):
                other = self._coerce(other)
            else:
                return NotImplemented
        return (
            self.field is other.field
            and self.prec == other.prec
            and self.lead == other.lead
            and self._c == other._c
        )

    def __hash__(self):
        return hash((self.field.p, self.field.d, self.lead, self._c, self.prec))

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        return f"LaurentSeries({str(self)!r}, F_{self.field})"

    def __str__(self):
        return format_series(self)


def format_series(a: LaurentSeries) -> str:
    field = a.field
    parts = []
    for i, c in enumerate(a.codes):
        if not c:
            continue
        k = a.lead + i
        cs = field.format_code(c)
        if "+" in cs:
            cs = f"({cs})"
        if k == 0:
            parts.append(cs)
            continue
        tp = "t" if k == 1 else f"t^{k}"
        parts.append(tp if c == 1 else f"{cs}*{tp}")
    if a.prec is not None:
        parts.append(f"O(t^{a.prec})")
    return " + ".join(parts) if parts else "0"


_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|(u)|(O\()|([-+*^()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SeriesSyntaxError(f"unexpected character at {pos} in {text!r}")
        if m.group(1):
            out.append(("int", int(m.group(1))))
        elif m.group(2):
            out.append(("t", None))
        elif m.group(3):
            out.append(("u", None))
        elif m.group(4):
            out.append(("O", None))
        else:
            out.append((m.group(5), None))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, field: FieldSpec):
        self.text = text
        self.field = field
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind):
        if self.peek() != kind:
            raise SeriesSyntaxError(f"expected {kind!r} in {self.text!r}")
        tok = self.toks[self.i]
        self.i += 1
        return tok[1]

    def sign(self) -> int:
        kind = self.peek()
        if kind in ("+", "-"):
            self.i += 1
            return -1 if kind == "-" else 1
        return 1

    def signed_int(self) -> int:
        sign = self.sign()
        return sign * self.take("int")

    def exponent(self) -> int:
        if self.peek() == "^":
            self.take("^")
            return self.signed_int()
        return 1

    def upoly(self) -> int:
        """u-polynomial inside parentheses; returns a field code."""
        field = self.field
        acc = 0
        sign = 1
        first = True
        while True:
            if self.peek() in ("+", "-"):
                sign = -1 if self.peek() == "-" else 1
                self.i += 1
            elif not first:
                break
            acc = field.add(acc, self.ucoef(sign))
            first = False
            sign = 1
            if self.peek() not in ("+", "-"):
                break
        return acc

    def ucoef(self, sign: int) -> int:
        field = self.field
        if self.peek() == "int":
            c = self.take("int")
            if self.peek() == "*" and self.i + 1 < len(self.toks) and self.toks[self.i + 1][0] == "u":
                self.take("*")
                return field.mul(field.from_int(sign * c), self.upower())
            return field.from_int(sign * c)
        if self.peek() == "u":
            code = self.upower()
            return field.neg(code) if sign < 0 else code
        raise SeriesSyntaxError(f"bad coefficient in {self.text!r}")

    def upower(self) -> int:
        self.take("u")
        if self.field.d == 1:
            raise SeriesSyntaxError(f"'u' in a series over the prime field F_{self.field}: {self.text!r}")
        k = self.exponent()
        return self.field.pow(self.field.p, k)

    def term(self, sign: int, terms: dict) -> None:
        field = self.field
        kind = self.peek()
        if kind == "t":
            coef = 1
        elif kind == "(":
            self.take("(")
            coef = self.upoly()
            self.take(")")
        elif kind in ("int", "u"):
            coef = self.ucoef(1)
        else:
            raise SeriesSyntaxError(f"expected a term in {self.text!r}")
        k = 0
        if kind == "t":
            self.take("t")
            k = self.exponent()
        elif self.peek() == "*":
            self.take("*")
            self.take("t")
            k = self.exponent()
        elif self.peek() not in (None, "+", "-"):
            raise SeriesSyntaxError(f"missing '*' or operator in {self.text!r}")
        if sign < 0:
            coef = field.neg(coef)
        terms[k] = field.add(terms.get(k, 0), coef)

    def parse(self) -> LaurentSeries:
        terms: dict[int, int] = {}
        prec = None
        sign = self.sign()
        while True:
            if self.peek() == "O":
                self.take("O")
                self.take("t")
                if self.peek() != "^":
                    raise SeriesSyntaxError(f"O-term needs an exponent in {self.text!r}")
                self.take("^")
                prec = self.signed_int()
                self.take(")")
                if self.peek() is not None:
                    raise SeriesSyntaxError(f"O-term must come last in {self.text!r}")
                break
            self.term(sign, terms)
            if self.peek() is None:
                break
            if self.peek() not in ("+", "-"):
                raise SeriesSyntaxError(f"expected '+' or '-' in {self.text!r}")
            sign = self.sign()
        if prec is not None and terms and max(terms) >= prec:
            raise SeriesSyntaxError(f"term at or beyond the stated precision in {self.text!r}")
        return LaurentSeries.from_codes(self.field, {k: c for k, c in terms.items() if c}, prec)


def _parse(text: str, field: FieldSpec) -> LaurentSeries:
    if not text.strip():
        raise SeriesSyntaxError("empty series literal")
    return _Parser(text, field).parse()


def parse_series(text: str, field: FieldSpec) -> LaurentSeries:
    return _parse(text, field)


def parse_series_list(text: str, field: FieldSpec) -> list[LaurentSeries]:
    """Comma-separated series literals, e.g. ``"1, 1+t^2"``."""
    return [_parse(part, field) for part in text.split(",")]
