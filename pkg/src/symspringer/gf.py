"""Finite fields F_p and F_{p^d} of odd characteristic.

Elements are encoded as integers ``code = sum(c_i * p**i)`` where ``c_i`` are
the coefficients of the polynomial representative in the generator ``u``.
The hot paths (series and matrix arithmetic) work on these codes directly
through the ``FieldSpec`` methods; :class:`FieldElement` is the public,
operator-friendly wrapper.
"""

from __future__ import annotations

import functools
import itertools
import re
from typing import Iterable, Sequence

from .errors import (
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    InvalidInput,
    NoEmbedding,
    NotPrime,
    TooLarge,
)

MAX_FIELD_SIZE = 1 << 20
_ADD_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p as coefficient lists, lowest degree first ----------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        f = a[-1] * inv_lead % p
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_powmod(base: list[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(base, m, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Irreducibility of a polynomial over F_p (coefficients lowest first).

    Uses gcd(x^(p^i) - x, f) = 1 for all i <= deg(f) / 2.
    """
    f = _trim([c % p for c in poly])
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    xp = [0, 1]
    for _ in range(d // 2):
        xp = _poly_powmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(f, _trim(diff), p)
        if len(g) > 1:
            return False
    return True


def lex_least_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Monic irreducible of degree d, least in lex order of (c_{d-1}, ..., c_0)."""
    for high_first in itertools.product(range(p), repeat=d):
        poly = list(reversed(high_first)) + [1]
        if poly[0] == 0:
            continue
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError(f"no irreducible polynomial of degree {d} over F_{p}")


class FieldSpec:
    """The finite field F_{p^d} = F_p[u]/(modulus).

    Use :func:`make_field` rather than the constructor; specs are cached so
    that equal fields are the same object.
    """

    __slots__ = (
        "p", "d", "q", "modulus", "_exp", "_log", "_add", "_neg", "_inv",
        "_elements", "__weakref__",
    )

    def __init__(self, p: int, d: int, modulus: tuple[int, ...] | None):
        self.p = p
        self.d = d
        self.q = p ** d
        self.modulus = modulus
        self._exp = None
        self._log = None
        self._add = None
        self._neg = None
        self._inv = None
        self._elements = None

    def __repr__(self):
        return f"FieldSpec({self})"

    def __str__(self):
        return str(self.p) if self.d == 1 else f"{self.p}^{self.d}"

    def __reduce__(self):
        return (make_field, (self.p, self.d))

    # -- code level arithmetic ---------------------------------------------

    def digits(self, code: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.d):
            code, r = divmod(code, p)
            out.append(r)
        return tuple(out)

    def from_digits(self, digits: Iterable[int]) -> int:
        code = 0
        for c in reversed(list(digits)):
            code = code * self.p + (c % self.p)
        return code

    def from_int(self, n: int) -> int:
        return n % self.p

    def _build_tables(self):
        p, q = self.p, self.q
        if self.d > 1 and q <= _ADD_TABLE_LIMIT:
            digs = [self.digits(c) for c in range(q)]
            self._add = [
                [self.from_digits((x + y) for x, y in zip(digs[a], digs[b])) for b in range(q)]
                for a in range(q)
            ]
        self._neg = [self.from_digits(-c for c in self.digits(a)) for a in range(q)]
        # exp/log tables from the least primitive element
        factors = _prime_factors(q - 1)
        mod = list(self.modulus) if self.modulus else [0, 1]
        for g in range(2 if q > 2 else 1, q):
            gpoly = list(self.digits(g))
            ok = all(
                _poly_powmod(gpoly, (q - 1) // ell, mod, p) != [1] for ell in factors
            ) if self.d > 1 else all(pow(g, (q - 1) // ell, p) != 1 for ell in factors)
            if ok:
                break
        exp = [0] * (q - 1)
        log = [0] * q
        cur = [1]
        for k in range(q - 1):
            code = self.from_digits(cur)
            exp[k] = code
            log[code] = k
            cur = _poly_mod(_poly_mul(cur, gpoly, p), mod, p) if self.d > 1 else [cur[0] * g % p]
        self._exp = exp
        self._log = log
        self._inv = [0] + [exp[(-log[a]) % (q - 1)] for a in range(1, q)]

    def add(self, a: int, b: int) -> int:
        if self.d == 1:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a][b]
        if self._neg is None:
            self._build_tables()
            if self._add is not None:
                return self._add[a][b]
        p = self.p
        out = 0
        scale = 1
        for _ in range(self.d):
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * scale
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.d == 1:
            return (-a) % self.p
        if self._neg is None:
            self._build_tables()
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.d == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._log is None:
            self._build_tables()
        log = self._log
        return self._exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of zero in F_{self}")
        if self.d == 1:
            return pow(a, self.p - 2, self.p)
        if self._inv is None:
            self._build_tables()
        return self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 0 if e else 1
        if self.d == 1:
            return pow(a, e, self.p)
        if self._log is None:
            self._build_tables()
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    # -- element level -----------------------------------------------------

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldMismatch(f"element of F_{value.field} given to F_{self}")
            return value
        if isinstance(value, int):
            return FieldElement(self, self.from_int(value))
        if isinstance(value, str):
            return self.parse_element(value)
        if isinstance(value, (tuple, list)):
            return FieldElement(self, self.from_digits(value))
        raise TypeError(f"cannot build a field element from {value!r}")

    def element(self, code: int) -> FieldElement:
        return FieldElement(self, code)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    @property
    def gen(self) -> FieldElement:
        """The class of u in F_p[u]/(modulus)."""
        if self.d == 1:
            raise InvalidInput("the prime field has no generator u")
        return FieldElement(self, self.p)

    def elements(self) -> list[FieldElement]:
        """All q elements in code order (0, 1, ..., p-1, u, u+1, ...)."""
        if self._elements is None:
            self._elements = [FieldElement(self, c) for c in range(self.q)]
        return list(self._elements)

    def format_code(self, code: int) -> str:
        if self.d == 1:
            return str(code)
        terms = []
        for k, c in reversed(list(enumerate(self.digits(code)))):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
                continue
            mono = "u" if k == 1 else f"u^{k}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    def parse_element(self, text: str) -> FieldElement:
        s = re.sub(r"\s+", "", text)
        if not s:
            raise InvalidInput("empty field element literal")
        if s[0] not in "+-":
            s = "+" + s
        digits = [0] * self.d
        pos = 0
        term = re.compile(r"([+-])(?:(\d+)(?:\*(u)(?:\^(\d+))?)?|(u)(?:\^(\d+))?)")
        while pos < len(s):
            m = term.match(s, pos)
            if not m or m.end() == pos:
                raise InvalidInput(f"bad field element literal {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            if m.group(2) is not None:
                coef = int(m.group(2))
                if m.group(3):
                    k = int(m.group(4)) if m.group(4) else 1
                else:
                    k = 0
            else:
                coef = 1
                k = int(m.group(6)) if m.group(6) else 1
            if k and self.d == 1:
                raise InvalidInput(f"'u' used in prime field literal {text!r}")
            if k >= self.d:
                # reduce u^k through the modulus
                red = _poly_mod([0] * k + [1], self.modulus, self.p)
                for i, c in enumerate(red):
                    digits[i] = (digits[i] + sign * coef * c) % self.p
            else:
                digits[k] = (digits[k] + sign * coef) % self.p
            pos = m.end()
        return FieldElement(self, self.from_digits(digits))


class FieldElement:
    """An element of a :class:`FieldSpec`. Immutable."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.digits(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldMismatch(f"F_{self.field} vs F_{other.field}")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.code, self.field.inv(b)))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(b, self.field.inv(self.code)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.code))

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.d, self.code))

    def __str__(self):
        return self.field.format_code(self.code)

    def __repr__(self):
        return f"FieldElement(F_{self.field}, {self})"


def make_field(p: int, d: int = 1) -> FieldSpec:
    """F_{p^d} with the lex-least monic irreducible modulus.

    One shared instance per (p, d), so fields can be compared by identity.

    >>> make_field(3, 2).modulus
    (1, 0, 1)
    """
    return _make_field(p, d)


@functools.lru_cache(maxsize=None)
def _make_field(p: int, d: int) -> FieldSpec:
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if d < 1:
        raise InvalidInput(f"extension degree must be >= 1, got {d}")
    if p ** d > MAX_FIELD_SIZE:
        raise TooLarge(f"F_{p}^{d} exceeds the field size cap {MAX_FIELD_SIZE}")
    modulus = lex_least_irreducible(p, d) if d > 1 else None
    return FieldSpec(p, d, modulus)


def parse_field(text: str) -> FieldSpec:
    """Parse ``"p"`` or ``"p^d"``."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:\^\s*(\d+)\s*)?", text)
    if not m:
        raise InvalidInput(f"bad field literal {text!r}")
    return make_field(int(m.group(1)), int(m.group(2) or 1))


def frobenius(a: FieldElement) -> FieldElement:
    """a -> a^p; the nontrivial conjugation on a quadratic extension."""
    return FieldElement(a.field, a.field.pow(a.code, a.field.p))


@functools.lru_cache(maxsize=None)
def embedding_table(source: FieldSpec, target: FieldSpec) -> tuple[int, ...]:
    """Codes of the images of all source elements under the fixed embedding.

    The generator goes to the smallest-code root of the source modulus in the
    target field.
    """
    if source.p != target.p or target.d % source.d:
        raise NoEmbedding(f"F_{source} does not embed in F_{target}")
    if source is target:
        return tuple(range(source.q))
    if source.d == 1:
        return tuple(range(source.p))
    mod = source.modulus
    root = None
    for c in range(target.q):
        acc = 0
        for coef in reversed(mod):
            acc = target.add(target.mul(acc, c), coef)
        if acc == 0:
            root = c
            break
    assert root is not None
    powers = [1]
    for _ in range(source.d - 1):
        powers.append(target.mul(powers[-1], root))
    table = []
    for code in range(source.q):
        acc = 0
        for coef, pw in zip(source.digits(code), powers):
            if coef:
                acc = target.add(acc, target.mul(coef, pw))
        table.append(acc)
    return tuple(table)


def embed(a: FieldElement, target: FieldSpec) -> FieldElement:
    return FieldElement(target, embedding_table(a.field, target)[a.code])


# -- linear algebra over F_q on codes ----------------------------------------

def row_reduce(field: FieldSpec, rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (rref rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(field: FieldSpec, rows: list[list[int]]) -> int:
    return len(row_reduce(field, rows)[1])


def solve_affine(
    field: FieldSpec, rows: list[list[int]], rhs: list[int], ncols: int
) -> tuple[list[int], list[list[int]]] | None:
    """Solve ``rows @ z = rhs`` over the field.

    Returns ``(particular, kernel_basis)`` or None when inconsistent.
    """
    if not rows:
        basis = [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
        return [0] * ncols, basis
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = row_reduce(field, aug)
    if ncols in pivots:
        return None
    particular = [0] * ncols
    for row, c in zip(red, pivots):
        particular[c] = row[ncols]
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for row, c in zip(red, pivots):
            vec[c] = field.neg(row[f])
        kernel.append(vec)
    return particular, kernel
