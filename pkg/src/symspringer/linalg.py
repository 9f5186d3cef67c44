"""Matrices over F = k((t)) and the valuation ring o = k[[t]].

Two determinant routes are used.  Matrices with exact (Laurent polynomial)
entries go through exact elimination, preferring monomial pivots so that
every division is exact; anything else goes through valuation-greedy
elimination on truncated series, where the precision bookkeeping of
:class:`~symspringer.series.LaurentSeries` keeps every reported valuation
honest.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InsufficientPrecision, ShapeMismatch, Singular, FieldMismatch
from .gf import FieldSpec
from .series import LaurentSeries, parse_series


class MatrixF:
    """An immutable rows x cols matrix of LaurentSeries over one field."""

    __slots__ = ("rows", "cols", "field", "_e")

    def __init__(self, entries: Sequence[Sequence[LaurentSeries]], field: FieldSpec | None = None):
        rows = [tuple(r) for r in entries]
        if not rows or not rows[0]:
            raise ShapeMismatch("a matrix needs at least one row and one column")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ShapeMismatch("ragged matrix rows")
        if field is None:
            field = rows[0][0].field
        for r in rows:
            for e in r:
                if e.field is not field:
                    raise FieldMismatch("matrix entries over different fields")
        self.rows = len(rows)
        self.cols = ncols
        self.field = field
        self._e = tuple(rows)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> MatrixF:
        one, zero = LaurentSeries.one(field), LaurentSeries.zero(field)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec) -> MatrixF:
        zero = LaurentSeries.zero(field)
        return cls([[zero] * cols for _ in range(rows)], field)

    @classmethod
    def diag(cls, entries: Sequence[LaurentSeries], field: FieldSpec | None = None) -> MatrixF:
        entries = list(entries)
        field = field or entries[0].field
        zero = LaurentSeries.zero(field)
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)], field)

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]], field: FieldSpec) -> MatrixF:
        return cls([[parse_series(s, field) for s in r] for r in rows], field)

    @classmethod
    def from_json(cls, text: str, field: FieldSpec) -> MatrixF:
        return cls.from_strings(json.loads(text), field)

    def to_json(self) -> str:
        return json.dumps([[str(e) for e in r] for r in self._e])

    def __getitem__(self, ij) -> LaurentSeries:
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple[LaurentSeries, ...]:
        return self._e[i]

    def tolist(self) -> list[list[LaurentSeries]]:
        return [list(r) for r in self._e]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_exact(self) -> bool:
        return all(e.prec is None for r in self._e for e in r)

    def is_upper_triangular(self) -> bool:
        return all(self._e[i][j].is_zero for i in range(self.rows) for j in range(min(i, self.cols)))

    def __matmul__(self, other: MatrixF) -> MatrixF:
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.field is not other.field:
            raise FieldMismatch("matrices over different fields")
        zero = LaurentSeries.zero(self.field)
        cols = list(zip(*other._e))
        out = []
        for r in self._e:
            row = []
            for c in cols:
                acc = zero
                for x, y in zip(r, c):
                    if x.is_zero or y.is_zero:
                        continue
                    acc = acc + x * y
                row.append(acc)
            out.append(row)
        return MatrixF(out, self.field)

    def __add__(self, other: MatrixF) -> MatrixF:
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return MatrixF([[x + y for x, y in zip(r, s)] for r, s in zip(self._e, other._e)], self.field)

    def __sub__(self, other: MatrixF) -> MatrixF:
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return MatrixF([[x - y for x, y in zip(r, s)] for r, s in zip(self._e, other._e)], self.field)

    def __neg__(self) -> MatrixF:
        return MatrixF([[-x for x in r] for r in self._e], self.field)

    def scale(self, c: LaurentSeries) -> MatrixF:
        return MatrixF([[c * x for x in r] for r in self._e], self.field)

    def transpose(self) -> MatrixF:
        return MatrixF(list(zip(*self._e)), self.field)

    def map_field(self, target: FieldSpec) -> MatrixF:
        return MatrixF([[x.map_field(target) for x in r] for r in self._e], target)

    def agrees(self, other: MatrixF) -> bool:
        """Entrywise agreement at every exponent known on both sides."""
        return self.shape == other.shape and all(
            x.agrees(y) for r, s in zip(self._e, other._e) for x, y in zip(r, s)
        )

    def min_precision(self):
        """Smallest entry precision (inf when every entry is exact)."""
        return min((e.prec for r in self._e for e in r if e.prec is not None), default=math.inf)

    def __eq__(self, other):
        if not isinstance(other, MatrixF):
            return NotImplemented
        return self.field is other.field and self._e == other._e

    def __hash__(self):
        return hash(self._e)

    def __repr__(self):
        return f"MatrixF({[[str(e) for e in r] for r in self._e]})"


# -- determinants -------------------------------------------------------------

def _exact_det(rows: list[list[LaurentSeries]], field: FieldSpec) -> LaurentSeries:
    """Exact determinant of a matrix of Laurent polynomials.

    Monomial pivots divide exactly; when none is available a fraction-free
    step is taken and its multiplier divided out exactly at the end.
    """
    m = [list(r) for r in rows]
    n = len(m)
    det = LaurentSeries.one(field)
    denom = LaurentSeries.one(field)
    negate = False
    for k in range(n):
        best = None
        best_key = None
        for i in range(k, n):
            for j in range(k, n):
                e = m[i][j]
                if e.is_zero:
                    continue
                key = (0 if e.is_monomial() else 1, len(e.codes), e.lead, i, j)
                if best_key is None or key < best_key:
                    best, best_key = (i, j), key
        if best is None:
            return LaurentSeries.zero(field)
        i, j = best
        if i != k:
            m[i], m[k] = m[k], m[i]
            negate = not negate
        if j != k:
            for r in m:
                r[j], r[k] = r[k], r[j]
            negate = not negate
        p = m[k][k]
        if p.is_monomial():
            pinv = p.inverse()
            for i in range(k + 1, n):
                f = m[i][k]
                if f.is_zero:
                    continue
                f = f * pinv
                row_k = m[k]
                m[i] = [x if y.is_zero else x - f * y for x, y in zip(m[i], row_k)]
        else:
            for i in range(k + 1, n):
                f = m[i][k]
                if f.is_zero:
                    continue
                row_k = m[k]
                m[i] = [p * x - (f * y if not y.is_zero else y) for x, y in zip(m[i], row_k)]
                denom = denom * p
        det = det * p
    if negate:
        det = -det
    if denom == LaurentSeries.one(field):
        return det
    return det.exact_quotient(denom)


def _series_det(rows: list[list[LaurentSeries]], field: FieldSpec) -> LaurentSeries:
    """Valuation-greedy elimination with full pivoting on truncated series."""
    m = [list(r) for r in rows]
    n = len(m)
    det = LaurentSeries.one(field)
    negate = False
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                e = m[i][j]
                if e.codes and (best is None or e.lead < m[best[0]][best[1]].lead):
                    best = (i, j)
        if best is None:
            if all(m[i][j].is_zero for i in range(k, n) for j in range(k, n)):
                return LaurentSeries.zero(field)
            bound = sum(min(m[i][j].lower_bound() for j in range(k, n)) for i in range(k, n))
            base = det.lower_bound()
            return LaurentSeries.big_o(field, int(base + bound)) if math.isfinite(bound) else LaurentSeries.zero(field)
        i, j = best
        if i != k:
            m[i], m[k] = m[k], m[i]
            negate = not negate
        if j != k:
            for r in m:
                r[j], r[k] = r[k], r[j]
            negate = not negate
        p = m[k][k]
        pinv = p.inverse()
        for i in range(k + 1, n):
            f = m[i][k]
            if f.is_zero:
                continue
            f = f * pinv
            m[i] = [x if y.is_zero else x - f * y for x, y in zip(m[i], m[k])]
        det = det * p
    return -det if negate else det


def det(a: MatrixF) -> LaurentSeries:
    if not a.is_square:
        raise ShapeMismatch(f"determinant of a non-square {a.shape} matrix")
    rows = a.tolist()
    if a.is_exact:
        return _exact_det(rows, a.field)
    return _series_det(rows, a.field)


def val_det(a: MatrixF) -> int:
    """v(det a), exact; Singular for det = 0, InsufficientPrecision if undecided."""
    d = det(a)
    if d.is_zero:
        raise Singular("matrix is singular")
    return d.valuation()


# -- inverses -----------------------------------------------------------------

def _triangular_inverse(a: MatrixF) -> MatrixF:
    """Back substitution for an upper triangular matrix."""
    n = a.rows
    field = a.field
    zero = LaurentSeries.zero(field)
    inv_diag = [a[i, i].inverse() for i in range(n)]
    out = [[zero] * n for _ in range(n)]
    for j in range(n):
        out[j][j] = inv_diag[j]
        for i in range(j - 1, -1, -1):
            acc = zero
            for k in range(i + 1, j + 1):
                x = a[i, k]
                if x.is_zero or out[k][j].is_zero:
                    continue
                acc = acc + x * out[k][j]
            out[i][j] = zero if acc.is_zero else -(acc * inv_diag[i])
    return MatrixF(out, field)


def _adjugate(rows: list[list[LaurentSeries]], field: FieldSpec) -> list[list[LaurentSeries]]:
    n = len(rows)
    if n == 1:
        return [[LaurentSeries.one(field)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            c = _exact_det(minor, field)
            adj[j][i] = -c if (i + j) % 2 else c
    return adj


def _gauss_jordan_inverse(a: MatrixF) -> MatrixF:
    n = a.rows
    field = a.field
    one, zero = LaurentSeries.one(field), LaurentSeries.zero(field)
    m = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(a.tolist())]
    for k in range(n):
        best = None
        for i in range(k, n):
            e = m[i][k]
            if e.codes and (best is None or e.lead < m[best][k].lead):
                best = i
        if best is None:
            if all(m[i][k].is_zero for i in range(k, n)):
                raise Singular("matrix is singular")
            raise InsufficientPrecision("no pivot with determinable valuation")
        m[k], m[best] = m[best], m[k]
        pinv = m[k][k].inverse()
        m[k] = [x * pinv for x in m[k]]
        for i in range(n):
            if i == k or m[i][k].is_zero:
                continue
            f = m[i][k]
            m[i] = [x if y.is_zero else x - f * y for x, y in zip(m[i], m[k])]
    return MatrixF([r[n:] for r in m], field)


def inverse(a: MatrixF) -> MatrixF:
    """Matrix inverse; exact whenever the input is exact with monomial det."""
    if not a.is_square:
        raise ShapeMismatch(f"inverse of a non-square {a.shape} matrix")
    if a.is_upper_triangular() and all(a[i, i].is_monomial() for i in range(a.rows)):
        return _triangular_inverse(a)
    if a.is_exact:
        rows = a.tolist()
        d = _exact_det(rows, a.field)
        if d.is_zero:
            raise Singular("matrix is singular")
        dinv = d.inverse()
        return MatrixF([[dinv * x for x in r] for r in _adjugate(rows, a.field)], a.field)
    return _gauss_jordan_inverse(a)


# -- integrality --------------------------------------------------------------

def is_integral_matrix(a: MatrixF) -> bool:
    return all(e.is_integral() for r in a._e for e in r)


def is_gl_o(a: MatrixF) -> bool:
    """Integral with unit determinant, i.e. a point of GL_n(o)."""
    if not a.is_square:
        raise ShapeMismatch(f"GL_n(o) test on a non-square {a.shape} matrix")
    if not is_integral_matrix(a):
        return False
    d = det(a)
    if d.is_zero:
        return False
    return d.valuation() == 0


# -- Smith normal form over k[[t]] --------------------------------------------

@dataclass(frozen=True)
class SmithForm:
    """``left @ A @ right == diag(t^e_1, ..., t^e_n)``, left/right in GL_n(o).

    The identity holds at every tracked coefficient: when det A carries a
    unit that is not a monomial, no Laurent polynomial transforms realise it
    exactly.  For exact input ``factors`` = (P, Q) gives the exact
    factorization A == P @ diag @ Q with P, Q polynomial in GL_n(o).
    """

    exponents: tuple[int, ...]
    left: MatrixF
    right: MatrixF
    factors: tuple[MatrixF, MatrixF] | None = None

    def diagonal(self) -> MatrixF:
        field = self.left.field
        return MatrixF.diag([LaurentSeries.t_power(field, e) for e in self.exponents], field)


def smith_normal_form(a: MatrixF) -> SmithForm:
    """Elementary divisors over the DVR by min-valuation pivot-and-clear."""
    if not a.is_square:
        raise ShapeMismatch("Smith form implemented for square matrices")
    n = a.rows
    field = a.field
    one, zero = LaurentSeries.one(field), LaurentSeries.zero(field)
    m = a.tolist()
    left = [[one if i == j else zero for j in range(n)] for i in range(n)]
    right = [[one if i == j else zero for j in range(n)] for i in range(n)]
    exps = []
    for k in range(n):
        best = None
        lowest_unknown = math.inf
        for i in range(k, n):
            for j in range(k, n):
                e = m[i][j]
                if e.codes:
                    if best is None or e.lead < m[best[0]][best[1]].lead:
                        best = (i, j)
                elif e.prec is not None:
                    lowest_unknown = min(lowest_unknown, e.prec)
        if best is None:
            if lowest_unknown < math.inf:
                raise InsufficientPrecision("remaining block has no determinable entry")
            raise Singular("matrix is singular")
        i, j = best
        e_val = m[i][j].lead
        if lowest_unknown < e_val:
            raise InsufficientPrecision("an undetermined entry may have smaller valuation than the pivot")
        m[i], m[k] = m[k], m[i]
        left[i], left[k] = left[k], left[i]
        for r in m:
            r[j], r[k] = r[k], r[j]
        for r in right:
            r[j], r[k] = r[k], r[j]
        p = m[k][k]
        unit_inv = LaurentSeries.t_power(field, e_val) * p.inverse()
        m[k] = [x * unit_inv for x in m[k]]
        left[k] = [x * unit_inv for x in left[k]]
        t_e_inv = LaurentSeries.t_power(field, -e_val)
        for i in range(k + 1, n):
            f = m[i][k]
            if f.is_zero:
                continue
            f = f * t_e_inv
            m[i] = [x - f * y for x, y in zip(m[i], m[k])]
            left[i] = [x - f * y for x, y in zip(left[i], left[k])]
            m[i][k] = zero
        for j in range(k + 1, n):
            f = m[k][j]
            if f.is_zero:
                continue
            f = f * t_e_inv
            for r in m:
                r[j] = r[j] - f * r[k]
            for r in right:
                r[j] = r[j] - f * r[k]
            m[k][j] = zero
        exps.append(e_val)
    factors = _polynomial_smith(a, tuple(exps)) if a.is_exact else None
    return SmithForm(tuple(exps), MatrixF(left, field), MatrixF(right, field), factors)


def _degree(s: LaurentSeries) -> int:
    return s.lead + len(s.codes) - 1


def _poly_divmod(a: LaurentSeries, b: LaurentSeries) -> tuple[LaurentSeries, LaurentSeries]:
    """Division with remainder in k[t] (both arguments polynomials)."""
    f = a.field
    top_inv = f.inv(b.codes[-1])
    q = LaurentSeries.zero(f)
    while not a.is_zero and _degree(a) >= _degree(b):
        m = LaurentSeries.from_codes(f, {_degree(a) - _degree(b): f.mul(a.codes[-1], top_inv)})
        q = q + m
        a = a - m * b
    return q, a


def _polynomial_smith(a: MatrixF, exponents: tuple[int, ...]) -> tuple[MatrixF, MatrixF]:
    """Exact A = P diag(t^e) Q by Euclidean diagonalization over k[t].

    After scaling by t^N the entries lie in k[t]; Euclid steps give
    t^N A = P0 diag(d) Q0 with P0, Q0 in GL_n(k[t]).  Each d_i is t^v times a
    polynomial unit of o, which is pushed into P.
    """
    n, f = a.rows, a.field
    zero, one = LaurentSeries.zero(f), LaurentSeries.one(f)
    shift = -min([e.lead for row in a.tolist() for e in row if not e.is_zero] + [0])
    tn = LaurentSeries.t_power(f, shift)
    m = [[e * tn for e in row] for row in a.tolist()]
    P = [[one if i == j else zero for j in range(n)] for i in range(n)]
    Q = [[one if i == j else zero for j in range(n)] for i in range(n)]
    # invariant: t^N A == P m Q
    for k in range(n):
        while True:
            nz = [(_degree(m[i][j]), i, j) for i in range(k, n) for j in range(k, n) if not m[i][j].is_zero]
            if not nz:
                raise Singular("matrix is singular")
            _, i, j = min(nz)
            m[i], m[k] = m[k], m[i]
            for r in P:
                r[i], r[k] = r[k], r[i]
            for r in m:
                r[j], r[k] = r[k], r[j]
            Q[j], Q[k] = Q[k], Q[j]
            piv = m[k][k]
            done = True
            for i in range(k + 1, n):
                if m[i][k].is_zero:
                    continue
                q, rem = _poly_divmod(m[i][k], piv)
                m[i] = [x - q * y for x, y in zip(m[i], m[k])]
                for r in P:
                    r[k] = r[k] + q * r[i]
                done = done and rem.is_zero
            for j in range(k + 1, n):
                if m[k][j].is_zero:
                    continue
                q, rem = _poly_divmod(m[k][j], piv)
                for r in m:
                    r[j] = r[j] - q * r[k]
                Q[k] = [x + q * y for x, y in zip(Q[k], Q[j])]
                done = done and rem.is_zero
            if done:
                break
    # d_k = t^v u_k: move u_k into column k of P, then sort by v
    vals = []
    for k in range(n):
        d = m[k][k]
        v = d.valuation()
        u = d * LaurentSeries.t_power(f, -v)
        for r in P:
            r[k] = r[k] * u
        vals.append(v - shift)
    order = sorted(range(n), key=lambda k: vals[k])
    if tuple(vals[k] for k in order) != exponents:
        raise AssertionError("elementary divisors disagree between the two Smith computations")
    P = [[r[k] for k in order] for r in P]
    Q = [Q[k] for k in order]
    return MatrixF(P, f), MatrixF(Q, f)


# -- Iwasawa decomposition and column Hermite form ----------------------------

@dataclass(frozen=True)
class IwasawaForm:
    """``torus @ unipotent @ integral == g`` with integral in GL_n(o)."""

    torus: MatrixF
    unipotent: MatrixF
    integral: MatrixF

    @property
    def torus_valuations(self) -> tuple[int, ...]:
        return tuple(self.torus[i, i].valuation() for i in range(self.torus.rows))


def column_hermite_form(g: MatrixF) -> tuple[tuple[int, ...], MatrixF]:
    """Canonical upper triangular basis of the lattice g * o^n.

    Returns the diagonal exponents ``a`` and the exact basis ``H`` with
    ``H[i,i] = t^a_i`` and each ``H[i,j]`` (i < j) supported on exponents
    below ``a_i``.  Pivots are taken right to left in each row, choosing the
    entry of least valuation.
    """
    if not g.is_square:
        raise ShapeMismatch("lattice basis must be square")
    n = g.rows
    field = g.field
    zero = LaurentSeries.zero(field)
    # work with columns: cols[c][r]
    cols = [list(c) for c in zip(*g.tolist())]
    a = [0] * n
    for i in range(n - 1, -1, -1):
        best = None
        lowest_unknown = math.inf
        for c in range(i + 1):
            e = cols[c][i]
            if e.codes:
                if best is None or e.lead < cols[best][i].lead:
                    best = c
            elif e.prec is not None:
                lowest_unknown = min(lowest_unknown, e.prec)
        if best is None:
            if lowest_unknown < math.inf:
                raise InsufficientPrecision("pivot row has no determinable entry")
            raise Singular("matrix is singular")
        e_val = cols[best][i].lead
        if lowest_unknown < e_val:
            raise InsufficientPrecision("an undetermined entry may have smaller valuation than the pivot")
        cols[best], cols[i] = cols[i], cols[best]
        scale = LaurentSeries.t_power(field, e_val) * cols[i][i].inverse()
        cols[i] = [x * scale for x in cols[i]]
        t_e_inv = LaurentSeries.t_power(field, -e_val)
        for c in range(i):
            f = cols[c][i]
            if f.is_zero:
                continue
            f = f * t_e_inv
            cols[c] = [x - f * y for x, y in zip(cols[c], cols[i])]
            cols[c][i] = zero
        a[i] = e_val
    # reduce entries above the diagonal modulo the row's diagonal power
    for j in range(n):
        for i in range(j - 1, -1, -1):
            e = cols[j][i]
            if e.prec is not None and e.prec < a[i]:
                raise InsufficientPrecision(f"entry ({i},{j}) known only to O(t^{e.prec}), need t^{a[i]}")
            high = e - e.polynomial_part(a[i])
            if high.is_zero:
                continue
            f = high * LaurentSeries.t_power(field, -a[i])
            cols[j] = [x - f * y for x, y in zip(cols[j], cols[i])]
    h = [[zero] * n for _ in range(n)]
    for j in range(n):
        h[j][j] = LaurentSeries.t_power(field, a[j])
        for i in range(j):
            h[i][j] = cols[j][i].polynomial_part(a[i])
    return tuple(a), MatrixF(h, field)


def iwasawa_decompose(g: MatrixF) -> IwasawaForm:
    """g = torus @ unipotent @ integral with T(F) U(F) GL_n(o) factors.

    The integral factor is computed as ``(torus @ unipotent)^-1 @ g``, so the
    reconstruction is exact for exact ``g``; its membership in GL_n(o) is
    verified, which also certifies the Hermite basis.
    """
    a, h = column_hermite_form(g)
    field = g.field
    n = g.rows
    zero = LaurentSeries.zero(field)
    torus = MatrixF.diag([LaurentSeries.t_power(field, e) for e in a], field)
    uni = [[zero] * n for _ in range(n)]
    for i in range(n):
        tinv = LaurentSeries.t_power(field, -a[i])
        for j in range(n):
            uni[i][j] = h[i, j] * tinv if j >= i else zero
    unipotent = MatrixF(uni, field)
    integral = _triangular_inverse(h) @ g
    if not all(e.is_surely_integral() for r in integral._e for e in r):
        raise InsufficientPrecision("integral factor could not be certified")
    d = det(integral)
    if d.is_unknown or d.valuation() != 0:
        raise InsufficientPrecision("integral factor determinant is not a certified unit")
    return IwasawaForm(torus, unipotent, integral)


# -- characteristic polynomial and discriminant -------------------------------

def charpoly(a: MatrixF) -> list[LaurentSeries]:
    """Coefficients of det(lambda I - a), highest degree first (Berkowitz).

    Division-free, so valid in every characteristic.
    """
    if not a.is_square:
        raise ShapeMismatch("characteristic polynomial of a non-square matrix")
    field = a.field
    one, zero = LaurentSeries.one(field), LaurentSeries.zero(field)
    m = a.tolist()
    n = len(m)
    vec = [one, -m[n - 1][n - 1]]
    for r in range(n - 2, -1, -1):
        size = n - r  # current block m[r:, r:]
        a11 = m[r][r]
        row = m[r][r + 1:]
        col = [m[i][r] for i in range(r + 1, n)]
        sub = [x[r + 1:] for x in m[r + 1:]]
        # first column of the Toeplitz matrix: 1, -a11, -R C, -R A C, ...
        first = [one, -a11]
        cur = col
        for _ in range(size - 1):
            s = zero
            for x, y in zip(row, cur):
                s = s + x * y
            first.append(-s)
            cur = [sum((sub[i][j] * cur[j] for j in range(len(cur))), zero) for i in range(len(cur))]
        # Toeplitz (size+1) x size times vec (length size)
        out = []
        for i in range(size + 1):
            s = zero
            for j in range(size):
                if i - j >= 0:
                    s = s + first[i - j] * vec[j]
            out.append(s)
        vec = out
    return vec


def discriminant(coeffs: Sequence[LaurentSeries]) -> LaurentSeries:
    """Discriminant of a monic polynomial given highest degree first.

    (-1)^(n(n-1)/2) Res(f, f') with f' taken at formal degree n - 1.
    """
    n = len(coeffs) - 1
    field = coeffs[0].field
    if n <= 1:
        return LaurentSeries.one(field)
    zero = LaurentSeries.zero(field)
    deriv = [coeffs[i] * (n - i) for i in range(n)]
    size = 2 * n - 1
    rows = []
    for i in range(n - 1):
        rows.append([zero] * i + list(coeffs) + [zero] * (size - n - 1 - i))
    for i in range(n):
        rows.append([zero] * i + deriv + [zero] * (size - n - i))
    res = det(MatrixF(rows, field))
    return -res if (n * (n - 1) // 2) % 2 else res
