"""The GL_n x GL_n symmetric space inside GL_2n.

An element of g_1 is the block anti-diagonal matrix [[0, X], [Y, 0]], written
as the pair (X, Y).  G_0 = GL_n x GL_n acts by (A, B) . (X, Y) =
(A X B^-1, B Y A^-1); the affine Springer fiber condition uses the inverse
action (A^-1 X B, B^-1 Y A).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import InsufficientPrecision, NotRegular, OddDiscriminantValuation, ShapeMismatch
from .gf import FieldSpec
from .linalg import MatrixF, charpoly, det, discriminant, inverse
from .series import LaurentSeries


@dataclass(frozen=True)
class SymPair:
    X: MatrixF
    Y: MatrixF

    def __post_init__(self):
        if not (self.X.is_square and self.Y.is_square and self.X.shape == self.Y.shape):
            raise ShapeMismatch("X and Y must be square of equal size")

    @property
    def n(self) -> int:
        return self.X.rows

    @property
    def field(self) -> FieldSpec:
        return self.X.field

    def is_integral(self) -> bool:
        from .linalg import is_integral_matrix

        return is_integral_matrix(self.X) and is_integral_matrix(self.Y)


@dataclass(frozen=True)
class TorusElement:
    """t = (diag(r), diag(s)) in the diagonal torus of G_0."""

    r: tuple[LaurentSeries, ...]
    s: tuple[LaurentSeries, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(self.r))
        object.__setattr__(self, "s", tuple(self.s))
        if len(self.r) != len(self.s):
            raise ShapeMismatch("r and s must have the same length")
        for e in self.r + self.s:
            if e.is_zero:
                raise NotRegular("torus entries must be nonzero")
            e.valuation()  # raises InsufficientPrecision when undetermined

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> TorusElement:
        one = LaurentSeries.one(field)
        return cls((one,) * n, (one,) * n)

    @classmethod
    def from_valuations(cls, u: Sequence[int], w: Sequence[int], field: FieldSpec, units=None) -> TorusElement:
        """r_i = c_i t^u_i, s_i = d_i t^w_i; ``units`` is an optional (c, d) pair."""
        n = len(u)
        c, d = units if units is not None else ([1] * n, [1] * n)
        r = tuple(LaurentSeries.monomial(field, ci, ui) for ci, ui in zip(c, u))
        s = tuple(LaurentSeries.monomial(field, di, wi) for di, wi in zip(d, w))
        return cls(r, s)

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def field(self) -> FieldSpec:
        return self.r[0].field

    def a(self) -> list[LaurentSeries]:
        """a_i = r_i^-1 s_i."""
        return [si * ri.inverse() for ri, si in zip(self.r, self.s)]

    def b(self) -> list[LaurentSeries]:
        """b_i = s_i^-1 r_i."""
        return [ri * si.inverse() for ri, si in zip(self.r, self.s)]

    def valuations(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(e.valuation() for e in self.r), tuple(e.valuation() for e in self.s)

    def matrices(self) -> tuple[MatrixF, MatrixF]:
        return MatrixF.diag(self.r), MatrixF.diag(self.s)

    def map_field(self, target: FieldSpec) -> TorusElement:
        return TorusElement(tuple(e.map_field(target) for e in self.r), tuple(e.map_field(target) for e in self.s))


@dataclass(frozen=True)
class CartanElement:
    """(diag(c), diag(c_i x_i)) in the Cartan subspace through (I, diag(x))."""

    c: tuple[LaurentSeries, ...]
    x: tuple[LaurentSeries, ...]

    def as_pair(self) -> SymPair:
        return SymPair(MatrixF.diag(self.c), MatrixF.diag([ci * xi for ci, xi in zip(self.c, self.x)]))


def make_gamma(x: Sequence[LaurentSeries]) -> SymPair:
    """gamma = (I_n, diag(x)).  Regularity is checked separately."""
    x = list(x)
    field = x[0].field
    return SymPair(MatrixF.identity(len(x), field), MatrixF.diag(x, field))


def _distinct(values: Sequence[LaurentSeries]) -> bool:
    """Pairwise distinctness decided only by a known nonzero coefficient."""
    for a, b in combinations(values, 2):
        diff = a - b
        if diff.is_zero:
            return False
        if diff.is_unknown:
            raise InsufficientPrecision(f"cannot separate {a} and {b} at the available precision")
    return True


def is_regular(x: Sequence[LaurentSeries]) -> bool:
    return _distinct(list(x))


def _require_regular(x: Sequence[LaurentSeries]) -> None:
    if not is_regular(x):
        raise NotRegular("entries of beta must be pairwise distinct")


def ad_inverse_action(g: tuple[MatrixF, MatrixF], v: SymPair) -> SymPair:
    """(A, B), (X, Y) -> (A^-1 X B, B^-1 Y A)."""
    A, B = g
    Ainv, Binv = inverse(A), inverse(B)
    return SymPair(Ainv @ v.X @ B, Binv @ v.Y @ A)


def strict_upper_indices(n: int) -> list[tuple[int, int]]:
    """(i, j) with i < j in lexicographic order."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def phi_matrix(t: TorusElement, x: Sequence[LaurentSeries]) -> MatrixF:
    """Matrix of [Ad(t)^-1 gamma, -] from u to v in the ordered bases.

    Both bases run over strictly upper (i, j) in lexicographic order, first
    copy then second copy.  (The basis list of the source starts with e_11;
    only i < j basis vectors exist, so that entry is read as e_12.)
    Column (e_ij, 0) maps to -a_j (e_ij in X) + b_i x_i (e_ij in Y); column
    (0, e_ij) maps to a_i (X) - b_j x_j (Y).
    """
    x = list(x)
    _require_regular(x)
    n = len(x)
    if t.n != n:
        raise ShapeMismatch("torus element and x have different sizes")
    field = x[0].field
    a, b = t.a(), t.b()
    bx = [bi * xi for bi, xi in zip(b, x)]
    idx = strict_upper_indices(n)
    N = len(idx)
    zero = LaurentSeries.zero(field)
    rows = [[zero] * (2 * N) for _ in range(2 * N)]
    for k, (i, j) in enumerate(idx):
        rows[k][k] = -a[j]
        rows[k][N + k] = a[i]
        rows[N + k][k] = bx[i]
        rows[N + k][N + k] = -bx[j]
    return MatrixF(rows, field)


def pair_block(t: TorusElement, x: Sequence[LaurentSeries], i: int, j: int) -> MatrixF:
    """The 2x2 subsystem [[-s_j/r_j, s_i/r_i], [x_i r_i/s_i, -x_j r_j/s_j]]."""
    a, b = t.a(), t.b()
    return MatrixF([[-a[j], a[i]], [b[i] * x[i], -(b[j] * x[j])]])


def closed_form_det(x: Sequence[LaurentSeries]) -> LaurentSeries:
    """(-1)^(n(n-1)/2) prod_{i<j} (x_i - x_j)."""
    x = list(x)
    n = len(x)
    out = LaurentSeries.one(x[0].field)
    for i, j in strict_upper_indices(n):
        out = out * (x[i] - x[j])
    return -out if (n * (n - 1) // 2) % 2 else out


def det_phi(t: TorusElement, x: Sequence[LaurentSeries]) -> LaurentSeries:
    """det of the phi matrix, exact whenever r, s and x are exact.

    Permuting rows and columns by the same (k, N + k) pairing makes phi block
    diagonal, so det phi is the product of the 2x2 pair determinants.  Scaling
    the pair rows by r_i r_j and s_i s_j clears every inverse; the product of
    the scale factors is then divided out exactly.
    """
    x = list(x)
    if len(x) < 2:
        return LaurentSeries.one(x[0].field)
    exact = all(e.exact for e in list(t.r) + list(t.s) + x)
    if not exact:
        return det(phi_matrix(t, x))
    _require_regular(x)
    if t.n != len(x):
        raise ShapeMismatch("torus element and x have different sizes")
    r, s = t.r, t.s
    num = LaurentSeries.one(x[0].field)
    scale = LaurentSeries.one(x[0].field)
    for i, j in strict_upper_indices(len(x)):
        block = det(MatrixF([[-(s[j] * r[i]), s[i] * r[j]], [r[i] * s[j] * x[i], -(r[j] * s[i] * x[j])]]))
        num = num * block
        scale = scale * r[i] * r[j] * s[i] * s[j]
    return num.exact_quotient(scale)


def dim_formula(x: Sequence[LaurentSeries]) -> int:
    """sum_{i<j} v(x_i - x_j)."""
    x = list(x)
    _require_regular(x)
    return sum((x[i] - x[j]).valuation() for i, j in strict_upper_indices(len(x)))


def dim_formula_cartan(a: CartanElement) -> int:
    """sum_{i<j} v(c_i^2 x_i - c_j^2 x_j)."""
    for ci in a.c:
        if ci.is_zero:
            raise NotRegular("Cartan coordinates c_i must be nonzero")
    return dim_formula([ci * ci * xi for ci, xi in zip(a.c, a.x)])


def unitary_dim(x: Sequence[LaurentSeries]) -> int:
    """sum_{i<j} [v(x_i - x_j) + v(x_i + x_j)] for the unitary symmetric pair."""
    x = list(x)
    if not _distinct([xi * xi for xi in x]):
        raise NotRegular("need x_i != +-x_j for i < j")
    return sum((x[i] - x[j]).valuation() + (x[i] + x[j]).valuation() for i, j in strict_upper_indices(len(x)))


def conjecture_dim(g1: SymPair) -> int:
    """v(disc(charpoly(XY))) / 2 = sum_{i<j} v(lambda_i - lambda_j)."""
    d = discriminant(charpoly(g1.X @ g1.Y))
    if d.is_zero:
        raise NotRegular("XY has a repeated eigenvalue")
    v = d.valuation()
    if v % 2:
        raise OddDiscriminantValuation(f"v(disc) = {v} is odd")
    return v // 2


def nilradical_commutator_matrix(M: MatrixF) -> MatrixF:
    """Matrix of Z -> [M, Z] on strictly upper triangular Z.

    Basis e_ij (i < j) in lexicographic order.  For non-triangular M the image
    is projected back onto the strictly upper part.  On the full Borel
    algebra the map kills the diagonal, so only this restriction has a
    nonzero determinant.
    """
    if not M.is_square:
        raise ShapeMismatch("commutator map needs a square matrix")
    n = M.rows
    field = M.field
    idx = strict_upper_indices(n)
    pos = {ij: k for k, ij in enumerate(idx)}
    zero = LaurentSeries.zero(field)
    rows = [[zero] * len(idx) for _ in idx]
    for col, (i, j) in enumerate(idx):
        # [M, e_ij] = M e_ij - e_ij M: column j gets M[:, i], row i loses M[j, :]
        for r in range(n):
            if r < j and not M[r, i].is_zero:
                rows[pos[(r, j)]][col] = rows[pos[(r, j)]][col] + M[r, i]
        for c in range(n):
            if i < c and not M[j, c].is_zero:
                rows[pos[(i, c)]][col] = rows[pos[(i, c)]][col] - M[j, c]
    return MatrixF(rows, field)
