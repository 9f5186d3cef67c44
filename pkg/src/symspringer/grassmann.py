"""Finite windows of the affine Grassmannian of GL_n.

A lattice L with t^m o^n <= L <= t^-m o^n is stored by its canonical upper
triangular basis: diagonal t^a_i, entry (i, j) a Laurent polynomial with
exponents in [-m, a_i).  Two lattices are equal iff these data agree.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .counting import PointCountTable, fit_table
from .errors import NotRegular, ShapeMismatch, TooLarge, WindowExceeded
from .gf import FieldSpec, make_field
from .linalg import MatrixF, column_hermite_form, inverse
from .series import LaurentSeries, parse_series
from .symspace import is_regular

MAX_CANDIDATES = 10**7


@dataclass(frozen=True)
class Lattice:
    field: FieldSpec
    diagonal: tuple[int, ...]
    offdiag: tuple[tuple[tuple[int, int], LaurentSeries], ...]
    window: int

    @property
    def n(self) -> int:
        return len(self.diagonal)

    @property
    def basis(self) -> MatrixF:
        n = self.n
        rows = [[LaurentSeries.zero(self.field)] * n for _ in range(n)]
        for i, a in enumerate(self.diagonal):
            rows[i][i] = LaurentSeries.t_power(self.field, a)
        for (i, j), e in self.offdiag:
            rows[i][j] = e
        return MatrixF(rows, self.field)

    def contains_window(self) -> bool:
        """t^m o^n <= L <= t^-m o^n, checked on the basis and its inverse."""
        m = self.window
        b = self.basis
        if not all(e.is_zero or e.valuation() >= -m for row in b.tolist() for e in row):
            return False
        inv = inverse(b)
        return all(e.is_zero or e.valuation() + m >= 0 for row in inv.tolist() for e in row)

    def to_dict(self) -> dict:
        return {
            "diagonal": list(self.diagonal),
            "offdiag": {f"{i},{j}": str(e) for (i, j), e in self.offdiag},
            "window": self.window,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str, field: FieldSpec) -> Lattice:
        d = json.loads(text)
        off = []
        for key, s in sorted(d["offdiag"].items()):
            i, j = (int(v) for v in key.split(","))
            off.append(((i, j), parse_series(s, field)))
        return cls(field, tuple(d["diagonal"]), tuple(sorted(off, key=lambda kv: kv[0])), d["window"])


def _lattice(field, a, h: MatrixF, m: int) -> Lattice:
    n = len(a)
    off = tuple(((i, j), h[i, j]) for i in range(n) for j in range(i + 1, n) if not h[i, j].is_zero)
    return Lattice(field, tuple(a), off, m)


def lattice_from_coset(g: MatrixF, m: int) -> Lattice:
    """Canonical form of g o^n, required to lie in the window m."""
    a, h = column_hermite_form(g)
    lat = _lattice(g.field, a, h, m)
    if any(abs(e) > m for e in a) or not lat.contains_window():
        raise WindowExceeded(f"lattice does not fit between t^{m} o^n and t^-{m} o^n")
    return lat


def _candidate_count(n: int, m: int, q: int) -> int:
    # row i carries n - 1 - i off-diagonal entries with a_i + m free coefficients each
    return math.prod(sum(q ** ((a + m) * (n - 1 - i)) for a in range(-m, m + 1)) for i in range(n))


def enumerate_lattices(n: int, m: int, field: FieldSpec) -> list[Lattice]:
    """All lattices between t^m o^n and t^-m o^n, each once, in a fixed order."""
    if n < 1 or m < 0:
        raise ShapeMismatch("need n >= 1 and m >= 0")
    q = field.q
    if _candidate_count(n, m, q) > MAX_CANDIDATES:
        raise TooLarge(f"more than {MAX_CANDIDATES} candidate bases for n={n}, m={m}, q={q}")
    out = []
    codes = range(q)
    for a in itertools.product(range(-m, m + 1), repeat=n):
        slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
        widths = [a[i] + m for i, _ in slots]
        choices = [itertools.product(codes, repeat=w) for w in widths]
        for combo in itertools.product(*[list(c) for c in choices]):
            rows = [[LaurentSeries.zero(field)] * n for _ in range(n)]
            for i in range(n):
                rows[i][i] = LaurentSeries.t_power(field, a[i])
            for (i, j), cs in zip(slots, combo):
                rows[i][j] = LaurentSeries.from_codes(field, {-m + k: c for k, c in enumerate(cs) if c})
            h = MatrixF(rows, field)
            lat = _lattice(field, a, h, m)
            if lat.contains_window():
                out.append(lat)
    return out


@dataclass(frozen=True)
class TorusPoint:
    """Valuation vector (u_1..u_n, w_1..w_n) of a point of T(F)/T(o)."""

    valuations: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.valuations) // 2

    @property
    def u(self) -> tuple[int, ...]:
        return self.valuations[: self.n]

    @property
    def w(self) -> tuple[int, ...]:
        return self.valuations[self.n:]

    def differences(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.u, self.w))

    def satisfies(self, x: Sequence[LaurentSeries]) -> bool:
        """0 <= w_i - u_i <= v(x_i) for every i."""
        return all(0 <= d <= xi.valuation(allow_zero=True) for d, xi in zip(self.differences(), x))


def torus_points(x: Sequence[LaurentSeries], window: int, modulo_shift: bool = False) -> list[TorusPoint]:
    """Points of X(T, gamma) with all valuations in [-window, window].

    With ``modulo_shift`` the centralizer (c, c) is factored out: each class
    is represented by u = 0, w = w - u.
    """
    x = list(x)
    if not is_regular(x):
        raise NotRegular("entries of beta must be pairwise distinct")
    vx = [xi.valuation(allow_zero=True) for xi in x]
    if modulo_shift:
        ranges = [range(0, int(min(v, 2 * window)) + 1) for v in vx]
        return [TorusPoint((0,) * len(x) + d) for d in itertools.product(*ranges)]
    per_coord = []
    for v in vx:
        per_coord.append([(u, w) for u in range(-window, window + 1) for w in range(u, window + 1) if w - u <= v])
    out = []
    for combo in itertools.product(*per_coord):
        out.append(TorusPoint(tuple(u for u, _ in combo) + tuple(w for _, w in combo)))
    return out


def count_points(enumerate_fn: Callable[[FieldSpec], int], field: FieldSpec, tower: int) -> PointCountTable:
    """N(q^s) for s = 1..tower, with enumerate_fn(F_{q^s}) returning a count."""
    counts = []
    for s in range(1, tower + 1):
        ext = make_field(field.p, field.d * s)
        counts.append((s, enumerate_fn(ext)))
    return fit_table(field.q, counts)
