"""Affine Springer fibers: membership, torus projection, and point enumeration.

U-fibers are enumerated by canonical coset representatives of U(F)/U(o):
a pair (v, w) of upper unipotent matrices whose strictly upper entries lie in
t^-1 k[t^-1], with pole order at most the depth D.  The membership condition
asks that v^-1 A w and w^-1 B v be integral, where A = diag(a_i) and
B = diag(b_i x_i) come from the torus point.

The layered solver walks the superdiagonals j - i = 1, 2, ...  Once the lower
layers are fixed, the polar part of the (i, j) entries is affine linear in
the layer's unknown coefficients, so each layer is a small linear system over
F_Q.  ``method="exhaustive"`` tries every representative instead and serves
as an independent check on small cases.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .counting import PointCountTable, estimate_dimension, fit_table
from .errors import NotRegular, ShapeMismatch, TooLarge
from .gf import FieldSpec, make_field, rank, solve_affine
from .grassmann import Lattice, TorusPoint, enumerate_lattices
from .linalg import MatrixF, column_hermite_form, inverse, is_integral_matrix, smith_normal_form
from .series import LaurentSeries
from .symspace import SymPair, TorusElement, ad_inverse_action, is_regular, strict_upper_indices

__all__ = [
    "PointCountTable",
    "estimate_dimension",
    "UnipotentCoset",
    "FiberPoint",
    "asf_member",
    "adjoint_asf_member",
    "project_to_torus",
    "enumerate_u_fiber",
    "count_u_fiber",
    "superdiagonal_classes",
    "z1_size",
    "count_fiber_points",
    "window_fiber_search",
    "adjoint_window_points",
    "stratum_counts",
]

MAX_POINTS = 10**6
MAX_EXHAUSTIVE = 2 * 10**5


# -- membership and projection -------------------------------------------------

def asf_member(g: tuple[MatrixF, MatrixF], gamma: SymPair) -> bool:
    """Is Ad(g)^-1 gamma integral?"""
    img = ad_inverse_action(g, gamma)
    return is_integral_matrix(img.X) and is_integral_matrix(img.Y)


def adjoint_asf_member(g: MatrixF, beta: MatrixF) -> bool:
    """Is g^-1 beta g integral?"""
    return is_integral_matrix(inverse(g) @ beta @ g)


def project_to_torus(g: tuple[MatrixF, MatrixF]) -> TorusPoint:
    """Valuations of the Iwasawa torus parts of both blocks."""
    a, _ = column_hermite_form(g[0])
    b, _ = column_hermite_form(g[1])
    return TorusPoint(tuple(a) + tuple(b))


# -- coset representatives ------------------------------------------------------

@dataclass(frozen=True)
class UnipotentCoset:
    """(v, w) with strictly upper entries in t^-1 k[t^-1] of pole order <= depth."""

    field: FieldSpec
    n: int
    v: tuple[tuple[tuple[int, int], LaurentSeries], ...]
    w: tuple[tuple[tuple[int, int], LaurentSeries], ...]
    depth: int

    def __post_init__(self):
        for _, e in self.v + self.w:
            if not e.is_zero and (e.valuation() < -self.depth or max(e.terms()) >= 0):
                raise ShapeMismatch(f"{e} is not a coset representative of depth {self.depth}")

    def _matrix(self, entries) -> MatrixF:
        field = self.field
        rows = [[LaurentSeries.one(field) if i == j else LaurentSeries.zero(field) for j in range(self.n)] for i in range(self.n)]
        for (i, j), e in entries:
            rows[i][j] = e
        return MatrixF(rows, field)

    def matrices(self) -> tuple[MatrixF, MatrixF]:
        return self._matrix(self.v), self._matrix(self.w)

    def layer(self, k: int) -> tuple:
        """Entries on the superdiagonal j - i = k, as (v_ij, w_ij) pairs."""
        vd, wd = dict(self.v), dict(self.w)
        return tuple((vd[(i, i + k)], wd[(i, i + k)]) for i in range(self.n - k))

    def coefficient_vector(self) -> tuple[int, ...]:
        """Codes of t^-1..t^-D for v_ij then w_ij, pairs in lexicographic order."""
        vd, wd = dict(self.v), dict(self.w)
        out = []
        for ij in strict_upper_indices(self.n):
            for e in (vd[ij], wd[ij]):
                out.extend(e.coefficient(-k).code for k in range(1, self.depth + 1))
        return tuple(out)

    def to_dict(self) -> dict:
        return {
            "v": {f"{i},{j}": str(e) for (i, j), e in self.v},
            "w": {f"{i},{j}": str(e) for (i, j), e in self.w},
            "depth": self.depth,
        }


def _polar(s: LaurentSeries) -> dict[int, int]:
    """Codes of the coefficients at negative exponents."""
    p = s.polynomial_part(0)
    return {p.lead + i: c for i, c in enumerate(p.codes) if c}


def _from_vector(field: FieldSpec, vec: Sequence[int]) -> LaurentSeries:
    return LaurentSeries.from_codes(field, {-(k + 1): c for k, c in enumerate(vec) if c})


class _FiberProblem:
    """Data of X(U, Ad(t)^-1 gamma) over one field."""

    def __init__(self, t: TorusElement, x: Sequence[LaurentSeries], depth: int, field: FieldSpec):
        x = list(x)
        if not is_regular(x):
            raise NotRegular("entries of beta must be pairwise distinct")
        if t.n != len(x):
            raise ShapeMismatch("torus element and x have different sizes")
        if depth < 0:
            raise ShapeMismatch("depth must be non-negative")
        self.n = len(x)
        self.depth = depth
        self.field = field
        t = t.map_field(field)
        x = [xi.map_field(field) for xi in x]
        self.A = t.a()
        self.B = [bi * xi for bi, xi in zip(t.b(), x)]
        # the diagonal of both blocks is untouched by u
        self.nonempty = all(e.is_integral() for e in self.A + self.B)
        self.zero = LaurentSeries.zero(field)
        self._columns = {}

    def columns(self, i: int, j: int):
        """Polar parts of (P_ij, Q_ij) for each unknown coefficient of (v_ij, w_ij)."""
        if (i, j) not in self._columns:
            f = self.field
            A, B = self.A, self.B
            cols = []
            for e in range(1, self.depth + 1):
                m = LaurentSeries.t_power(f, -e)
                cols.append((_polar(-(A[j] * m)), _polar(B[i] * m)))
            for e in range(1, self.depth + 1):
                m = LaurentSeries.t_power(f, -e)
                cols.append((_polar(A[i] * m), _polar(-(B[j] * m))))
            self._columns[(i, j)] = cols
        return self._columns[(i, j)]

    def constants(self, state, i: int, j: int):
        """Parts of P_ij, Q_ij that depend only on the lower layers."""
        v, w, vinv, winv = state
        A, B = self.A, self.B
        cv = self.zero
        cw = self.zero
        cp = self.zero
        cq = self.zero
        for l in range(i + 1, j):
            cv = cv - vinv[(i, l)] * v[(l, j)]
            cw = cw - winv[(i, l)] * w[(l, j)]
            cp = cp + vinv[(i, l)] * A[l] * w[(l, j)]
            cq = cq + winv[(i, l)] * B[l] * v[(l, j)]
        return cv, cw, cp + cv * A[j], cq + cw * B[j]

    def solve_pair(self, state, i: int, j: int):
        """(particular, kernel, cv, cw) for pair (i, j), or None if inconsistent."""
        cols = self.columns(i, j)
        cv, cw, cp, cq = self.constants(state, i, j)
        const = (_polar(cp), _polar(cq))
        keys = set()
        for side in range(2):
            keys.update((side, k) for k in const[side])
            for col in cols:
                keys.update((side, k) for k in col[side])
        keys = sorted(keys)
        f = self.field
        rows = [[col[side].get(k, 0) for col in cols] for side, k in keys]
        rhs = [f.neg(const[side].get(k, 0)) for side, k in keys]
        sol = solve_affine(f, rows, rhs, len(cols))
        if sol is None:
            return None
        return sol[0], sol[1], cv, cw

    def affine_points(self, particular, kernel):
        f = self.field
        for coeffs in itertools.product(range(f.q), repeat=len(kernel)):
            vec = list(particular)
            for c, k in zip(coeffs, kernel):
                if c:
                    vec = [f.add(a, f.mul(c, b)) for a, b in zip(vec, k)]
            yield vec

    def extend(self, state, i, j, vec, cv, cw):
        v, w, vinv, winv = state
        D = self.depth
        vij = _from_vector(self.field, vec[:D])
        wij = _from_vector(self.field, vec[D:])
        v = {**v, (i, j): vij}
        w = {**w, (i, j): wij}
        vinv = {**vinv, (i, j): cv - vij}
        winv = {**winv, (i, j): cw - wij}
        return v, w, vinv, winv


def _layer_states(problem: _FiberProblem, state, k: int):
    """All extensions of ``state`` through the layer j - i = k."""
    states = [state]
    for i in range(problem.n - k):
        j = i + k
        nxt = []
        for st in states:
            sol = problem.solve_pair(st, i, j)
            if sol is None:
                continue
            particular, kernel, cv, cw = sol
            for vec in problem.affine_points(particular, kernel):
                nxt.append(problem.extend(st, i, j, vec, cv, cw))
                if len(nxt) > MAX_POINTS:
                    raise TooLarge(f"more than {MAX_POINTS} partial solutions")
        states = nxt
    return states


def _empty_state():
    return {}, {}, {}, {}


def _coset(problem: _FiberProblem, state) -> UnipotentCoset:
    v, w = state[0], state[1]
    idx = strict_upper_indices(problem.n)
    return UnipotentCoset(problem.field, problem.n, tuple((ij, v[ij]) for ij in idx), tuple((ij, w[ij]) for ij in idx), problem.depth)


def _layered_points(problem: _FiberProblem) -> list[UnipotentCoset]:
    if not problem.nonempty:
        return []
    states = [_empty_state()]
    for k in range(1, problem.n):
        states = [s for st in states for s in _layer_states(problem, st, k)]
    return [_coset(problem, st) for st in states]


def _layered_count(problem: _FiberProblem) -> int:
    if not problem.nonempty:
        return 0
    n = problem.n
    if n == 1:
        return 1
    states = [_empty_state()]
    for k in range(1, n - 1):
        states = [s for st in states for s in _layer_states(problem, st, k)]
    # top layer is the single pair (0, n-1): count its solutions without listing them
    total = 0
    for st in states:
        sol = problem.solve_pair(st, 0, n - 1)
        if sol is not None:
            total += problem.field.q ** len(sol[1])
    return total


def _exhaustive_points(problem: _FiberProblem, t: TorusElement, x) -> list[UnipotentCoset]:
    f = problem.field
    n, D = problem.n, problem.depth
    idx = strict_upper_indices(n)
    total = f.q ** (2 * D * len(idx))
    if total > MAX_EXHAUSTIVE:
        raise TooLarge(f"{total} representatives exceed the exhaustive limit {MAX_EXHAUSTIVE}")
    t = t.map_field(f)
    r, s = t.matrices()
    gamma = SymPair(MatrixF.identity(n, f), MatrixF.diag([xi.map_field(f) for xi in x], f))
    shifted = ad_inverse_action((r, s), gamma)
    out = []
    entries = [_from_vector(f, c) for c in itertools.product(range(f.q), repeat=D)]
    for combo in itertools.product(entries, repeat=2 * len(idx)):
        v = tuple(zip(idx, combo[0::2]))
        w = tuple(zip(idx, combo[1::2]))
        coset = UnipotentCoset(f, n, v, w, D)
        if asf_member(coset.matrices(), shifted):
            out.append(coset)
    return out


def enumerate_u_fiber(
    t: TorusElement, x: Sequence[LaurentSeries], depth: int, field: FieldSpec, method: str = "layered"
) -> list[UnipotentCoset]:
    """Points of X(U, Ad(t)^-1 gamma) of pole order <= depth over ``field``.

    Sorted by coefficient vector, so both methods give identical lists.
    """
    problem = _FiberProblem(t, x, depth, field)
    if method == "layered":
        pts = _layered_points(problem)
    elif method == "exhaustive":
        pts = _exhaustive_points(problem, t, x) if problem.nonempty else []
    else:
        raise ValueError(f"unknown method {method!r}")
    return sorted(pts, key=UnipotentCoset.coefficient_vector)


def count_u_fiber(t: TorusElement, x: Sequence[LaurentSeries], depth: int, field: FieldSpec) -> int:
    return _layered_count(_FiberProblem(t, x, depth, field))


def count_fiber_points(
    t: TorusElement, x: Sequence[LaurentSeries], depth: int, tower: int, field: FieldSpec | None = None
) -> PointCountTable:
    """U-fiber counts over F_{q^s}, s = 1..tower, with all inputs embedded."""
    base = field or x[0].field
    counts = []
    for s in range(1, tower + 1):
        ext = make_field(base.p, base.d * s)
        counts.append((s, count_u_fiber(t, x, depth, ext)))
    return fit_table(base.q, counts)


# -- the first superdiagonal ------------------------------------------------------

def _pair_matrix(t: TorusElement, x, i: int, field: FieldSpec) -> MatrixF:
    """The 2x2 map (v, w) -> (P, Q) on the entry (i, i+1)."""
    t = t.map_field(field)
    x = [xi.map_field(field) for xi in x]
    a, b = t.a(), t.b()
    j = i + 1
    return MatrixF([[-a[j], a[i]], [b[i] * x[i], -(b[j] * x[j])]], field)


def superdiagonal_classes(t: TorusElement, x: Sequence[LaurentSeries], points: Iterable[UnipotentCoset]) -> dict:
    """Group points by the class of p_1(u) in V_1^2(o) / p_1(U(o)).

    For each pair the image of U(o) is M o^2; with left M right = diag(t^e)
    the class of z = M y is read off the coefficients of (left z)_k below
    t^e_k.  Returns class key -> size, in order of first appearance.
    """
    points = list(points)
    if not points:
        return {}
    field = points[0].field
    n = len(x)
    mats = [_pair_matrix(t, x, i, field) for i in range(n - 1)]
    forms = [smith_normal_form(M) for M in mats]
    sizes: Counter = Counter()
    for pt in points:
        key = []
        for i, (vy, wy) in enumerate(pt.layer(1)):
            snf = forms[i]
            z = mats[i] @ MatrixF([[vy], [wy]], field)
            lz = snf.left @ z
            for k, e in enumerate(snf.exponents):
                key.append(tuple(lz[k, 0].coefficient(c).code for c in range(e)))
        sizes[tuple(key)] += 1
    return dict(sizes)


def z1_size(t: TorusElement, x: Sequence[LaurentSeries], depth: int, field: FieldSpec) -> int:
    """|V_1^2(o) / (p_1(U(o)) + t^depth V_1^2(o))| from F_Q ranks.

    Each pair contributes Q^(2N - rank) with N = depth and rank the rank of
    M mod t^N as a map (o/t^N)^2 -> (o/t^N)^2.
    """
    n = len(x)
    N = depth
    total = 1
    for i in range(n - 1):
        M = _pair_matrix(t, x, i, field)
        cols = []
        for s in range(2):
            for c in range(N):
                col = []
                for r in range(2):
                    e = M[r, s]
                    col.extend(e.coefficient(k - c).code if k >= c else 0 for k in range(N))
                cols.append(col)
        rows = [list(r) for r in zip(*cols)] if cols else []
        total *= field.q ** (2 * N - rank(field, rows))
    return total


# -- lattice window search ------------------------------------------------------

@dataclass(frozen=True)
class FiberPoint:
    lattice_a: Lattice
    lattice_b: Lattice
    torus: TorusPoint
    stratum: int

    def to_dict(self) -> dict:
        return {
            "A": self.lattice_a.to_dict(),
            "B": self.lattice_b.to_dict(),
            "torus": list(self.torus.valuations),
            "stratum": self.stratum,
        }


def _integral(m: MatrixF) -> bool:
    return all(e.is_zero or e.valuation() >= 0 for row in m.tolist() for e in row)


def window_fiber_search(x: Sequence[LaurentSeries], m: int, field: FieldSpec) -> list[FiberPoint]:
    """Pairs of window-m lattices (A o^n, B o^n) with A^-1 B and B^-1 beta A integral."""
    x = [xi.map_field(field) for xi in x]
    if not is_regular(x):
        raise NotRegular("entries of beta must be pairwise distinct")
    beta = MatrixF.diag(x, field)
    lats = enumerate_lattices(len(x), m, field)
    bases = [lat.basis for lat in lats]
    invs = [inverse(b) for b in bases]
    beta_bases = [beta @ b for b in bases]
    out = []
    for ia, la in enumerate(lats):
        for ib, lb in enumerate(lats):
            if not _integral(invs[ia] @ bases[ib]):
                continue
            if not _integral(invs[ib] @ beta_bases[ia]):
                continue
            torus = TorusPoint(la.diagonal + lb.diagonal)
            out.append(FiberPoint(la, lb, torus, sum(lb.diagonal) - sum(la.diagonal)))
    return out


def adjoint_window_points(x: Sequence[LaurentSeries], m: int, field: FieldSpec) -> list[Lattice]:
    """Window-m lattices L with beta L <= L."""
    x = [xi.map_field(field) for xi in x]
    beta = MatrixF.diag(x, field)
    return [lat for lat in enumerate_lattices(len(x), m, field) if _integral(inverse(lat.basis) @ beta @ lat.basis)]


def stratum_counts(points: Iterable[FiberPoint]) -> dict[int, int]:
    c = Counter(p.stratum for p in points)
    return dict(sorted(c.items()))
