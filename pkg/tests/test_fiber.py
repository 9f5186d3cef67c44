import itertools

import pytest

from conftest import F3, F5, F9, rand_gl_o, rand_invertible, rand_regular_x, rand_torus_point
from symspringer.counting import PointCountTable, estimate_dimension, fit_table, ratio_logs
from symspringer.errors import InvalidInput, NotRegular, ShapeMismatch, Undetermined
from symspringer.fiber import (
    UnipotentCoset,
    adjoint_asf_member,
    adjoint_window_points,
    asf_member,
    count_fiber_points,
    count_u_fiber,
    enumerate_u_fiber,
    project_to_torus,
    stratum_counts,
    superdiagonal_classes,
    window_fiber_search,
    z1_size,
)
from symspringer.grassmann import TorusPoint, torus_points
from symspringer.linalg import MatrixF
from symspringer.series import LaurentSeries, parse_series, parse_series_list
from symspringer.symspace import SymPair, TorusElement, dim_formula, make_gamma


def X(text, field=F3):
    return parse_series_list(text, field)


def ident(n, field=F3):
    return TorusElement.identity(n, field)


# -- membership -----------------------------------------------------------------

def test_asf_member_examples():
    x = X("t")
    gamma = make_gamma(x)
    one, t = MatrixF.diag(X("1")), MatrixF.diag(X("t"))
    assert asf_member((one, one), gamma)
    assert not asf_member((t, one), gamma)
    assert asf_member((one, t), gamma)
    assert asf_member((MatrixF.identity(2, F3),) * 2, make_gamma(X("1, 1+t")))


def test_adjoint_asf_member_examples():
    beta = MatrixF.diag(X("1, 1+t"))
    assert adjoint_asf_member(MatrixF.identity(2, F3), beta)
    assert adjoint_asf_member(MatrixF.diag(X("t, 1")), beta)
    u = MatrixF.from_strings([["1", "t^-1"], ["0", "1"]], F3)
    assert adjoint_asf_member(u, beta)  # (x2 - x1) t^-1 = 1 is integral
    u2 = MatrixF.from_strings([["1", "t^-2"], ["0", "1"]], F3)
    assert not adjoint_asf_member(u2, beta)


# -- projection -----------------------------------------------------------------

def test_project_identity():
    i2 = MatrixF.identity(2, F3)
    assert project_to_torus((i2, i2)) == TorusPoint((0, 0, 0, 0))


def test_projection_well_defined(rng):
    for _ in range(100):
        g = (rand_invertible(rng, F5, 2), rand_invertible(rng, F5, 2))
        k = (rand_gl_o(rng, F5, 2), rand_gl_o(rng, F5, 2))
        assert project_to_torus((g[0] @ k[0], g[1] @ k[1])) == project_to_torus(g)


# -- unipotent fibers -------------------------------------------------------------

def test_unipotent_coset_invariants():
    with pytest.raises(ShapeMismatch):
        UnipotentCoset(F3, 2, (((0, 1), parse_series("t^-3", F3)),), (((0, 1), parse_series("0", F3)),), 2)
    with pytest.raises(ShapeMismatch):
        UnipotentCoset(F3, 2, (((0, 1), parse_series("1", F3)),), (((0, 1), parse_series("0", F3)),), 2)


def test_fiber_example_nine_points():
    x = X("1, 1+t^2")
    pts = enumerate_u_fiber(ident(2), x, 3, F3)
    assert len(pts) == 9
    for p in pts:
        (v, w), = p.layer(1)
        assert v == w and (v.is_zero or v.valuation() >= -2)
        assert asf_member(p.matrices(), make_gamma(x))


def test_fiber_dim_zero_only_trivial(rng):
    x = X("1, 2")
    for _ in range(5):
        t = rand_torus_point(rng, F3, x)
        pts = enumerate_u_fiber(t, x, 2, F3)
        assert len(pts) == 1
        assert all(e.is_zero for _, e in pts[0].v + pts[0].w)
        assert list(superdiagonal_classes(t, x, pts).values()) == [1]


def test_fiber_outside_torus_fiber_is_empty():
    x = X("1, 1+t")
    bad = TorusElement(X("1, 1"), X("t^2, 1"))  # w - u = 2 > v(x_1) = 0
    assert enumerate_u_fiber(bad, x, 2, F3) == []
    assert count_u_fiber(bad, x, 2, F3) == 0


@pytest.mark.parametrize("x_text,field,depth", [
    ("1, 1+t^2", F3, 3),
    ("1, 1+t", F5, 2),
    ("t, t+t^2", F3, 3),
    ("1, 1+t, 2", F3, 1),
    ("1, 1+t, 1+2*t", F3, 1),
])
def test_layered_matches_exhaustive(rng, x_text, field, depth):
    x = X(x_text, field)
    for t in [ident(len(x), field)] + [rand_torus_point(rng, field, x) for _ in range(2)]:
        fast = enumerate_u_fiber(t, x, depth, field)
        slow = enumerate_u_fiber(t, x, depth, field, method="exhaustive")
        assert fast == slow
        assert count_u_fiber(t, x, depth, field) == len(fast)
        gamma = make_gamma(x)
        for p in fast:
            v, w = p.matrices()
            r, s = t.matrices()
            assert asf_member((r @ v, s @ w), gamma)


def test_enumeration_sorted_and_method_checked():
    x = X("1, 1+t^2")
    pts = enumerate_u_fiber(ident(2), x, 3, F3)
    keys = [p.coefficient_vector() for p in pts]
    assert keys == sorted(keys)
    with pytest.raises(ValueError):
        enumerate_u_fiber(ident(2), x, 3, F3, method="magic")


def test_count_fiber_points_tower():
    table = count_fiber_points(ident(2), X("1, 1+t^2"), 3, 3)
    assert table.values() == [9, 81, 729]
    assert table.fitted_degree == 2
    table0 = count_fiber_points(ident(2), X("1, 2"), 2, 3)
    assert table0.values() == [1, 1, 1] and table0.fitted_degree == 0


@pytest.mark.parametrize("n", [2, 3])
def test_growth_degree_equals_dim_formula(rng, n):
    for _ in range(3):
        x = rand_regular_x(rng, F3, n, max_val=1)
        d = dim_formula(x)
        if d > 2:
            continue
        t = rand_torus_point(rng, F3, x)
        table = count_fiber_points(t, x, d + 1, 3)
        assert table.fitted_degree == d
        vals = table.values()
        assert vals == sorted(vals)


def test_count_stable_in_depth(rng):
    x = X("1, 1+t, 1+2*t")
    counts = {count_u_fiber(ident(3), x, D, F3) for D in range(2, 6)}
    assert counts == {27}


def test_pipeline_q5_degree_one():
    table = count_fiber_points(ident(2, F5), X("1, 1+t", F5), 2, 3)
    assert table.values() == [5, 25, 125]
    assert estimate_dimension(table) == 1


# -- first superdiagonal classes ---------------------------------------------------

def test_superdiagonal_classes_equal_and_surjective(rng):
    for x_text, depth in [("1, 1+t^2", 3), ("1, 1+t, 1+2*t", 3), ("1, 1+t, 2", 2), ("t, t+t^2", 3)]:
        x = X(x_text)
        for t in [ident(len(x))] + [rand_torus_point(rng, F3, x) for _ in range(2)]:
            pts = enumerate_u_fiber(t, x, depth, F3)
            classes = superdiagonal_classes(t, x, pts)
            sizes = set(classes.values())
            assert len(sizes) == 1
            assert sum(classes.values()) == len(pts)
            assert len(classes) == z1_size(t, x, depth, F3)


def test_superdiagonal_known_sizes():
    x = X("1, 1+t, 1+2*t")
    pts = enumerate_u_fiber(ident(3), x, 3, F3)
    classes = superdiagonal_classes(ident(3), x, pts)
    assert len(pts) == 27 and len(classes) == 9 and set(classes.values()) == {3}
    assert superdiagonal_classes(ident(3), x, []) == {}


# -- window search --------------------------------------------------------------------

def test_window_search_units_window_zero():
    x = X("1, 2")
    pts = window_fiber_search(x, 0, F3)
    assert len(pts) == 1
    assert pts[0].stratum == 0 and pts[0].torus == TorusPoint((0, 0, 0, 0))


def test_window_search_rank_one():
    x = X("t^2")
    pts = window_fiber_search(x, 2, F3)
    got = sorted(p.torus.valuations for p in pts)
    expect = sorted((u, w) for u in range(-2, 3) for w in range(-2, 3) if 0 <= w - u <= 2)
    assert got == expect


def test_window_search_points_are_members_and_project():
    x = X("t, t+t^2")
    pts = window_fiber_search(x, 1, F3)
    assert stratum_counts(pts) == {0: 23, 1: 40, 2: 6}
    gamma = make_gamma(x)
    allowed = set(torus_points(x, 1))
    for p in pts:
        g = (p.lattice_a.basis, p.lattice_b.basis)
        assert asf_member(g, gamma)
        assert project_to_torus(g) == p.torus
        assert p.torus in allowed
        assert p.stratum == sum(p.torus.w) - sum(p.torus.u)


def test_strata_finite_and_bounded():
    x = X("1, 1+t")
    counts = stratum_counts(window_fiber_search(x, 1, F3))
    # 0 <= v(det A^-1 B) <= v(det beta)
    assert set(counts) <= set(range(0, 2)) and counts


def test_stratum_zero_matches_adjoint():
    x = X("1, 1+t")
    for field, expect in [(F3, 17), (F9, 41)]:
        zero = stratum_counts(window_fiber_search(x, 1, field)).get(0, 0)
        assert zero == len(adjoint_window_points(x, 1, field)) == expect


def test_window_search_rejects_irregular():
    with pytest.raises(NotRegular):
        window_fiber_search(X("1, 1"), 1, F3)


def test_fiber_point_dict():
    p = window_fiber_search(X("1, 2"), 0, F3)[0]
    d = p.to_dict()
    assert d["stratum"] == 0 and d["torus"] == [0, 0, 0, 0]


# -- dimension estimates ------------------------------------------------------------

def test_estimate_dimension_examples():
    assert estimate_dimension(PointCountTable(3, ((1, 9), (2, 81), (3, 729)))) == 2
    assert estimate_dimension(PointCountTable(3, ((1, 1), (2, 1), (3, 1)))) == 0
    # q^2 + 3q + 5 grows with degree 2, lower terms fade
    assert estimate_dimension(PointCountTable(3, ((1, 23), (2, 113), (3, 815)))) == 2
    with pytest.raises(Undetermined):
        estimate_dimension(PointCountTable(3, ((1, 1), (2, 9), (3, 9))))
    with pytest.raises(Undetermined):
        estimate_dimension(PointCountTable(3, ((1, 5),)))


def test_point_count_table_validation():
    with pytest.raises(InvalidInput):
        PointCountTable(3, ((2, 1), (1, 1)))
    with pytest.raises(InvalidInput):
        PointCountTable(3, ((1, 0),))
    t = fit_table(3, [(1, 3), (2, 9)])
    assert t.fitted_degree == 1 and ratio_logs(t) == pytest.approx([1.0])
    assert fit_table(3, [(1, 1), (2, 9), (3, 9)]).fitted_degree is None
