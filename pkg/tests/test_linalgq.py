from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from sheafrep.linalgq import (
    RationalMatrix,
    Subspace,
    coordinates_in_rows,
    fixed_space,
    format_rational,
    intersect,
    kernel,
    parse_rational,
    row_space,
    rref,
    solve,
)

rationals = st.builds(mpq, st.integers(-8, 8), st.integers(1, 6))


def matrices(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(rationals, min_size=c, max_size=c), min_size=r, max_size=r
            ).map(RationalMatrix.from_rows)
        )
    )


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rank_nullity(m):
    _, pivots = rref(m)
    assert len(pivots) + kernel(m).dim == m.cols


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_nullspace_is_killed(m):
    ns = kernel(m)
    for row in ns.basis.data:
        assert all(x == 0 for x in m.apply(row))


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_row_space_canonical(m):
    sp = row_space(m)
    assert sp == row_space(sp.basis)
    assert sp.dim == len(rref(m)[1])


@given(matrices(), st.lists(rationals, min_size=1, max_size=4))
@settings(max_examples=60, deadline=None)
def test_solve_consistency(m, x):
    x = x[: m.cols] + [mpq(0)] * max(0, m.cols - len(x))
    b = m.apply(x)
    y = solve(m, RationalMatrix.from_rows([[v] for v in b]))
    assert y is not None
    assert m.apply([y.data[i][0] for i in range(m.cols)]) == b


def test_solve_inconsistent():
    m = RationalMatrix.from_rows([[mpq(1)], [mpq(1)]])
    b = RationalMatrix.from_rows([[mpq(1)], [mpq(2)]])
    assert solve(m, b) is None


@given(matrices(3), matrices(3))
@settings(max_examples=40, deadline=None)
def test_intersect_contained(a, b):
    if a.cols != b.cols:
        return
    sa, sb = row_space(a), row_space(b)
    both = intersect(sa, sb)
    for row in both.basis.data:
        assert sa.contains_vector(row)
        assert sb.contains_vector(row)
    assert both.dim >= sa.dim + sb.dim - a.cols


def test_fixed_space():
    swap = RationalMatrix.from_rows([[mpq(0), mpq(1)], [mpq(1), mpq(0)]])
    fs = fixed_space([swap], 2)
    assert fs.dim == 1
    assert fs.contains_vector([mpq(1), mpq(1)])
    assert fixed_space([], 3).dim == 3


def test_coordinates_in_rows():
    basis = RationalMatrix.from_rows([[mpq(1), mpq(0)], [mpq(1), mpq(1)]])
    coords = coordinates_in_rows(basis, [mpq(3), mpq(2)])
    assert coords == [mpq(1), mpq(2)]


@given(rationals)
def test_rational_format_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_subspace_equality_is_canonical():
    a = RationalMatrix.from_rows([[mpq(1), mpq(1)], [mpq(0), mpq(2)]])
    b = RationalMatrix.from_rows([[mpq(1), mpq(0)], [mpq(3), mpq(1)]])
    assert row_space(a) == row_space(b)
    assert row_space(a) != Subspace(2, RationalMatrix.from_rows([[mpq(1), mpq(0)]]))
