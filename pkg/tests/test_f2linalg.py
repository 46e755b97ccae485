import pytest
from hypothesis import given, settings, strategies as st

from sqext.f2linalg import (
    F2Matrix,
    F2Vector,
    RowSpace,
    combine,
    intersect,
    iter_bits,
    kernel_basis,
    left_kernel,
    rank_of_rows,
    row_reduce,
    solve,
)

NCOLS = 12
rows_st = st.lists(st.integers(0, 2 ** NCOLS - 1), max_size=10)


def span(rows):
    out = {0}
    for r in rows:
        out |= {x ^ r for x in out}
    return out


def test_vector_round_trip():
    v = F2Vector.from_list([1, 0, 1, 1])
    assert v.to_list() == [1, 0, 1, 1]
    assert not v.is_zero()


def test_iter_bits_and_combine():
    assert list(iter_bits(0b101001)) == [0, 3, 5]
    assert combine([1, 2, 4, 8], 0b1010) == 2 ^ 8


def test_identity_matmul():
    m = F2Matrix.from_lists([[1, 1, 0], [0, 1, 1]])
    assert m.matmul(F2Matrix.identity(3)).to_lists() == m.to_lists()
    assert F2Matrix.identity(2).matmul(m).to_lists() == m.to_lists()


@given(rows_st)
def test_rank_matches_span_size(rows):
    assert 2 ** rank_of_rows(rows) == len(span(rows))


@given(rows_st)
def test_row_space_membership(rows):
    sp = RowSpace()
    for r in rows:
        sp.add(r)
    spanned = span(rows)
    for x in list(spanned)[:20]:
        assert sp.contains(x)
    assert sp.rank == rank_of_rows(rows)


@given(rows_st, st.integers(0, 2 ** NCOLS - 1))
def test_express_reconstructs(rows, v):
    sp = RowSpace(track=True)
    for r in rows:
        sp.add(r)
    mask = sp.express(v)
    if mask is None:
        assert v not in span(rows)
    else:
        assert combine(rows, mask) == v


@given(rows_st)
def test_add_or_relation_finds_dependencies(rows):
    sp = RowSpace(track=True)
    for i, r in enumerate(rows):
        rel = sp.add_or_relation(r)
        if rel is not None:
            assert rel >> i & 1 and combine(rows, rel) == 0


@given(rows_st)
def test_left_kernel_relations(rows):
    ker = left_kernel(rows)
    assert len(ker) == len(rows) - rank_of_rows(rows)
    for mask in ker:
        assert mask and combine(rows, mask) == 0


@given(rows_st)
def test_kernel_basis_dimension(rows):
    if not rows:
        return
    m = F2Matrix(rows, NCOLS)
    k = kernel_basis(m)
    assert k.nrows == NCOLS - m.rank()
    for x in k.rows:
        assert m.mul_vec(F2Vector(x, NCOLS)).is_zero()


@given(rows_st, st.integers(0, 2 ** NCOLS - 1))
def test_solve_consistent(rows, x):
    if not rows:
        return
    m = F2Matrix(rows, NCOLS)
    b = m.mul_vec(F2Vector(x, NCOLS))
    sol = solve(m, b)
    assert sol is not None and m.mul_vec(sol).bits == b.bits


@given(rows_st)
def test_row_reduce_preserves_rank(rows):
    if not rows:
        return
    reduced, pivots, rank = row_reduce(F2Matrix(rows, NCOLS))
    assert rank == rank_of_rows(rows) == len(pivots)


@given(rows_st, rows_st)
def test_intersection_is_common_subspace(a, b):
    common = intersect(a, b)
    sa, sb = span(a), span(b)
    assert span(common) == sa & sb


def test_identity_is_reduced():
    rref, pivots, rank = row_reduce(F2Matrix.identity(2))
    assert rref.rows == (1, 2) and pivots == [0, 1] and rank == 2


def test_duplicate_rows_collapse():
    rref, pivots, rank = row_reduce(F2Matrix((3, 3), 2))
    assert rref.rows == (3, 0) and rank == 1


@given(st.lists(st.integers(0, 2 ** 20 - 1), min_size=20, max_size=20))
def test_rank_equals_transpose_rank(rows):
    m = F2Matrix(rows, 20)
    assert m.rank() == m.transpose().rank()


@given(rows_st)
def test_row_reduce_idempotent(rows):
    if not rows:
        return
    rref, pivots, _ = row_reduce(F2Matrix(rows, NCOLS))
    again, pivots2, _ = row_reduce(rref)
    assert again == rref and pivots2 == pivots
    assert pivots == sorted(set(pivots))


def test_kernel_extremes():
    assert kernel_basis(F2Matrix.identity(4)).nrows == 0
    assert kernel_basis(F2Matrix.zero(3, 3)).nrows == 3


def test_solve_extremes():
    b = F2Vector(0b101, 3)
    assert solve(F2Matrix.identity(3), b) == b
    assert solve(F2Matrix.zero(3, 3), b) is None
    with pytest.raises(ValueError):
        solve(F2Matrix.identity(3), F2Vector(1, 2))


@settings(max_examples=50)
@given(st.lists(st.integers(0, 2 ** 6 - 1), min_size=1, max_size=6), st.integers(0, 2 ** 6 - 1))
def test_solve_against_brute_force(rows, b_bits):
    m = F2Matrix(rows, 6)
    b = F2Vector(b_bits & ((1 << len(rows)) - 1), len(rows))
    brute = [x for x in range(64) if m.mul_vec(F2Vector(x, 6)).bits == b.bits]
    sol = solve(m, b)
    assert (sol is None) == (not brute)
    if sol is not None:
        assert sol.bits in brute
