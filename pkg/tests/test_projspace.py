import pytest
from hypothesis import given, strategies as st

from sqext.fpmodule import dual, match_cyclic_piece, suspend, validate
from sqext.projspace import (
    StuntedRange,
    a2moda1,
    binom_mod2,
    binom_mod2_signed,
    build_filtration,
    build_L,
    build_L0,
    build_Ln,
    build_M0,
    stunted_module,
)
from sqext.steenrod import get_algebra

from math import comb


@given(st.integers(0, 200), st.integers(0, 200))
def test_binomial_parity(j, i):
    assert binom_mod2(j, i) == comb(j, i) % 2


@given(st.integers(-100, -1), st.integers(0, 40))
def test_negative_binomials_follow_generalised_formula(j, i):
    # C(j, i) = (-1)^i C(i - j - 1, i) for negative j
    assert binom_mod2_signed(j, i) == comb(i - j - 1, i) % 2


def test_stunted_range_checks():
    with pytest.raises(ValueError):
        StuntedRange(3, 2)


def test_a2moda1_cells_and_self_duality():
    a = a2moda1()
    assert a.degrees == (0, 4, 6, 7, 10, 11, 13, 17)
    assert validate(a) == []
    assert match_cyclic_piece(dual(a), suspend(a, -17)) is not None


def test_l0_cells():
    l0 = build_L0()
    assert sorted(l0.graded_dims()) == [0, 1, 2, 4, 8]
    assert validate(l0) == []


def test_l_has_four_cells():
    assert sorted(build_L().graded_dims()) == [1, 2, 4, 8]


def test_ln_bottom_cells():
    l1, inc = build_Ln(1)
    assert l1.bottom == -9 and inc.is_injective() and inc.is_module_map()
    with pytest.raises(ValueError):
        build_Ln(-1)


def test_m0_short_exact_sequence():
    data = build_M0()
    assert data.L.dim + data.module.dim == data.projective.dim
    assert data.q.is_module_map() and data.f.is_module_map()
    assert data.module.bottom == -1


@pytest.mark.parametrize("target", ["stunted", "L", "M0"])
def test_filtrations_are_filtrations(target):
    f = build_filtration(target, 0, 30)
    assert f.violations() == []


def test_over_a1_restriction_matches():
    a1 = get_algebra("A1")
    m = stunted_module(StuntedRange(-9, 9), a1)
    assert validate(m) == []


def test_binomial_examples():
    assert all(binom_mod2(-1, i) == 1 for i in range(64))  # the bottom class supports every square
    assert binom_mod2(2, 1) == 0
    assert binom_mod2(-9, 1) == 1


def test_p_minus_1_to_8_over_truncated_a():
    from sqext.fpmodule import validate

    p = stunted_module(StuntedRange(-1, 8), get_algebra("A", 16))
    assert p.dim == 10 and validate(p) == []
    assert p.sq(2, 1 << p.index("x2")) == 1 << p.index("x4")
    assert p.sq(4, 1 << p.index("x4")) == 1 << p.index("x8")


def test_bottom_cell_of_p0_splits_off():
    p = stunted_module(StuntedRange(0, 8))
    x0 = 1 << p.index("x0")
    assert all(p.act_gen(g, x0) == 0 for g in p.algebra.generators)


def test_l1_cells_and_dimension_growth():
    l1, _ = build_Ln(1)
    assert sorted(l1.graded_dims()) == list(range(-9, -1)) + [0, 1, 2, 4, 8]
    for n in (1, 2):
        assert build_Ln(n, 30)[0].dim == build_L0().dim + 8 * n


def test_m0_cells():
    m0 = build_M0().module
    assert m0.dims_list(-1, 18) == [1, 0, 0, 0, 1, 0, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]
    bottom = 1 << m0.in_degree(-1)[0]
    assert m0.act_gen(4, bottom) == 1 << m0.in_degree(3)[0]


def test_m0_independent_of_n():
    from sqext.fpmodule import same_diagram

    assert same_diagram(build_M0(0, 30).module, build_M0(1, 30).module) == []


@pytest.mark.parametrize("n", [0, 1])
def test_periodicity_by_eight(n):
    a, b = -8 * n - 1, 20
    upper = stunted_module(StuntedRange(a, b))
    lower = stunted_module(StuntedRange(a - 8, b - 8))
    assert suspend(lower, 8).action == upper.action


def test_collapse_map_between_projective_spaces_is_natural():
    """Collapsing the cells below -1 makes H*P_(-1) the submodule of H*P_(-9) on cells >= -1."""
    from sqext.fpmodule import ModuleHom

    big, small = stunted_module(StuntedRange(-9, 16)), stunted_module(StuntedRange(-1, 16))
    inc = ModuleHom(small, big, tuple(1 << big.index(n) for n in small.names))
    assert inc.is_module_map() and inc.is_injective()
    proj = ModuleHom(big, small, tuple(1 << small.index(n) if n in small.names else 0 for n in big.names))
    assert not proj.is_module_map()  # squares on the low cells reach the kept ones


@pytest.mark.parametrize("target", ["stunted", "L", "M0"])
def test_graded_pieces_add_up(target):
    from sqext.fpmodule import associated_graded

    f = build_filtration(target, 1, 30)
    pieces = associated_graded(f)
    total = {}
    for p in pieces:
        for d, k in p.graded_dims().items():
            total[d] = total.get(d, 0) + k
    assert {d: k for d, k in total.items() if k} == f.module.graded_dims()


def test_first_stage_is_shifted_l0():
    from sqext.fpmodule import associated_graded

    for n in (0, 1):
        first = associated_graded(build_filtration("stunted", n, 30))[0]
        assert match_cyclic_piece(first, suspend(build_L0(), -8 * n)) is not None
