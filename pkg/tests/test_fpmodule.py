import pytest
from hypothesis import given, settings, strategies as st

from sqext.fpmodule import (
    FpModule,
    ModuleError,
    direct_sum,
    dual,
    from_cells,
    identity_hom,
    match_cyclic_piece,
    parse_module,
    quotient,
    restrict,
    same_diagram,
    submodule_generated,
    suspend,
    tensor,
    trivial_module,
    truncate_above,
    validate,
    write_module,
)
from sqext.projspace import StuntedRange, binom_mod2, stunted_module
from sqext.steenrod import get_algebra

A1, A2 = get_algebra("A1"), get_algebra("A2")


@st.composite
def stunted(draw, span=12):
    lo = draw(st.integers(-20, 12))
    hi = draw(st.integers(lo, lo + span))
    return StuntedRange(lo, hi)


def joker():
    """The A(1)-module with cells 0, 1, 2, 3, 4 and symmetric Sq^1, Sq^2."""
    cells = [(f"j{d}", d) for d in range(5)]
    lines = [(1, "j0", "j1"), (2, "j0", "j2"), (2, "j1", "j3"), (2, "j2", "j4"), (1, "j3", "j4")]
    return from_cells(A1, cells, lines)


def test_joker_is_a_module():
    assert validate(joker()) == []


def test_validate_catches_bad_action():
    bad = from_cells(A1, [("x", 0), ("y", 2), ("z", 4)], [(2, "x", "y"), (2, "y", "z")])
    assert validate(bad)  # Sq^2 Sq^2 = Sq^3 Sq^1 must vanish on x


def test_bad_construction_rejected():
    with pytest.raises(ModuleError):
        FpModule(A1, ["a", "a"], [0, 1], {})
    with pytest.raises(ModuleError):
        from_cells(A1, [("x", 0), ("y", 4)], [(4, "x", "y")])


@settings(max_examples=60)
@given(stunted(), st.sampled_from(["A1", "A2", "A:16"]))
def test_stunted_projective_spaces_are_modules(r, alg):
    from sqext.steenrod import parse_algebra

    m = stunted_module(r, parse_algebra(alg))
    assert validate(m) == []


@settings(max_examples=60)
@given(stunted(), st.integers(1, 9))
def test_sq_on_powers_is_binomial(r, i):
    """``Sq^i x^j = C(j, i) x^(i+j)`` for every square, not only the generators."""
    m = stunted_module(r, get_algebra("A", 16))
    for k, j in enumerate(m.degrees):
        expected = 1 << (k + i) if j + i <= r.top and binom_mod2(j, i) else 0
        assert m.sq(i, 1 << k) == expected


@settings(max_examples=40)
@given(stunted(8))
def test_double_dual(r):
    m = stunted_module(r)
    assert same_diagram(dual(dual(m)), m) == []
    assert dual(m).graded_dims() == {-d: n for d, n in m.graded_dims().items()}


@settings(max_examples=20)
@given(stunted(3), stunted(3), stunted(3))
def test_tensor_associative(r1, r2, r3):
    m1, m2, m3 = (stunted_module(r, A1) for r in (r1, r2, r3))
    left, right = tensor(tensor(m1, m2), m3), tensor(m1, tensor(m2, m3))
    assert left.degrees == right.degrees and left.action == right.action


@settings(max_examples=30)
@given(stunted(5), stunted(5))
def test_tensor_dimensions_and_validity(r1, r2):
    m1, m2 = stunted_module(r1, A1), stunted_module(r2, A1)
    t = tensor(m1, m2)
    assert t.dim == m1.dim * m2.dim
    assert validate(t) == []


def test_write_parse_round_trip():
    for m in (joker(), stunted_module(StuntedRange(-3, 9)), suspend(trivial_module(A2), 5)):
        text = write_module(m)
        again = parse_module(text)
        assert write_module(again) == text
        assert again.content_hash() == m.content_hash()


def test_parse_rejects_garbage():
    with pytest.raises(ModuleError):
        parse_module("gen x 0\n")
    with pytest.raises(ModuleError):
        parse_module("algebra A1\ngen x 0\nsq 1 x x\n")


def test_quotient_dimensions():
    p = stunted_module(StuntedRange(0, 10), A2)
    sub, inc = submodule_generated(p, ["x1"])
    q, proj = quotient(p, inc)
    assert sub.dim + q.dim == p.dim
    assert proj.is_module_map() and inc.is_module_map()
    assert validate(q) == [] and validate(sub) == []


def test_restrict_and_sum():
    m = stunted_module(StuntedRange(0, 6), A2)
    r = restrict(m, A1)
    assert r.algebra == A1 and r.dim == m.dim and validate(r) == []
    s = direct_sum([joker(), suspend(joker(), 3)])
    assert s.dim == 10 and validate(s) == []


def test_truncate_above_flags_window():
    m = truncate_above(stunted_module(StuntedRange(0, 12), A1), 7)
    assert m.top == 7 and m.truncation == "truncated-above"


def test_identity_and_piece_matching():
    j = joker()
    assert identity_hom(j).is_isomorphism()
    hom = match_cyclic_piece(suspend(j, 4), suspend(j, 4))
    assert hom is not None and hom.is_isomorphism()
    assert match_cyclic_piece(j, suspend(j, 1)) is None


def test_dual_and_tensor_units():
    f2 = trivial_module(A2)
    assert same_diagram(dual(f2), f2) == []
    j = joker()
    unit = tensor(j, trivial_module(A1))
    assert unit.action == j.action and unit.degrees == j.degrees


def test_l0_tensor_dual_dimensions():
    from sqext.projspace import build_L0

    l0 = build_L0()
    t = tensor(l0, dual(l0))
    expected = {}
    for a in l0.degrees:
        for b in l0.degrees:
            expected[a - b] = expected.get(a - b, 0) + 1
    assert t.graded_dims() == dict(sorted(expected.items()))


def test_tensor_sq1_is_a_derivation():
    m1, m2 = stunted_module(StuntedRange(0, 4), A1), stunted_module(StuntedRange(1, 5), A1)
    t = tensor(m1, m2)
    for i in range(m1.dim):
        for j in range(m2.dim):
            v = t.index(f"{m1.names[i]}#{m2.names[j]}")  # pair (i, j) sits at i * dim(m2) + j
            expected = 0
            for k in range(m1.dim):
                if m1.sq(1, 1 << i) >> k & 1:
                    expected ^= 1 << (k * m2.dim + j)
            for k in range(m2.dim):
                if m2.sq(1, 1 << j) >> k & 1:
                    expected ^= 1 << (i * m2.dim + k)
            assert t.sq(1, 1 << v) == expected


def test_suspension_identities():
    j = joker()
    assert write_module(suspend(j, 0)) == write_module(j)
    assert write_module(suspend(suspend(j, 3), -3)) == write_module(j)
    assert suspend(trivial_module(A2), 8).degrees == (8,)


def test_quotient_extremes():
    j = joker()
    zero_sub, inc0 = submodule_generated(j, [])
    q, _ = quotient(j, inc0)
    assert q.dim == j.dim
    full, inc = submodule_generated(j, ["j0"])
    assert full.dim == j.dim and quotient(j, inc)[0].dim == 0


def test_submodule_generation_is_idempotent():
    p = stunted_module(StuntedRange(-1, 8), A2)
    sub, inc = submodule_generated(p, ["x0", "x1"])
    assert sorted(sub.degrees) == [0, 1, 2, 4, 8]
    again, _ = submodule_generated(sub, sub.names)
    assert again.degrees == sub.degrees


def test_sum_of_shifted_a2moda1():
    from sqext.projspace import a2moda1

    s = direct_sum([suspend(a2moda1(), 8 * k - 1) for k in range(4)])
    assert s.bottom == -1 and s.dim == 32 and validate(s) == []
    assert direct_sum([joker()]).graded_dims() == joker().graded_dims()


def test_induced_module_of_f2_is_a_mod_a1():
    from sqext.fpmodule import induced_module

    ind = induced_module(trivial_module(A1), 12)
    assert ind.induced.dims_list(0, 8) == [1, 0, 0, 0, 1, 0, 1, 1, 1]
    assert ind.phi.is_isomorphism() and not ind.relation_violations


def test_one_stage_filtration():
    from sqext.fpmodule import Filtration, associated_graded

    j = joker()
    full = [1 << i for i in range(j.dim)]
    pieces = associated_graded(Filtration(j, [full], ["all"]))
    assert len(pieces) == 1 and pieces[0].graded_dims() == j.graded_dims()
