import pytest
from hypothesis import given, settings, strategies as st

from sqext.builtins import BuiltinConfig, builtin_module
from sqext.fpmodule import dual, quotient, submodule_generated, suspend, tensor, trivial_module
from sqext.projspace import StuntedRange, build_L0, build_M0, stunted_module
from sqext.resolution import (
    WindowError,
    bar_ext_oracle,
    change_of_rings_check,
    compare_dims,
    default_trust,
    ext_chart,
    hom_complex_ext,
    les_check,
    minimal_resolution,
    resolution_from_text,
    resolution_to_text,
    validity_bound,
)
from sqext.steenrod import get_algebra

A1, A2 = get_algebra("A1"), get_algebra("A2")

# (algebra, builtin, s_max, t_max): every resolution the property tests inspect
CASES = [
    ("A1", "F2", 6, 20),
    ("A1", "L0", 5, 18),
    ("A1", "P:-5:7", 4, 12),
    ("A2", "F2", 5, 20),
    ("A2", "L0", 4, 16),
    ("A2", "A2modA1", 4, 20),
    ("A2", "LtensorDL0", 3, 10),
    ("A2", "M0", 4, 30),
]


def resolve(alg, name, s_max, t_max, threads=1):
    algebra = get_algebra(alg)
    m = builtin_module(name, BuiltinConfig(algebra))
    return minimal_resolution(algebra, m, s_max, t_max, threads)


@pytest.fixture(scope="module", params=CASES, ids=[f"{c[1]}/{c[0]}" for c in CASES])
def res(request):
    return resolve(*request.param)


def test_d_squared_is_zero(res):
    assert res.check_d_squared() == []


def test_minimal(res):
    assert res.check_minimal() == []


def test_exact(res):
    assert res.check_exact() == []


def test_cache_round_trip(res):
    text = resolution_to_text(res)
    again = resolution_from_text(text, res.module)
    assert again.gens == res.gens and again.diffs == res.diffs
    assert resolution_to_text(again) == text


@settings(max_examples=12)
@given(st.sampled_from(CASES[:6]), st.integers(2, 4))
def test_thread_count_does_not_change_the_resolution(case, threads):
    alg, name, s_max, t_max = case
    serial = resolve(alg, name, s_max, min(t_max, 14))
    parallel = resolve(alg, name, s_max, min(t_max, 14), threads)
    assert resolution_to_text(serial) == resolution_to_text(parallel)


def test_cache_rejects_other_module():
    r = resolve("A1", "F2", 2, 6)
    with pytest.raises(ValueError):
        resolution_from_text(resolution_to_text(r), build_L0(A2))


def test_ext_a1_low_degrees():
    c = ext_chart(resolve("A1", "F2", 4, 12))
    assert [c.dim(s, s) for s in range(5)] == [1] * 5  # h0 tower
    assert c.dim(1, 2) == 1 and c.dim(2, 4) == 1  # h1, h1^2
    assert c.dim(3, 7) == 1 and c.dim(3, 6) == 0  # h1^3 = 0, the stem-4 class in s=3
    assert {(0, 0), (0, 1), (4, 3)} <= c.line_sources("h0")
    assert (1, 1) not in c.line_sources("h0")  # h0 h1 = 0
    assert {(0, 0), (1, 1)} <= c.line_sources("h1") and (2, 2) not in c.line_sources("h1")


def test_window_error_on_truncated_module():
    m = build_M0(0, 30).module
    assert validity_bound(A2, m, 3) == 32
    with pytest.raises(WindowError):
        minimal_resolution(A2, m, 3, 40)
    r = minimal_resolution(A2, m, 3, 40, allow_untrusted=True)
    assert (3, 40) in r.untrusted() and (3, 32) not in r.untrusted()


def test_trust_over_truncated_algebra():
    trust, _, desc = default_trust(get_algebra("A", 10), trivial_module(get_algebra("A", 10)))
    assert trust(3, 10) and not trust(3, 11) and "10" in desc


def test_bar_oracle_small():
    bar = bar_ext_oracle(A1, trivial_module(A1), 3, 10)
    res = minimal_resolution(A1, trivial_module(A1), 3, 10)
    window = [(s, t) for s in range(4) for t in range(11)]
    assert compare_dims(bar.dim, res.count, window).ok


def test_hom_complex_agrees_with_tensor_dual():
    n = stunted_module(StuntedRange(0, 2), A1)
    m = trivial_module(A1)
    via_hom = hom_complex_ext(minimal_resolution(A1, m, 4, 14), n)
    via_tensor = ext_chart(minimal_resolution(A1, tensor(m, dual(n)), 3, 12))
    for s in range(4):
        for t in range(-2, 11):
            assert via_hom.dim(s, t) == via_tensor.dim(s, t), (s, t)


def test_long_exact_sequence():
    p = stunted_module(StuntedRange(0, 6), A1)
    sub, inc = submodule_generated(p, ["x2"])
    _, proj = quotient(p, inc)
    assert les_check(inc, proj, 3, 10) == []


def test_change_of_rings_small():
    rep = change_of_rings_check(trivial_module(A1), 10, 3, 10)
    assert rep.ok and rep.compared > 0


def test_suspension_shifts_ext():
    base = ext_chart(resolve("A1", "F2", 3, 10))
    shifted = ext_chart(minimal_resolution(A1, suspend(trivial_module(A1), 3), 3, 13))
    for s in range(4):
        for t in range(11):
            assert shifted.dim(s, t + 3) == base.dim(s, t)


def test_mismatched_algebra_rejected():
    with pytest.raises(ValueError):
        minimal_resolution(A2, trivial_module(A1), 2, 4)


def test_free_module_has_no_higher_ext():
    from sqext.fpmodule import cyclic_quotient_of_algebra

    free = cyclic_quotient_of_algebra(A1, ())
    assert free.dim == 8
    r = minimal_resolution(A1, free, 3, 10)
    assert r.gens[0] == [0] and not any(r.gens[s] for s in range(1, 4))
    assert ext_chart(r).h0 == set() and ext_chart(r).h1 == set()


def test_ext_into_zero_module_vanishes():
    from sqext.fpmodule import zero_module

    c = hom_complex_ext(minimal_resolution(A1, trivial_module(A1), 3, 8), zero_module(A1))
    assert not c.nonzero()


def test_identity_induces_identity_on_ext():
    from sqext.fpmodule import identity_hom
    from sqext.resolution import ext_of_hom

    r = minimal_resolution(A1, builtin_module("L0", BuiltinConfig(A1)), 3, 10)
    for (s, t), mat in ext_of_hom(identity_hom(r.module), r, r).items():
        assert mat.to_lists() == [[int(i == j) for j in range(mat.ncols)] for i in range(mat.nrows)], (s, t)


def test_m0_short_exact_sequence_on_ext():
    data = build_M0(0, 20)
    assert les_check(data.f, data.q, 2, 8) == []


def test_bar_oracle_l0_over_a2():
    m = build_L0()
    bar = bar_ext_oracle(A2, m, 2, 10)
    res = minimal_resolution(A2, m, 2, 10)
    assert compare_dims(bar.dim, res.count, [(s, t) for s in range(3) for t in range(11)]).ok


def test_bar_oracle_row_zero_counts_generators():
    m = builtin_module("L0", BuiltinConfig(A2))
    bar = bar_ext_oracle(A2, m, 0, 10)
    assert [bar.dim(0, t) for t in range(11)] == [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]


def test_resolution_of_f2_over_a1_generator_degrees():
    r = resolve("A1", "F2", 9, 30)
    assert r.gens[0] == [0] and r.gens[1] == [1, 2] and r.gens[2] == [2, 4]
