import pytest
from hypothesis import given, settings, strategies as st

from sqext.charts import (
    ChartFixture,
    ExtChart,
    FixtureError,
    diff,
    finite_towers,
    fixture_from_chart,
    parse_fixture,
    render_svg,
    render_text,
    shifted,
)
from sqext.fixtures import CHARTS, DIAGRAMS, compare_diagrams, diagram_of, fixture_summary, load_chart, load_diagram, parse_cell_diagram
from sqext.fpmodule import trivial_module
from sqext.projspace import build_L0
from sqext.resolution import ext_chart, minimal_resolution
from sqext.steenrod import get_algebra

A1 = get_algebra("A1")


@st.composite
def charts(draw):
    s_max = draw(st.integers(0, 5))
    t_max = draw(st.integers(0, 12))
    cells = draw(st.dictionaries(st.tuples(st.integers(0, s_max), st.integers(-4, t_max)), st.integers(1, 3), max_size=12))
    classes = [(s, t, i) for (s, t), n in cells.items() for i in range(n)]
    h0, h1 = set(), set()
    for a in classes:
        for b in classes:
            if b[0] == a[0] + 1 and b[1] == a[1] + 1 and draw(st.booleans()):
                h0.add((a, b))
            if b[0] == a[0] + 1 and b[1] == a[1] + 2 and draw(st.booleans()):
                h1.add((a, b))
    untrusted = draw(st.sets(st.tuples(st.integers(0, s_max), st.integers(-4, t_max)), max_size=4))
    return ExtChart(cells, s_max, t_max, h0, h1, untrusted, draw(st.sampled_from(["", "x", "Ext(M)"])))


@settings(max_examples=100)
@given(charts())
def test_json_round_trip(chart):
    assert ExtChart.from_json(chart.to_json()) == chart


@settings(max_examples=50)
@given(charts(), st.integers(-5, 5))
def test_shift_round_trip(chart, k):
    assert shifted(shifted(chart, k), -k) == chart


@settings(max_examples=100)
@given(charts())
def test_fixture_self_diff(chart):
    """A fixture written from a chart matches that chart, through a text round trip."""
    window = (-4, 12, chart.s_max)
    fx = fixture_from_chart(chart, "self", window)
    again = parse_fixture(fx.to_text())
    assert again.dims == fx.dims and again.h0 == fx.h0 and again.h1 == fx.h1
    assert diff(chart, again).ok


def test_diff_reports_dimension_mismatch():
    chart = ext_chart(minimal_resolution(A1, trivial_module(A1), 3, 8))
    fx = fixture_from_chart(chart, "t", (0, 5, 3))
    fx.dims[(1, 1)] = 2
    rep = diff(chart, fx)
    assert not rep.ok and rep.dim_mismatches == [(1, 1)]


def test_diff_skips_untrusted():
    chart = ExtChart({(0, 0): 1}, 1, 1, untrusted={(1, 1)})
    fx = ChartFixture("t", (0, 0, 1), {(0, 0): 1, (0, 1): 5})
    rep = diff(chart, fx)
    assert rep.ok and rep.skipped == [(0, 1)]


@pytest.mark.parametrize("text", ["window 0 1 1\n", "fig a\nwindow 0 1\n", "fig a\nwindow 0 1 1\ndot 5 0\n", "fig a\nwindow 0 1 1\nline h2 0 0\n"])
def test_bad_fixtures_rejected(text):
    with pytest.raises(FixtureError):
        parse_fixture(text)


def test_finite_towers_on_synthetic_chart():
    # a tower of length 3 at stem -5 with trusted vanishing point, an untruncated one at stem 0
    dims = {(0, -5): 1, (1, -4): 1, (2, -3): 1, (0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): 1}
    h0 = {((0, -5, 0), (1, -4, 0)), ((1, -4, 0), (2, -3, 0)), ((0, 0, 0), (1, 1, 0)), ((1, 1, 0), (2, 2, 0)), ((2, 2, 0), (3, 3, 0))}
    chart = ExtChart(dims, 3, 3, h0)
    towers = finite_towers(chart, -6, 2)
    # the tail starting one filtration up is itself a finite tower; the stem-0 tower reaches the chart top
    assert [(tw.stem, tw.s, tw.length) for tw in towers] == [(-5, 0, 3), (-5, 1, 2)]


def test_renderers():
    chart = ext_chart(minimal_resolution(A1, trivial_module(A1), 4, 12))
    text = render_text(chart, 0, 8)
    assert text.splitlines()[-1].strip().startswith("stems 0..8")
    svg = render_svg(chart, 0, 8)
    assert svg.startswith("<svg") and svg.count("<circle") == sum(chart.dim(s, t) for s in range(5) for t in range(s, s + 9))


@pytest.mark.parametrize("name", CHARTS)
def test_stored_charts_parse_with_provenance(name):
    fx = load_chart(name)
    assert fx.dims and fx.notes


@pytest.mark.parametrize("name", DIAGRAMS)
def test_stored_diagrams_parse(name):
    d = load_diagram(name)
    assert d.cells and d.notes


def test_cell_diagram_of_l0_matches_fixture():
    fx = load_diagram("cells_l0")
    assert compare_diagrams(diagram_of(build_L0(), fx.window), fx) == []


def test_cell_diagram_rejects_bad_line():
    with pytest.raises(FixtureError):
        parse_cell_diagram("diagram x\nwindow 0 4\ncell 0\ncell 2\nsq 1 0 2\n")


def test_fixture_summary_lists_everything():
    assert set(fixture_summary()) == set(CHARTS) | set(DIAGRAMS)


def test_empty_chart_renders_dots():
    text = render_text(ExtChart({}, 2, 6), 0, 3)
    assert [row.split("|")[1] for row in text.splitlines()[:3]] == ["....", "....", "...."]
    assert render_text(ExtChart({}, 2, 4), 0, 3).splitlines()[0].endswith("?")  # t = 5 is not covered


def test_single_class_svg():
    svg = render_svg(ExtChart({(0, 0): 1}, 0, 0))
    assert svg.count("<circle") == 1


def test_tower_svg_segments():
    n = 5
    dims = {(s, s): 1 for s in range(n)}
    h0 = {((s, s, 0), (s + 1, s + 1, 0)) for s in range(n - 1)}
    svg = render_svg(ExtChart(dims, n - 1, n - 1, h0))
    assert svg.count('class="h0"') == n - 1


def test_renderers_are_byte_stable():
    a = ext_chart(minimal_resolution(A1, trivial_module(A1), 5, 16))
    b = ext_chart(minimal_resolution(A1, trivial_module(A1), 5, 16, threads=3))
    assert render_svg(a) == render_svg(b) and render_text(a) == render_text(b)


def test_doubled_classes_print_as_2():
    from sqext.builtins import builtin_module

    a2 = get_algebra("A2")
    chart = ext_chart(minimal_resolution(a2, builtin_module("LtensorDL0"), 2, 6))
    assert "2" in render_text(chart, -4, 4, 2)
