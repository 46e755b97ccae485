import json

import pytest

from sqext.cli import cache_key, job, build_parser, main


@pytest.fixture(autouse=True)
def cache(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("SQEXT_CACHE_DIR", str(d))
    return d


def test_generate_writes_module(tmp_path, capsys):
    assert main(["generate", "P", "-1", "8"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("algebra A2") and "gen x-1 -1" in out
    path = tmp_path / "p.mod"
    assert main(["generate", "A2modA1", "--out", str(path)]) == 0
    assert "gen a17 17" in path.read_text()


def test_module_file_argument(tmp_path, capsys):
    path = tmp_path / "l0.mod"
    main(["generate", "L0", "--algebra", "A1", "--out", str(path)])
    assert main(["ext", str(path), "--algebra", "A1", "--smax", "2", "--tmax", "6"]) == 0
    assert capsys.readouterr().out.startswith("s t stem dim trusted")
    assert main(["ext", str(path), "--algebra", "A2", "--smax", "2", "--tmax", "6"]) == 2


def test_resolve_uses_cache(cache, capsys):
    args = ["resolve", "F2", "--algebra", "A1", "--smax", "3", "--tmax", "10"]
    assert main(args) == 0
    first = capsys.readouterr()
    assert "cache written" in first.err and "s=3: 2 generators" in first.out
    files = list(cache.glob("*.res"))
    assert len(files) == 1 and not list(cache.glob("*.tmp"))
    assert main(args) == 0
    second = capsys.readouterr()
    assert "cache hit" in second.err and second.out == first.out


def test_corrupt_cache_is_recomputed(cache, capsys):
    args = ["resolve", "F2", "--algebra", "A1", "--smax", "2", "--tmax", "6"]
    main(args)
    (path,) = cache.glob("*.res")
    path.write_text("garbage\n")
    assert main(args) == 0
    assert "cache written" in capsys.readouterr().err


def test_cache_key_depends_on_bounds_and_algebra():
    p = build_parser()
    k = lambda argv: cache_key(job(p.parse_args(argv)))
    base = ["resolve", "F2", "--algebra", "A1", "--smax", "3", "--tmax", "10"]
    assert k(base) == k(base)
    assert k(base) != k(base[:-1] + ["11"])
    assert k(base) != k(["resolve", "F2", "--algebra", "A2", "--smax", "3", "--tmax", "10"])


def test_chart_formats(capsys):
    base = ["chart", "F2", "--algebra", "A1", "--smax", "4", "--tmax", "12"]
    assert main(base) == 0
    assert "stems" in capsys.readouterr().out
    assert main(base + ["--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [0, 0, 1] in doc["dims"]
    assert main(base + ["--format", "svg", "--stems", "0", "6"]) == 0
    assert capsys.readouterr().out.startswith("<svg")


def test_second_variable(capsys):
    assert main(["ext", "L0", "--second", "L0", "--smax", "2", "--tmax", "8"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert any(r.startswith("0 0 0 ") for r in rows)


def test_diff_against_named_fixture(capsys):
    assert main(["diff", "F2", "--algebra", "A1", "--smax", "9", "--tmax", "29", "--fixture", "ext_a1_f2"]) == 0
    assert capsys.readouterr().out.startswith("match")


def test_diff_failure_exit_code(tmp_path, capsys):
    fx = tmp_path / "wrong.chart"
    fx.write_text("fig wrong\nwindow 0 2 2\ndot 0 0\ndot 1 0\n")
    assert main(["diff", "F2", "--algebra", "A1", "--smax", "2", "--tmax", "6", "--fixture", str(fx)]) == 1
    assert "stem 1, s 0" in capsys.readouterr().out


def test_verify_and_oracle(capsys):
    assert main(["verify", "duality-a2a1"]) == 0
    assert "PASS suite duality-a2a1" in capsys.readouterr().out
    assert main(["oracle", "F2", "--algebra", "A1", "--smax", "3", "--tmax", "10"]) == 0
    assert "0 mismatches" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["generate", "NoSuchModule"],
    ["verify", "nope"],
    ["resolve", "M0", "--smax", "3", "--tmax", "60"],  # beyond the truncation bound
    ["oracle", "F2", "--algebra", "A1", "--smax", "6"],
    ["diff", "F2", "--algebra", "A1"],
    ["chart", "F2", "--algebra", "B3"],
    ["frobnicate"],
    ["resolve", "F2", "--threads", "0"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_default_tmax_respects_window(capsys):
    assert main(["resolve", "M0", "--smax", "2", "--top", "20"]) == 0
    assert "t=21" in capsys.readouterr().out


def test_truncated_algebra_defaults(capsys):
    assert main(["resolve", "F2", "--algebra", "A:12"]) == 0
    out = capsys.readouterr().out
    assert "through s=10, t=12" in out  # 48 is cut to the cap's validity bound
