"""``sqext`` command line: generate modules, resolve, chart, diff, verify.

Exit codes: 0 success, 1 verification or diff failure, 2 usage or validity error.
Resolutions are cached under ``$SQEXT_CACHE_DIR`` (default ``~/.cache/sqext``),
keyed by a hash of algebra, module file, bounds and engine version.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from .builtins import BuiltinConfig, UnknownBuiltin, builtin_module, builtin_names
from .charts import FixtureError, diff, parse_fixture, render_svg, render_text
from .fixtures import CHARTS, load_chart
from .fpmodule import FpModule, ModuleError, dual, parse_module, tensor, write_module
from .resolution import (
    CACHE_VERSION,
    FreeResolution,
    WindowError,
    bar_ext_oracle,
    compare_dims,
    ext_chart,
    minimal_resolution,
    resolution_from_text,
    resolution_to_text,
    validity_bound,
)
from .steenrod import AlgebraSpec, parse_algebra
from .verify import SUITES, run_suite

CACHE_ENV = "SQEXT_CACHE_DIR"
DEFAULT_BOUNDS = (8, None)  # s_max, t_max (None: s_max + 20)
TRUNCATED_A_BOUNDS = (10, 48)  # defaults over A:<cap>


class UsageError(Exception):
    pass


@dataclass
class JobConfig:
    algebra: AlgebraSpec
    module: FpModule
    s_max: int
    t_max: int
    threads: int = 1
    out: Optional[str] = None
    fmt: str = "txt"

    def __post_init__(self):
        if self.s_max < 0 or self.threads < 1:
            raise UsageError("--smax must be non-negative and --threads positive")


# -- module arguments ------------------------------------------------------------


def load_module(spec: str, algebra: AlgebraSpec, top: int) -> FpModule:
    """A module file path, or a builtin name from the registry."""
    path = Path(spec)
    if path.is_file():
        m = parse_module(path.read_text())
        if m.algebra != algebra:
            raise UsageError(f"{spec} is over {m.algebra.name}, not {algebra.name}")
        return m
    try:
        return builtin_module(spec, BuiltinConfig(algebra, top))
    except UnknownBuiltin:
        raise UsageError(f"{spec!r} is neither a file nor a builtin ({', '.join(builtin_names())})") from None


def job(args) -> JobConfig:
    algebra = parse_algebra(args.algebra)
    m = load_module(args.module, algebra, args.top)
    if getattr(args, "second", None):
        n = load_module(args.second, algebra, args.top)
        if not n.is_finite:
            raise UsageError("the second module must be finite")
        m = tensor(m, dual(n))
    s_default, t_default = TRUNCATED_A_BOUNDS if algebra.cap is not None else DEFAULT_BOUNDS
    s_max = s_default if args.smax is None else args.smax
    t_max = args.tmax
    if t_max is None:
        t_max = s_max + 20 if t_default is None else t_default
        bound = validity_bound(algebra, m, s_max)
        if bound is not None:
            t_max = min(t_max, bound)
    return JobConfig(algebra, m, s_max, t_max, args.threads, args.out, getattr(args, "format", "txt"))


# -- cache -------------------------------------------------------------------------


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "sqext")


def cache_key(cfg: JobConfig) -> str:
    h = hashlib.sha256()
    for part in (cfg.algebra.name, cfg.module.to_text(), f"{cfg.s_max} {cfg.t_max}", str(CACHE_VERSION)):
        h.update(part.encode())
        h.update(b"\0")
    return h.hexdigest()[:32]


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def resolve_cached(cfg: JobConfig, log=None) -> FreeResolution:
    path = cache_dir() / f"{cache_key(cfg)}.res"
    if path.is_file():
        try:
            res = resolution_from_text(path.read_text(), cfg.module)
            if (res.algebra, res.s_max, res.t_max) == (cfg.algebra, cfg.s_max, cfg.t_max):
                if log:
                    log(f"cache hit {path}")
                return res
        except (ValueError, KeyError):
            pass
    res = minimal_resolution(cfg.algebra, cfg.module, cfg.s_max, cfg.t_max, cfg.threads)
    atomic_write(path, resolution_to_text(res))
    if log:
        log(f"cache written {path}")
    return res


def emit(text: str, out: Optional[str]) -> None:
    if out:
        atomic_write(Path(out), text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- commands -----------------------------------------------------------------------


def cmd_generate(args) -> int:
    name = ":".join(args.name)
    algebra = parse_algebra(args.algebra)
    m = load_module(name, algebra, args.top)
    emit(write_module(m), args.out)
    return 0


def cmd_resolve(args) -> int:
    cfg = job(args)
    res = resolve_cached(cfg, log=lambda s: print(s, file=sys.stderr))
    lines = [f"{cfg.algebra.name} resolution through s={cfg.s_max}, t={cfg.t_max}; trust: {res.trust_description}"]
    for s in range(cfg.s_max + 1):
        lines.append(f"s={s}: {len(res.gens[s])} generators in degrees {res.gens[s]}")
    if args.out:
        atomic_write(Path(args.out), resolution_to_text(res))
    print("\n".join(lines))
    return 0


def _chart(args):
    cfg = job(args)
    res = resolve_cached(cfg)
    return cfg, ext_chart(res, name=args.module)


def cmd_ext(args) -> int:
    cfg, chart = _chart(args)
    rows = ["s t stem dim trusted"]
    for (s, t), n in chart.nonzero().items():
        rows.append(f"{s} {t} {t - s} {n} {'yes' if chart.trusted(s, t) else 'no'}")
    emit("\n".join(rows), cfg.out)
    return 0


def cmd_chart(args) -> int:
    cfg, chart = _chart(args)
    lo, hi = args.stems if args.stems else (None, None)
    if cfg.fmt == "json":
        text = chart.to_json()
    elif cfg.fmt == "svg":
        text = render_svg(chart, lo, hi)
    else:
        text = render_text(chart, lo, hi)
    emit(text, cfg.out)
    return 0


def _fixture(spec: str):
    if spec in CHARTS:
        return load_chart(spec)
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"fixture {spec!r} is neither a file nor one of {', '.join(CHARTS)}")
    return parse_fixture(path.read_text())


def cmd_diff(args) -> int:
    if not args.fixture:
        raise UsageError("diff needs --fixture")
    fx = _fixture(args.fixture)
    _, chart = _chart(args)
    rep = diff(chart, fx)
    print(rep)
    return 0 if rep.ok else 1


def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    rep = run_suite(args.suite)
    emit(str(rep), args.out)
    return 0 if rep.ok else 1


def cmd_oracle(args) -> int:
    cfg = job(args)
    if cfg.s_max > 4:
        raise UsageError("the bar complex oracle is limited to --smax <= 4")
    bar = bar_ext_oracle(cfg.algebra, cfg.module, cfg.s_max, cfg.t_max)
    res = minimal_resolution(cfg.algebra, cfg.module, cfg.s_max, cfg.t_max, cfg.threads, allow_untrusted=True)
    window = [(s, t) for s in range(cfg.s_max + 1) for t in range(cfg.module.bottom, cfg.t_max + 1)]
    rep = compare_dims(bar.dim, res.count, window)
    print(rep)
    return 0 if rep.ok else 1


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sqext", description="Ext over sub-Hopf algebras of the Steenrod algebra.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, module=True):
        if module:
            sp.add_argument("module", help="module file or builtin name")
            sp.add_argument("--second", help="second Ext variable (finite); computes Ext(M, N) as Ext(M (x) DN)")
        sp.add_argument("--algebra", default="A2", help="A1, A2 or A:<cap>")
        sp.add_argument("--smax", type=int, default=None, help="default 8, or 10 over A:<cap>")
        sp.add_argument("--tmax", type=int, default=None, help="default smax+20, or 48 over A:<cap>; never past the validity bound")
        sp.add_argument("--top", type=int, default=41, help="window top for infinite builtins")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--out", default=None)

    g = sub.add_parser("generate", help="write a builtin module in the module file format")
    g.add_argument("name", nargs="+", help="builtin name, e.g. M0, A2modA1 or P -1 8")
    g.add_argument("--algebra", default="A2")
    g.add_argument("--top", type=int, default=41)
    g.add_argument("--out", default=None)
    g.set_defaults(fn=cmd_generate)

    r = sub.add_parser("resolve", help="compute (or load) a minimal resolution")
    common(r)
    r.set_defaults(fn=cmd_resolve)

    e = sub.add_parser("ext", help="list Ext dimensions")
    common(e)
    e.set_defaults(fn=cmd_ext)

    c = sub.add_parser("chart", help="render an Ext chart")
    common(c)
    c.add_argument("--format", choices=("txt", "svg", "json"), default="txt")
    c.add_argument("--stems", type=int, nargs=2, metavar=("LO", "HI"))
    c.set_defaults(fn=cmd_chart)

    d = sub.add_parser("diff", help="compare a computed chart with a fixture")
    common(d)
    d.add_argument("--fixture", help=f"fixture file or one of {', '.join(CHARTS)}")
    d.set_defaults(fn=cmd_diff)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", help=f"all, {', '.join(SUITES)}")
    v.add_argument("--out", default=None)
    v.set_defaults(fn=cmd_verify)

    o = sub.add_parser("oracle", help="check the resolution against the bar complex")
    common(o)
    o.set_defaults(fn=cmd_oracle, smax=3, tmax=12)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.fn(args)
    except (UsageError, WindowError, ModuleError, FixtureError, UnknownBuiltin, ValueError) as exc:
        print(f"sqext: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
