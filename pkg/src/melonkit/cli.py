"""``melonkit`` command-line interface.

Subcommands::

    enumerate  count watermelons of a walker model
    series     expand a catalog ODE solution or a named closed form
    verify     check identities, theorems, D-algebraic equations, annihilation
    analyze    differential-approximant singularity analysis of a series file
    replay     re-run the command recorded in a manifest

Exit codes: 0 success, 1 failed check or runtime error, 2 usage error or
catalog checksum mismatch.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from filelock import FileLock

from melonkit import __version__
from melonkit import catalog as _cat
from melonkit.series import LaurentSeries

CACHE_ENV = "MELONKIT_CACHE"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# -- cache -------------------------------------------------------------------------


class SeriesCache:
    """Directory of JSON series files keyed by a hash of their recipe."""

    def __init__(self, root: str | os.PathLike | None):
        self.root = Path(root) if root else None
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key(recipe: dict) -> str:
        blob = json.dumps(recipe, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:24]

    def get_or_build(self, recipe: dict, build: Callable[[], LaurentSeries]) -> LaurentSeries:
        if self.root is None:
            return build()
        path = self.root / f"{self.key(recipe)}.json"
        with FileLock(str(self.root / ".lock")):
            if path.exists():
                return LaurentSeries.from_json_obj(json.loads(path.read_text())["series"])
        series = build()
        with FileLock(str(self.root / ".lock")):
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps({"recipe": recipe, "series": series.to_json_obj()}, sort_keys=True))
            tmp.replace(path)
        return series


# -- manifest ------------------------------------------------------------------------


@dataclass
class RunManifest:
    argv: list[str]
    config_hash: str
    version: str = __version__
    artifacts: list[str] = field(default_factory=list)
    seconds: float = 0.0
    checks: list[dict] = field(default_factory=list)

    def record(self, name: str, passed: bool, first_nonzero: int | None = None, **extra):
        entry = {"name": name, "passed": bool(passed), "first_nonzero": first_nonzero}
        entry.update(extra)
        self.checks.append(entry)


# -- series recipes --------------------------------------------------------------------


def _enumerated(cache: SeriesCache, rule: str, p: int, N: int) -> LaurentSeries:
    from melonkit.walkers import Rule, WalkerModel, enumerate_series

    model = WalkerModel(p, Rule.parse(rule))
    recipe = {"kind": "enumerate", "rule": model.rule.value, "p": p, "N": N}
    return cache.get_or_build(recipe, lambda: enumerate_series(model, N))


def _ode_series(cache: SeriesCache, name: str, N: int, seeds=()) -> LaurentSeries:
    from melonkit.dfinite import catalog, solve_series

    ode = catalog(name)
    seeds = tuple(sorted((int(k), str(v)) for k, v in seeds))
    recipe = {"kind": "ode", "name": name.upper(), "N": N, "seeds": [list(s) for s in seeds]}
    return cache.get_or_build(recipe, lambda: solve_series(ode, [(k, Fraction(v)) for k, v in seeds], N))


def _named_series(cache: SeriesCache, name: str, N: int) -> LaurentSeries:
    from melonkit.special import build_named

    key = name.upper()
    if key == "F3":
        # friendly 3-watermelons through the reciprocal of V3
        v = _ode_series(cache, "V3_ODE", N)
        return cache.get_or_build(
            {"kind": "named", "name": "F3", "N": N},
            lambda: (LaurentSeries.from_poly((2, -2)) - v.inv()).truncate(N),
        )
    if key == "V3":
        return _ode_series(cache, "V3_ODE", N)
    return cache.get_or_build({"kind": "named", "name": key, "N": N}, lambda: build_named(key, N))


def _write_series(series: LaurentSeries, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(series.to_json_obj(), indent=1) + "\n"
    if fmt == "csv":
        lines = ["n,coefficient"]
        top = series.order if series.order is not None else (series.degree or series.valuation)
        for n in range(series.valuation, top + 1):
            lines.append(f"{n},{series[n]}")
        return "\n".join(lines) + "\n"
    return series.to_text()


def _read_series(path: str) -> LaurentSeries:
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        obj = json.loads(text)
        return LaurentSeries.from_json_obj(obj.get("series", obj))
    if stripped.startswith("n,"):
        rows = [ln.split(",") for ln in stripped.splitlines()[1:] if ln.strip()]
        val = int(rows[0][0])
        return LaurentSeries([Fraction(c) for _, c in rows], val, int(rows[-1][0]))
    if stripped.startswith("#"):
        return LaurentSeries.from_text(text)
    # bare whitespace/comma separated coefficients c_0, c_1, ...
    vals = [Fraction(t) for t in stripped.replace(",", " ").split()]
    return LaurentSeries(vals, 0, len(vals) - 1)


def _emit(args, text: str, manifest: RunManifest):
    if args.out:
        Path(args.out).write_text(text)
        manifest.artifacts.append(str(args.out))
    else:
        sys.stdout.write(text)


# -- commands ------------------------------------------------------------------------------


def cmd_enumerate(args, cache, manifest) -> int:
    s = _enumerated(cache, args.model, args.walkers, args.terms)
    _emit(args, _write_series(s, args.format), manifest)
    return EXIT_OK


def cmd_series(args, cache, manifest) -> int:
    if args.ode:
        seeds = [tuple(x.split("=", 1)) for x in args.seed or ()]
        s = _ode_series(cache, args.ode, args.terms, seeds)
    elif args.named:
        s = _named_series(cache, args.named, args.terms)
    else:
        s = _enumerated(cache, args.model, args.walkers, args.terms)
    _emit(args, _write_series(s, args.format), manifest)
    return EXIT_OK


def _check_line(name: str, residual: LaurentSeries, N: int) -> tuple[bool, int | None]:
    ok = residual.is_zero() and (residual.order is None or residual.order >= N)
    return ok, (None if ok else residual.first_nonzero())


def _verify_checks(args, cache) -> list[tuple[str, Callable[[], tuple[bool, int | None, dict]]]]:
    from melonkit import dalgebraic, dfinite, special

    N = args.terms
    checks = []

    def provider(which, n):
        rule = {"F3": "friendly", "F3inf": "inf-friendly", "V3": "vicious"}[which]
        return _enumerated(cache, rule, 3, n)

    if args.identity:
        ids = list(special.IdentityId) if args.identity == "all" else [special.IdentityId.parse(args.identity)]
        for ident in ids:
            def run(ident=ident):
                ok, first = _check_line(ident.value, special.verify_identity(ident, N, provider), N)
                return ok, first, {}
            checks.append((f"identity {ident.value}", run))
    if args.thm:
        p = args.walkers
        if args.thm == 1:
            def run():
                v = _enumerated(cache, "vicious", p, N)
                s = _enumerated(cache, "super", p, N)
                diff = v - s
                return diff.is_zero(), diff.first_nonzero(), {"p": p}
        elif args.thm in (2, 4):
            if args.thm == 2 and p != 3:
                raise SystemExit(_usage("--thm 2 concerns p = 3; use --thm 4 for other p"))

            def run():
                f = _enumerated(cache, "friendly", p, N)
                v = _enumerated(cache, "vicious", p, N)
                diff = (f - (LaurentSeries.from_poly((2, -2)) - v.inv())).truncate(N)
                return diff.is_zero(), diff.first_nonzero(), {"p": p}
        elif args.thm == 3:
            def run():
                f = _enumerated(cache, "friendly", 3, N)
                res = dalgebraic.eval_diffpoly(dalgebraic.THM3, f)
                ok, first = _check_line("thm3", res, N - 2)
                return ok, first, {"order": res.order}
        else:
            raise SystemExit(_usage(f"no theorem {args.thm}"))
        checks.append((f"theorem {args.thm}", run))
    if args.dalgebraic:
        name = args.dalgebraic

        def run():
            v = _ode_series(cache, "V3_ODE", N)
            arg = -v.inv() if name == "eq13" else LaurentSeries.from_poly((2, -2)) - v.inv()
            res = dalgebraic.eval_diffpoly(dalgebraic.DALGEBRAIC[name], arg)
            ok, first = _check_line(name, res, N - 2)
            return ok, first, {"order": res.order}
        checks.append((f"dalgebraic {name}", run))
    if args.check == "annihilation":
        if not args.ode:
            raise SystemExit(_usage("--check annihilation needs --ode"))

        def run():
            if args.series:
                f = _read_series(args.series)
            elif args.ode.upper() == "L5":
                f = _enumerated(cache, "inf-friendly", 3, N) * _enumerated(cache, "vicious", 3, N)
            else:
                raise SystemExit(_usage("--check annihilation needs --series FILE for this operator"))
            res = dfinite.apply_op(dfinite.catalog(args.ode), f)
            ok = res.is_zero()
            return ok, (None if ok else res.first_nonzero()), {"order": res.order}
        checks.append((f"annihilation {args.ode}", run))
    return checks


def _usage(msg: str) -> int:
    print(f"melonkit: {msg}", file=sys.stderr)
    return EXIT_USAGE


def cmd_verify(args, cache, manifest) -> int:
    if _cat.catalog_fingerprint() != _cat.CATALOG_SHA256:
        print("melonkit: operator catalog checksum mismatch; refusing to verify", file=sys.stderr)
        manifest.record("catalog checksum", False)
        return EXIT_USAGE
    checks = _verify_checks(args, cache)
    if not checks:
        return _usage("verify needs --identity, --thm, --dalgebraic or --check")
    rows = []
    all_ok = True
    for name, run in checks:
        t0 = time.perf_counter()
        ok, first, extra = run()
        dt = time.perf_counter() - t0
        all_ok &= ok
        manifest.record(name, ok, first, seconds=round(dt, 3), **extra)
        rows.append({"check": name, "passed": ok, "first_nonzero": first, "terms": args.terms, **extra})
    # timings go to the manifest only, so artifacts are reproducible byte for byte
    if args.format == "json":
        out = json.dumps(rows, indent=1) + "\n"
    elif args.format == "csv":
        out = "check,passed,first_nonzero\n" + "".join(
            f"{r['check']},{r['passed']},{'' if r['first_nonzero'] is None else r['first_nonzero']}\n" for r in rows
        )
    else:
        out = "".join(
            f"{'PASS' if r['passed'] else 'FAIL'}  {r['check']}  (N={args.terms}"
            + ("" if r["first_nonzero"] is None else f", first nonzero x^{r['first_nonzero']}")
            + ")\n"
            for r in rows
        )
    _emit(args, out, manifest)
    return EXIT_OK if all_ok else EXIT_FAIL


def _int_list(text: str) -> list[int]:
    return [int(t) for t in str(text).split(",") if t.strip()]


def cmd_analyze(args, cache, manifest) -> int:
    from melonkit.approximant import DAConfig, parse_bias, scan, scan_spread

    series = _read_series(args.series)
    mode, prec = args.mode, args.precision
    if mode.startswith("float"):
        mode, _, bits = mode.partition(":")
        prec = int(bits) if bits else prec
    bias = parse_bias(args.bias) if args.bias else ()
    window = args.window if args.window in (None, "all") else int(args.window)
    grid = []
    deg_lists = [_int_list(d) for d in args.degree]
    for K in _int_list(args.order):
        for degs in deg_lists:
            d = degs[0] if len(degs) == 1 else tuple(degs)
            grid.append(DAConfig(K, d, args.inhom, bias, mode, prec, window))
    entries = scan(series, grid, prec, workers=args.workers)
    result = []
    ok = True
    for e in entries:
        item = {"config": e.config.label()}
        if e.report is None:
            ok = False
            item["error"] = e.error
        else:
            item.update(e.report.to_json_obj())
        result.append(item)
    summary = {}
    if args.target is not None:
        summary = scan_spread(entries, complex(Fraction(args.target)))
    if args.format == "json":
        out = json.dumps({"entries": result, "summary": summary}, indent=1) + "\n"
    else:
        lines = []
        for item in result:
            lines.append(f"# {item['config']}")
            if "error" in item:
                lines.append(f"  error: {item['error']}")
                continue
            for s in item["singularities"]:
                loc = s["location"].get("exact") or s["location"]["value"]
                exps = ", ".join(e.get("exact") or e["value"] for e in s["nontrivial_exponents"])
                lines.append(f"  x0={loc} mult={s['multiplicity']} exponents[{exps}] {s['classification']}")
        if summary:
            lines.append(f"# summary {json.dumps(summary)}")
        out = "\n".join(lines) + "\n"
    _emit(args, out, manifest)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_replay(args, cache, manifest) -> int:
    data = json.loads(Path(args.manifest_file).read_text())
    return main(data["argv"])


# -- parser ------------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="melonkit", description="Watermelon enumeration and series analysis.")
    p.add_argument("--version", action="version", version=f"melonkit {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "csv"), default="text")
    common.add_argument("--out", help="write the artifact here instead of stdout")
    common.add_argument("--cache", default=os.environ.get(CACHE_ENV), help=f"series cache directory (default ${CACHE_ENV})")
    common.add_argument("--manifest", help="write a run manifest (JSON) to this path")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", parents=[common], help="count watermelons")
    e.add_argument("--model", default="vicious", help="vicious | super | friendly | inf-friendly")
    e.add_argument("--walkers", type=int, default=3)
    e.add_argument("--terms", type=int, required=True)
    e.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("series", parents=[common], help="series of a catalog ODE or named function")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--ode", help="catalog operator: " + ", ".join(_cat.OPERATORS))
    g.add_argument("--named", help="H, R, S1, S2, SP, V3 or F3")
    g.add_argument("--model", help="walker model (same as enumerate)")
    s.add_argument("--walkers", type=int, default=3)
    s.add_argument("--seed", action="append", help="initial condition INDEX=VALUE (repeatable)")
    s.add_argument("--terms", type=int, required=True)
    s.set_defaults(func=cmd_series)

    v = sub.add_parser("verify", parents=[common], help="check identities and theorems")
    v.add_argument("--identity", help="identity slug or 'all'")
    v.add_argument("--thm", type=int, choices=(1, 2, 3, 4))
    v.add_argument("--dalgebraic", choices=("eq13", "thm3"))
    v.add_argument("--check", choices=("annihilation",))
    v.add_argument("--ode", help="operator for --check annihilation")
    v.add_argument("--series", help="series file for --check annihilation")
    v.add_argument("--walkers", type=int, default=3)
    v.add_argument("--terms", type=int, default=100)
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", parents=[common], help="differential-approximant analysis")
    a.add_argument("--series", required=True, help="series file (json, text or csv)")
    a.add_argument("--order", default="2", help="approximant order K, or a comma list for a scan")
    a.add_argument("--degree", action="append", default=None,
                   help="degree of every Q_k, or comma list d0,...,dK; repeat for a scan")
    a.add_argument("--inhom", type=int, default=-1)
    a.add_argument("--bias", default="", help='e.g. "1/8:3,-1:3"')
    a.add_argument("--mode", default="exact", help="exact | float:BITS")
    a.add_argument("--precision", type=int, default=256)
    a.add_argument("--window", default=None, help="number of equations, or 'all'")
    a.add_argument("--target", default=None, help="report the spread of the root nearest this value")
    a.add_argument("--workers", type=int, default=None)
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("replay", parents=[common], help="re-run a recorded manifest")
    r.add_argument("manifest_file")
    r.set_defaults(func=cmd_replay)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "degree", "unset") is None:
        args.degree = ["2"]
    recorded = [a for a in argv]
    cfg_hash = hashlib.sha256(json.dumps(recorded).encode()).hexdigest()[:16]
    manifest = RunManifest(recorded, cfg_hash)
    cache = SeriesCache(args.cache)
    t0 = time.perf_counter()
    try:
        code = args.func(args, cache, manifest)
    except SystemExit as exc:
        code = int(exc.code or 0)
    except (ValueError, ArithmeticError, KeyError, OSError) as exc:
        print(f"melonkit: error: {exc}", file=sys.stderr)
        code = EXIT_FAIL
    manifest.seconds = round(time.perf_counter() - t0, 3)
    if args.manifest and args.command != "replay":
        Path(args.manifest).write_text(json.dumps(asdict(manifest), indent=1) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
