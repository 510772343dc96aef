"""Command-line front end.

Exit codes: 0 pass, 2 usage or parse error, 3 mathematical FAIL, 4 IO error.
``$SKOROKHOD_OUT`` sets the default output directory.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .catalog import (
    INFINITE_FAMILIES,
    MULTI_FAMILIES,
    PATH_SEQUENCES,
    infinite_family,
    integrator_catalog,
    multi_family,
    path_sequence,
    sequence_from_files,
)
from .config import FORMATS, RunConfig
from .convergence import (
    WitnessFamily,
    distance_convergence,
    infinite_horizon_s_test,
    multidim_s_test,
    relative_s_compactness,
    s_dual_test,
    s_witness_check,
)
from .core import MultiPath
from .errors import ConfigurationError, SkorokhodError
from .functionals import oscillations, quantize, upcrossings
from .io import dumps_json, load_path, path_from_dict, write_json, write_text
from .reports import ConvergenceReport, _clean

__all__ = ["main", "build_parser", "ENV_OUT", "EXIT_PASS", "EXIT_USAGE", "EXIT_FAIL", "EXIT_IO"]

ENV_OUT = "SKOROKHOD_OUT"
EXIT_PASS, EXIT_USAGE, EXIT_FAIL, EXIT_IO = 0, 2, 3, 4

MODES = ("s-dual", "s-witness", "j1", "mj1", "uniform", "inf-horizon", "multidim")


class UsageError(SkorokhodError):
    pass


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _band_list(text: str) -> tuple[tuple[float, float], ...]:
    out = []
    for item in text.split(","):
        a, sep, b = item.partition(":")
        try:
            out.append((float(a), float(b)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"expected a:b pairs, got {item!r}") from exc
        if not sep:
            raise argparse.ArgumentTypeError(f"expected a:b pairs, got {item!r}")
    return tuple(out)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    d = RunConfig()
    p.add_argument("--tol", type=float, default=d.tol, help="convergence tolerance")
    p.add_argument("--depth", type=int, default=None, help=f"sequence depth (default {d.depth})")
    p.add_argument("--tau-tol", type=float, default=None,
                   help="tolerance for the tau-precondition on catalog entries (default: --tol)")
    p.add_argument("--mj1-eps", type=float, default=d.mj1_eps, help="mJ1 embedding margin")
    p.add_argument("--catalog", default="",
                   help="comma-separated integrator catalog ids (default, slope, ramps, "
                        "shrinking_spike, lemma_witness, refuter)")
    p.add_argument("--level", type=int, default=d.level, help="test-family level L (1..10)")
    p.add_argument("--levels", type=_band_list, default=d.levels, help="bands a:b,a:b,...")
    p.add_argument("--etas", type=_float_list, default=d.etas, help="oscillation thresholds")
    p.add_argument("--eps-grid", type=_float_list, default=d.eps_grid, help="quantization eps grid")
    p.add_argument("--T-grid", type=_float_list, default=d.T_grid, help="horizons for inf-horizon")
    p.add_argument("--format", dest="formats", default=",".join(d.formats),
                   help=f"comma-separated output formats from {','.join(FORMATS)}")
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--grid", type=int, default=d.grid, help="partner jumps tried per jump (J1 DP)")
    p.add_argument("--horizon", type=float, default=d.horizon, help="horizon for catalog families")
    p.add_argument("--out", default=None, help=f"output directory (default ${ENV_OUT})")


def _config(args: argparse.Namespace, depth: int | None = None) -> RunConfig:
    kwargs = {
        "tol": args.tol,
        "mj1_eps": args.mj1_eps,
        "catalog": tuple(s.strip() for s in args.catalog.split(",") if s.strip()),
        "level": args.level,
        "levels": args.levels,
        "etas": args.etas,
        "eps_grid": args.eps_grid,
        "T_grid": args.T_grid,
        "formats": tuple(s.strip() for s in args.formats.split(",") if s.strip()),
        "seed": args.seed,
        "grid": args.grid,
        "tau_tol": args.tau_tol,
        "horizon": args.horizon,
    }
    depth = args.depth if args.depth is not None else depth
    if depth is not None:
        kwargs["depth"] = depth
    return RunConfig(**kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skorokhod", description="Exact analysis of step paths in Skorokhod space."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="functionals of one path file (JSON or CSV)")
    p.add_argument("path_file")
    _add_config_flags(p)

    p = sub.add_parser("converge", help="run a convergence oracle on a sequence")
    p.add_argument("sequence", nargs="?", default=None,
                   help="catalog id; omit when giving --terms/--limit")
    p.add_argument("--mode", choices=MODES, default="s-dual")
    p.add_argument("--terms", nargs="+", default=None, help="path files x_1 .. x_m")
    p.add_argument("--limit", default=None, help="path file of the candidate limit")
    p.add_argument("--witness-eps", type=float, default=1e-3,
                   help="eps for the identity witness family (s-witness mode)")
    p.add_argument("--margins", action="store_true", help="include margin series in stdout JSON")
    _add_config_flags(p)

    p = sub.add_parser("compact", help="relative S-compactness bounds of a path family")
    p.add_argument("sequence", nargs="?", default=None)
    p.add_argument("--terms", nargs="+", default=None)
    p.add_argument("--size", type=int, default=32, help="number of catalog terms")
    _add_config_flags(p)

    p = sub.add_parser("demo", help="run the demonstration suite and write a bundle")
    _add_config_flags(p)
    return parser


def _out_dir(args: argparse.Namespace) -> Path | None:
    out = args.out or os.environ.get(ENV_OUT)
    return Path(out) if out else None


def _emit(obj: Any) -> None:
    sys.stdout.write(dumps_json(obj))


# analyze ---------------------------------------------------------------------


def _analysis(x, cfg: RunConfig) -> dict[str, Any]:
    quant = []
    for eps in cfg.eps_grid:
        q = quantize(x, eps)
        quant.append({
            "eps": eps,
            "jump_count": q.jump_count,
            "stopping_times": list(q.stopping_times),
            "approximation_error": q.approximation_error(x),
            "skeleton_variation": q.skeleton.total_variation(),
            "oscillations_half_eps": oscillations(x, eps / 2),
        })
    return _clean({
        "horizon": x.horizon,
        "segments": x.n_segments,
        "sup_norm": x.sup_norm(),
        "total_variation": x.total_variation(),
        "terminal_value": x.terminal_value,
        "upcrossings": [{"a": a, "b": b, "count": upcrossings(x, a, b)} for a, b in cfg.levels],
        "oscillations": [{"eta": e, "count": oscillations(x, e)} for e in cfg.etas],
        "quantization": quant,
    })


def _analysis_csv(rep: dict[str, Any]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["quantity", "parameter", "value"])
    for key in ("horizon", "segments", "sup_norm", "total_variation", "terminal_value"):
        w.writerow([key, "", repr(rep[key])])
    for row in rep["upcrossings"]:
        w.writerow(["upcrossings", f"{row['a']!r}:{row['b']!r}", row["count"]])
    for row in rep["oscillations"]:
        w.writerow(["oscillations", repr(row["eta"]), row["count"]])
    for row in rep["quantization"]:
        w.writerow(["quantization_jumps", repr(row["eps"]), row["jump_count"]])
    return buf.getvalue()


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _config(args)
    x = load_path(args.path_file)
    rep = _analysis(x, cfg)
    _emit(rep)
    out = _out_dir(args)
    if out is not None:
        stem = Path(args.path_file).stem
        if "json" in cfg.formats:
            write_json(out / f"{stem}.analysis.json", rep)
        if "csv" in cfg.formats:
            write_text(out / f"{stem}.analysis.csv", _analysis_csv(rep))
    return EXIT_PASS


# converge --------------------------------------------------------------------


def _load_multi(path: str) -> MultiPath:
    import json

    from .errors import ParseError

    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if isinstance(obj, dict) and "components" in obj:
        return MultiPath(tuple(path_from_dict(c) for c in obj["components"]))
    return MultiPath((path_from_dict(obj),))


def _file_sequence(args: argparse.Namespace):
    if not args.terms or not args.limit:
        raise UsageError("give a catalog id, or both --terms and --limit")
    terms = [load_path(p) for p in args.terms]
    return sequence_from_files("files", terms, load_path(args.limit)), len(terms)


def _run_converge(args: argparse.Namespace) -> tuple[ConvergenceReport, RunConfig]:
    mode = args.mode
    if mode == "inf-horizon":
        if args.sequence is None:
            raise UsageError(f"inf-horizon needs a family id: {', '.join(INFINITE_FAMILIES)}")
        cfg = _config(args)
        fam = infinite_family(args.sequence)
        catalog = None
        if cfg.catalog:
            ids = cfg.catalog
            catalog = lambda T: integrator_catalog(ids, fam.restricted(T), cfg.level)  # noqa: E731
        rep = infinite_horizon_s_test(
            fam, cfg.T_grid, catalog, cfg.depth, cfg.tol,
            derived=not cfg.catalog, level=cfg.level, tau_tol=cfg.tau_tol,
        )
        return rep, cfg
    if mode == "multidim":
        if args.sequence is not None:
            cfg = _config(args)
            terms, limit = multi_family(args.sequence, cfg.horizon)
            name = args.sequence
        else:
            if not args.terms or not args.limit:
                raise UsageError(f"multidim needs a family id ({', '.join(MULTI_FAMILIES)}) "
                                 "or --terms/--limit")
            loaded = [_load_multi(p) for p in args.terms]
            cfg = _config(args, len(loaded))
            if cfg.depth > len(loaded):
                raise ConfigurationError(f"depth {cfg.depth} exceeds the {len(loaded)} given terms")
            terms, limit, name = (lambda n: loaded[n - 1]), _load_multi(args.limit), "files"
        if cfg.catalog:
            raise UsageError("multidim uses the default catalog per component")
        rep = multidim_s_test(terms, limit, None, cfg.depth, cfg.tol, name,
                              level=cfg.level, tau_tol=cfg.tau_tol)
        return rep, cfg

    if args.sequence is not None:
        if args.terms or args.limit:
            raise UsageError("give either a catalog id or --terms/--limit, not both")
        cfg = _config(args)
        if args.sequence not in PATH_SEQUENCES:
            raise ConfigurationError(
                f"unknown sequence id {args.sequence!r}; known: {', '.join(PATH_SEQUENCES)}"
            )
        seq = path_sequence(args.sequence, cfg.horizon)
    else:
        seq, m = _file_sequence(args)
        cfg = _config(args, m)
        if cfg.depth > m:
            raise ConfigurationError(f"depth {cfg.depth} exceeds the {m} given terms")

    if mode == "s-dual":
        catalog = integrator_catalog(cfg.catalog, seq, cfg.level) if cfg.catalog else None
        rep = s_dual_test(seq, catalog, cfg.depth, cfg.tol, derived=catalog is None,
                          bands=cfg.levels, level=cfg.level, tau_tol=cfg.tau_tol)
    elif mode == "s-witness":
        rep = s_witness_check(seq, WitnessFamily.identity(seq, args.witness_eps),
                              cfg.depth, cfg.tol, level=cfg.level)
    else:
        dist_mode = {"j1": "J1", "mj1": "mJ1", "uniform": "uniform"}[mode]
        rep = distance_convergence(seq, dist_mode, cfg.depth, cfg.tol, cfg.mj1_eps, cfg.grid)
    return rep, cfg


def _margins_csv(rep: ConvergenceReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "index", "margin"])
    for name, pts in rep.margins.items():
        for n, m in pts:
            w.writerow([name, n, repr(float(m))])
    return buf.getvalue()


def cmd_converge(args: argparse.Namespace) -> int:
    rep, cfg = _run_converge(args)
    payload = rep.to_dict(include_margins=args.margins)
    payload["config"] = cfg.to_dict()
    _emit(payload)
    out = _out_dir(args)
    if out is not None:
        stem = f"{args.sequence or 'files'}.{args.mode}"
        if "json" in cfg.formats:
            full = rep.to_dict()
            full["config"] = cfg.to_dict()
            write_json(out / f"{stem}.json", full)
        if "csv" in cfg.formats:
            write_text(out / f"{stem}.csv", _margins_csv(rep))
        if "svg" in cfg.formats and rep.margins:
            from .plots import margin_plot

            shown = dict(list(rep.margins.items())[:12])
            margin_plot(shown, out / f"{stem}.svg", title=stem, tol=cfg.tol)
    return EXIT_PASS if rep.passed else EXIT_FAIL


# compact ---------------------------------------------------------------------


def cmd_compact(args: argparse.Namespace) -> int:
    cfg = _config(args)
    if args.sequence is not None:
        seq = path_sequence(args.sequence, cfg.horizon)
        if args.size < 1:
            raise ConfigurationError("size must be positive")
        paths = [seq(n) for n in range(1, args.size + 1)]
    elif args.terms:
        paths = [load_path(p) for p in args.terms]
    else:
        raise UsageError("give a catalog id or --terms")
    rep = relative_s_compactness(paths, cfg.levels, cfg.etas, cfg.eps_grid)
    payload = rep.to_dict()
    _emit(payload)
    out = _out_dir(args)
    if out is not None and "json" in cfg.formats:
        write_json(out / f"{args.sequence or 'files'}.compact.json", payload)
    ok = rep.criterion_i and rep.criterion_ii and rep.criterion_iii
    return EXIT_PASS if ok else EXIT_FAIL


# demo ------------------------------------------------------------------------


def cmd_demo(args: argparse.Namespace) -> int:
    from .demo import run_demo, summary_dict, write_bundle

    cfg = _config(args)
    out = _out_dir(args) or Path("skorokhod-demo")
    start = time.perf_counter()

    def progress(res) -> None:
        verdict = "PASS" if res.passed else "FAIL"
        print(f"[{res.criterion}] {res.name}: {verdict}", file=sys.stderr)

    results = run_demo(cfg, progress)
    write_bundle(out, cfg, results)
    summary = summary_dict(cfg, results)
    print(f"bundle written to {out} in {time.perf_counter() - start:.1f} s", file=sys.stderr)
    for f in summary["failures"]:
        note = "documented: tolerance-sensitive" if f["documented_tol_sensitive"] else "unexpected"
        print(f"FAIL {f['name']} ({note})", file=sys.stderr)
    _emit(summary)
    return EXIT_PASS if summary["verdict"] == "PASS" else EXIT_FAIL


COMMANDS = {"analyze": cmd_analyze, "converge": cmd_converge, "compact": cmd_compact,
            "demo": cmd_demo}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_PASS
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SkorokhodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
