"""Command-line front end.

Exit codes: 0 success, 1 certification or reproduction failure, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .decomposition import decompose
from .linalg import as_dims, matrix_from_json
from .reproduce import run as run_reproduce
from .sepmax import SepMaxCache, seesaw_max, witness_sepmax
from .sweep import ConfigError, SweepConfig, run_detect
from .witnesses import WITNESSES, certify_witness, make_witness, wl_p

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError("--config", str(exc)) from None
    except json.JSONDecodeError as exc:
        raise ConfigError("--config", f"invalid JSON: {exc}") from None


def _load_matrix(path, dims):
    if dims is None:
        raise ConfigError("--dims", "required with --matrix")
    if isinstance(path, str):
        try:
            obj = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError("--matrix", str(exc)) from None
        except json.JSONDecodeError as exc:
            raise ConfigError("--matrix", f"invalid JSON: {exc}") from None
    else:
        obj = path
    dims = dims if isinstance(dims, list) else [int(x) for x in str(dims).split(",")]
    try:
        return matrix_from_json(obj), as_dims(dims)
    except (KeyError, ValueError) as exc:
        raise ConfigError("--matrix", str(exc)) from None


def _parse_params(items: list[str] | None) -> dict:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError("--param", f"expected name=value, got {item!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise ConfigError(f"--param {key}", f"not a number: {value!r}") from None
    return out


def _emit(text: str, out: str | None, filename: str) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / filename).write_text(text)


def _witness_from(args, cfg: dict):
    name = cfg.get("witness", args.witness)
    params = {**cfg.get("params", {}), **_parse_params(args.param)}
    if name is None:
        raise ConfigError("witness", "required")
    if name not in WITNESSES:
        raise ConfigError("witness", f"unknown witness {name!r}")
    if cfg.get("unchecked", getattr(args, "unchecked", False)):
        if name != "wl_p":
            raise ConfigError("unchecked", "only wl_p can be built outside its range")
        return wl_p(params["p"], check_range=False)
    try:
        return make_witness(name, params)
    except ValueError as exc:
        raise ConfigError("params", str(exc)) from None


def cmd_detect(args) -> int:
    cfg = _load_config(args.config)
    if args.config is None:
        raise ConfigError("--config", "detect needs a sweep config")
    if args.seed is not None:
        cfg["seed"] = args.seed
    report = run_detect(SweepConfig.from_dict(cfg))
    if args.format == "json":
        _emit(report.to_json(), args.out, "detect.json")
    elif args.out is None:
        _emit(report.to_csv(), None, "")
    else:
        _emit(report.to_csv(), args.out, "detect.csv")
        _emit(report.to_json(), args.out, "detect.json")
    if args.out is not None:
        for iv in report.intervals:
            print(f"{iv.evaluator:>8} {iv.axis}: [{iv.lo:.6f}, {iv.hi:.6f}]{'' if iv.verified else ' (unverified)'}")
    return EXIT_OK


def cmd_certify(args) -> int:
    cfg = _load_config(args.config)
    w = _witness_from(args, cfg)
    seed = args.seed if args.seed is not None else cfg.get("seed", 42)
    samples = args.samples if args.samples is not None else cfg.get("samples", 10_000)
    report = certify_witness(w, samples=int(samples), seed=int(seed), scan_zoo=args.zoo or cfg.get("zoo", False))
    _emit(json.dumps(report.to_dict(), indent=1), args.out, "certify.json")
    return EXIT_FAIL if report.suspect else EXIT_OK


def cmd_sepmax(args) -> int:
    cfg = _load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    restarts = args.restarts if args.restarts is not None else cfg.get("restarts", 64)
    matrix = args.matrix or cfg.get("matrix")
    if matrix is not None:
        h, dims = _load_matrix(matrix, args.dims or cfg.get("dims"))
        try:
            res = seesaw_max(h, dims, restarts=int(restarts), seed=int(seed))
        except ValueError as exc:
            raise ConfigError("--matrix", str(exc)) from None
    else:
        w = _witness_from(args, cfg)
        if args.cache:
            res = SepMaxCache(args.cache).get(w, int(restarts), int(seed))
        else:
            res = witness_sepmax(w, restarts=int(restarts), seed=int(seed))
    _emit(json.dumps(res.to_dict(), indent=1), args.out, "sepmax.json")
    return EXIT_OK


def cmd_decompose(args) -> int:
    cfg = _load_config(args.config)
    matrix = args.matrix or cfg.get("matrix")
    if matrix is not None:
        h, dims = _load_matrix(matrix, args.dims or cfg.get("dims"))
    else:
        w = _witness_from(args, cfg)
        h, dims = w.matrix, w.dims
    if args.square or cfg.get("square", False):
        h = h @ h
    try:
        res = decompose(h, dims)
    except ValueError as exc:
        raise ConfigError("matrix", str(exc)) from None
    if args.format == "json":
        _emit(json.dumps(res.to_dict(), indent=1), args.out, "decompose.json")
    else:
        _emit(res.to_csv(), args.out, "decompose.csv")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    criteria = None
    if args.criteria:
        try:
            criteria = [int(c) for c in args.criteria.split(",")]
        except ValueError:
            raise ConfigError("--criteria", "comma-separated integers expected") from None
        bad = [c for c in criteria if not 1 <= c <= 13]
        if bad:
            raise ConfigError("--criteria", f"no such criterion {bad}")
    report = run_reproduce(criteria, n_separable=args.samples or 10_000)
    if args.format == "json":
        _emit(report.to_json(), args.out, "reproduce.json")
    else:
        _emit(report.table(), args.out, "reproduce.txt")
        if args.out is not None:
            _emit(report.to_json(), args.out, "reproduce.json")
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--out", help="output directory (default: stdout)")
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    witness = argparse.ArgumentParser(add_help=False)
    witness.add_argument("--witness", choices=sorted(WITNESSES))
    witness.add_argument("--param", action="append", metavar="NAME=VALUE")

    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument("--matrix", help="JSON file with a {rows, cols, re, im} matrix")
    matrix.add_argument("--dims", help="subsystem dimensions, e.g. 2,2")

    parser = argparse.ArgumentParser(prog="nlew", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", parents=[common], help="sweep a state family and extract detection intervals")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("certify", parents=[common, witness], help="check a witness on sampled separable states")
    p.add_argument("--samples", type=int)
    p.add_argument("--zoo", action="store_true", help="also list registered states the witness detects")
    p.add_argument("--unchecked", action="store_true", help="build wl_p without its range check")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sepmax", parents=[common, witness, matrix], help="maximize Tr(W^2 rho) over separable states")
    p.add_argument("--restarts", type=int)
    p.add_argument("--cache", help="JSON sidecar for cached results")
    p.set_defaults(func=cmd_sepmax)

    p = sub.add_parser("decompose", parents=[common, witness, matrix], help="expand an operator in local observables")
    p.add_argument("--square", action="store_true", help="decompose W^2 instead of W")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reproduce", parents=[common], help="run every reproduction checkpoint")
    p.add_argument("--criteria", help="comma-separated subset, e.g. 1,2,8")
    p.add_argument("--samples", type=int, help="separable samples per positivity check (default 10000)")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
